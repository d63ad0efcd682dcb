fn main() -> std::process::ExitCode {
    geostretch::cli::main()
}
