use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn geostretch(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geostretch"))
        .current_dir(dir)
        .env_remove("GEOSTRETCH_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr)
        )
    })
}

fn workspace() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("path3.txt"), "# unit path\n3 2\n0 1 1\n1 2 1\n").unwrap();
    fs::write(dir.path().join("k2.emb"), "v 0 0 0\nv 1 1 0\ne 0 1 : 0 0 1 0\n").unwrap();
    let path = dir.path().to_path_buf();
    (dir, path)
}

#[test]
fn stretch_of_endpoint_oracle_on_path() {
    let (_guard, dir) = workspace();
    let build = geostretch(&dir, &["oracle", "build", "path3.txt", "--sources", "0", "-o", "o.bin"]);
    assert_eq!(build.status.code(), Some(0));
    let out = geostretch(&dir, &["stretch", "path3.txt", "o.bin", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["fast"]["stretch"], 3.0);
    assert_eq!(v["result"]["naive"]["stretch"], 3.0);
    assert_eq!(v["result"]["methods_agree"], true);
    assert_eq!(v["config"]["stretch"]["method"], "both");
}

#[test]
fn bound_checks_pass_on_path() {
    let (_guard, dir) = workspace();
    geostretch(&dir, &["oracle", "build", "path3.txt", "-k", "1", "-o", "o.bin"]);
    let v = json(&geostretch(&dir, &["stretch", "path3.txt", "o.bin", "--check-bounds"]));
    let checks = v["result"]["bound_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["holds"] == true));
}

#[test]
fn brute_force_optimum_on_path() {
    let (_guard, dir) = workspace();
    let out = geostretch(&dir, &["brute", "path3.txt", "--objective", "stretch", "-k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["optimal_stretch"], 1.0);
    assert_eq!(v["result"]["best_sets"], serde_json::json!([[1]]));
    assert_eq!(v["result"]["bound_checks"][0]["slack"], 10.0);

    let vc = json(&geostretch(&dir, &["brute", "path3.txt", "--objective", "vc", "-k", "3"]));
    assert_eq!(vc["result"]["cover"], serde_json::json!([1]));
    let exists = json(&geostretch(
        &dir,
        &["brute", "path3.txt", "--objective", "exists", "-k", "1", "--xi", "1.0"],
    ));
    assert_eq!(exists["result"]["exists"], true);
    let kc = json(&geostretch(&dir, &["brute", "path3.txt", "--objective", "kcenter", "-k", "1"]));
    assert_eq!(kc["result"]["optimal_radius"], 1.0);
}

#[test]
fn gadget_verify_single_edge() {
    let (_guard, dir) = workspace();
    let out = geostretch(&dir, &["gadget", "verify", "k2.emb", "-k", "1", "--xi", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["equivalence"]["all_agree"], true);
    assert_eq!(v["result"]["case_table_matches"], true);
    assert_eq!(v["result"]["equivalence"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn gadget_build_writes_graph_and_trace() {
    let (_guard, dir) = workspace();
    let out = geostretch(&dir, &["gadget", "build", "k2.emb", "-o", "g.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("g.txt")).unwrap();
    assert!(text.starts_with("4 5"));
    let trace: Value = serde_json::from_str(&fs::read_to_string(dir.join("g.txt.trace.json")).unwrap()).unwrap();
    assert_eq!(trace["gadgets"].as_array().unwrap().len(), 1);
    assert_eq!(trace["m"], 0);
    // the written graph is a valid input for the other commands
    let validate = geostretch(&dir, &["validate", "g.txt"]);
    assert_eq!(validate.status.code(), Some(0));
}

#[test]
fn identical_runs_are_byte_identical() {
    let (_guard, dir) = workspace();
    let args = ["sample", "path3.txt", "-k", "2", "--seed", "11"];
    let a = geostretch(&dir, &args);
    let b = geostretch(&dir, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_output_has_a_header() {
    let (_guard, dir) = workspace();
    let out = geostretch(&dir, &["--format", "csv", "sample", "path3.txt", "-k", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,source,covering_radius"));
    assert_eq!(lines.next(), Some("0,0,2.0"));
    assert_eq!(lines.next(), Some("1,2,1.0"));
}

#[test]
fn timings_only_on_request() {
    let (_guard, dir) = workspace();
    let plain = json(&geostretch(&dir, &["sample", "path3.txt", "-k", "1"]));
    assert!(plain.get("timings").is_none());
    let timed = json(&geostretch(&dir, &["sample", "path3.txt", "-k", "1", "--timings"]));
    assert!(timed["timings"]["sample_seconds"].is_number());
}

#[test]
fn exit_codes() {
    let (_guard, dir) = workspace();
    assert_eq!(geostretch(&dir, &["sample", "missing.txt", "-k", "1"]).status.code(), Some(3));
    assert_eq!(geostretch(&dir, &["sample", "path3.txt", "-k", "9"]).status.code(), Some(2));
    assert_eq!(geostretch(&dir, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        geostretch(&dir, &["brute", "path3.txt", "--objective", "exists", "-k", "1"]).status.code(),
        Some(2)
    );
    fs::write(dir.join("split.txt"), "4 2\n0 1 1\n2 3 1\n").unwrap();
    let invalid = geostretch(&dir, &["validate", "split.txt"]);
    assert_eq!(invalid.status.code(), Some(1));
    assert_eq!(json(&invalid)["result"]["valid"], false);
}

#[test]
fn oracle_for_another_graph_is_refused() {
    let (_guard, dir) = workspace();
    geostretch(&dir, &["oracle", "build", "path3.txt", "-k", "1", "-o", "o.bin"]);
    fs::write(dir.join("other.txt"), "3 2\n0 1 1\n1 2 2\n").unwrap();
    let out = geostretch(&dir, &["stretch", "other.txt", "o.bin"]);
    assert_eq!(out.status.code(), Some(1));
    let query = json(&geostretch(&dir, &["oracle", "query", "o.bin", "-p", "1", "-q", "2"]));
    assert_eq!(query["result"]["approx_distance"], 3.0);
}

#[test]
fn generated_grid_validates_as_mesh() {
    let (_guard, dir) = workspace();
    assert_eq!(
        geostretch(&dir, &["gen", "grid", "--rows", "4", "--cols", "5", "-o", "grid.off", "--off"])
            .status
            .code(),
        Some(0)
    );
    let v = json(&geostretch(&dir, &["validate", "grid.off"]));
    assert_eq!(v["result"]["kind"], "mesh");
    assert_eq!(v["result"]["valid"], true);
    assert_eq!(v["result"]["graph"]["vertices"], 20);
}

#[test]
fn bench_reports_query_ladder() {
    let (_guard, dir) = workspace();
    geostretch(&dir, &["gen", "grid", "--rows", "10", "--cols", "10", "-o", "grid.txt"]);
    let out = geostretch(&dir, &["bench", "grid.txt", "-k", "20", "--queries", "200", "--ladder", "5,10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ladder = v["result"]["query_ladder"].as_array().unwrap();
    assert_eq!(ladder.iter().map(|r| r["k"].as_u64().unwrap()).collect::<Vec<_>>(), vec![5, 10, 20]);
    assert!(v["result"]["query_fit"]["r_squared"].is_number());
    assert_eq!(v["result"]["stretch_naive"]["stretch"], v["result"]["stretch_fast"]["stretch"]);
}
