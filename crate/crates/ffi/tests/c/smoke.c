#include <stdio.h>
#include <string.h>

#include "geostretch.h"

#define CHECK(call)                                                              \
    do {                                                                         \
        enum GsStatus status_ = (call);                                          \
        if (status_ != GS_STATUS_OK) {                                           \
            fprintf(stderr, "%s failed: %s (%s)\n", #call,                       \
                    gs_status_string(status_), gs_last_error_message());         \
            return 1;                                                            \
        }                                                                        \
    } while (0)

int main(void) {
    size_t us[] = {0, 1};
    size_t vs[] = {1, 2};
    double lengths[] = {1.0, 1.0};
    GsGraph *graph = NULL;
    CHECK(gs_graph_from_edges(3, us, vs, lengths, 2, &graph));

    size_t sources[1];
    CHECK(gs_fps(graph, 1, 0, sources));

    GsOracle *oracle = NULL;
    CHECK(gs_oracle_build(graph, sources, 1, &oracle));

    double value = 0.0;
    size_t witness = 99;
    CHECK(gs_oracle_query(oracle, 1, 2, &value, &witness));

    GsStretchReport report;
    CHECK(gs_stretch_fast(graph, oracle, &report));

    if (gs_oracle_query(oracle, 7, 0, &value, NULL) != GS_STATUS_INVALID_VERTEX
        || strlen(gs_last_error_message()) == 0) {
        fprintf(stderr, "expected an invalid vertex error\n");
        return 1;
    }

    printf("source=%zu approx=%.1f witness=%zu stretch=%.1f pair=%zu,%zu\n", sources[0], value, witness,
           report.stretch, report.witness_p, report.witness_q);
    gs_oracle_free(oracle);
    gs_graph_free(graph);
    return 0;
}
