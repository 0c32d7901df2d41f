#include <stdio.h>
#include <string.h>
#include "blockpart.h"

int main(void) {
    BpEmbedding *emb = NULL;
    BpGraph *g = NULL;
    BpPartition *p = NULL;
    BpVerdict verdict;
    char *tw = NULL;
    if (bp_stacked_triangulation(150, 3, &emb) != BP_STATUS_OK) return 1;
    if (bp_embedding_graph(emb, &g) != BP_STATUS_OK) return 2;
    if (bp_chordal_partition(emb, 2, &p) != BP_STATUS_OK) return 3;
    if (bp_verify_blocking(g, p, 6, 100000000, &verdict, NULL) != BP_STATUS_OK) return 4;
    if (verdict != BP_VERDICT_HOLDS) return 5;
    if (bp_tw_bound(222, 3, &tw) != BP_STATUS_OK || strcmp(tw, "15288899") != 0) return 6;
    BpGraph *bad = NULL;
    if (bp_graph_from_json("{\"n\": 2, \"edges\": [[0, 5]]}", &bad) != BP_STATUS_PARSE) return 7;
    if (bad != NULL || bp_last_error() == NULL) return 8;
    printf("ok %zu %zu\n", bp_graph_vertex_count(g), bp_partition_width(p));
    bp_string_free(tw);
    bp_partition_free(p);
    bp_graph_free(g);
    bp_embedding_free(emb);
    return 0;
}
