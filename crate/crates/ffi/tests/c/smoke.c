#include <stdio.h>
#include <string.h>
#include "uipq.h"

int main(void) {
    UipqLawTable *t = NULL;
    if (uipq_law_hull_perimeter(1, 1e-12, &t) != UIPQ_STATUS_OK) return 1;
    char buf[32];
    size_t needed = 0;
    if (uipq_law_mass_exact(t, 1, buf, sizeof buf, &needed) != UIPQ_STATUS_OK) return 2;
    if (strcmp(buf, "5/27") != 0) return 3;
    uipq_law_free(t);

    UipqLawTable *bad = NULL;
    if (uipq_law_n_trees(3, 3, 1e-12, &bad) != UIPQ_STATUS_INVALID_ARGUMENT) return 4;
    char msg[128];
    uipq_last_error(msg, sizeof msg, NULL);
    if (strlen(msg) == 0) return 5;

    UipqRng *rng = NULL;
    UipqBridge *b = NULL;
    uipq_rng_new(1, &rng);
    if (uipq_bridge_sample(8, rng, &b) != UIPQ_STATUS_OK) return 6;
    uint64_t d = 1;
    uipq_bridge_cactus_distance(b, 2, 2, &d);
    if (d != 0) return 7;
    uipq_bridge_free(b);
    uipq_rng_free(rng);
    printf("%s ok\n", uipq_version());
    return 0;
}
