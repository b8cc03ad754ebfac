#include <stdio.h>
#include <string.h>
#include "cylrev.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    size_t pos[] = {2, 4, 6, 7, 9};
    CylrevCollection *c = NULL;
    CHECK(cylrev_collection_new(pos, 5, &c) == CYLREV_STATUS_OK);

    CylrevSpectrum *s = NULL;
    CHECK(cylrev_spectrum_compute(c, 0, &s) == CYLREV_STATUS_OK);
    uint64_t buf[8];
    size_t len = 0;
    CHECK(cylrev_spectrum_periods(s, buf, 8, &len) == CYLREV_STATUS_OK);
    CHECK(len == 3 && buf[0] == 105 && buf[1] == 15 && buf[2] == 7);
    CHECK(cylrev_spectrum_kernel(s, buf, 1, &len) == CYLREV_STATUS_BUFFER_TOO_SMALL && len == 2);

    bool rev = true;
    CHECK(cylrev_is_reversible(c, 15, &rev) == CYLREV_STATUS_OK && !rev);
    CHECK(cylrev_is_reversible(c, 11, &rev) == CYLREV_STATUS_OK && rev);

    char *inv = NULL;
    CHECK(cylrev_inverse_rule(c, 15, &inv) == CYLREV_STATUS_NOT_INVERTIBLE);
    CHECK(cylrev_last_error() != NULL);
    CHECK(cylrev_inverse_rule(c, 11, &inv) == CYLREV_STATUS_OK && strlen(inv) == 11);
    cylrev_string_free(inv);

    cylrev_spectrum_free(s);
    cylrev_collection_free(c);
    puts("ok");
    return 0;
}
