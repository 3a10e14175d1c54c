#include <math.h>
#include <stdio.h>
#include <string.h>

#include "moebius.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    MoebiusTable *t = NULL;
    CHECK(moebius_table_build(1000, &t) == MOEBIUS_STATUS_OK);

    int8_t mu = 0;
    CHECK(moebius_mu(t, 30, &mu) == MOEBIUS_STATUS_OK && mu == -1);
    CHECK(moebius_mu(t, 5000, &mu) == MOEBIUS_STATUS_OUT_OF_RANGE);
    char *err = moebius_last_error();
    CHECK(err != NULL && strstr(err, "5000") != NULL);
    moebius_string_free(err);

    double m1 = 0.0;
    CHECK(moebius_m1(t, 3.0, &m1) == MOEBIUS_STATUS_OK && fabs(m1 - 0.5) < 1e-15);

    bool passed = false;
    char *json = NULL;
    CHECK(moebius_verify(t, "meissel", 1000.0, 0, 1, &passed, &json) == MOEBIUS_STATUS_OK);
    CHECK(passed && json != NULL && strstr(json, "\"meissel\"") != NULL);
    moebius_string_free(json);
    moebius_table_free(t);

    MoebiusAxer *a = NULL;
    double f = 0.0;
    CHECK(moebius_axer_build(2, 1, &a) == MOEBIUS_STATUS_OK);
    CHECK(moebius_axer_f(a, 8.0, &f) == MOEBIUS_STATUS_OK && f == 4.0);
    moebius_axer_free(a);

    printf("ok\n");
    return 0;
}
