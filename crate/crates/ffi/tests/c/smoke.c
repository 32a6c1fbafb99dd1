#include <stdio.h>
#include <string.h>

#include "homalg.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,  \
                    #cond, homalg_last_error());                     \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    HomalgAlgebra *a = NULL;
    CHECK(homalg_algebra_fixture("a2-q", &a) == HOMALG_STATUS_OK);

    size_t dim = 0;
    CHECK(homalg_algebra_dim(a, &dim) == HOMALG_STATUS_OK && dim == 3);

    HomalgDim d;
    CHECK(homalg_algebra_dim_of(a, "simple:1", HOMALG_DIM_KIND_PROJECTIVE, 6, &d) == HOMALG_STATUS_OK);
    CHECK(d.tag == HOMALG_DIM_TAG_FINITE && d.value == 1);

    bool ok = false;
    CHECK(homalg_da_is_dualizing(a, 0, 6, &ok) == HOMALG_STATUS_OK && ok);

    HomalgDGRing *b = NULL;
    CHECK(homalg_trivial_extension(a, -1, &b) == HOMALG_STATUS_OK);
    CHECK(homalg_dgring_dim(b, &dim) == HOMALG_STATUS_OK && dim == 6);
    CHECK(homalg_dgring_dim_of(b, "regular", HOMALG_DIM_KIND_INJECTIVE, 6, &d) == HOMALG_STATUS_OK);
    CHECK(d.tag == HOMALG_DIM_TAG_FINITE && d.value == -1);

    char *json = NULL;
    CHECK(homalg_dgring_to_json(b, &json) == HOMALG_STATUS_OK && strstr(json, "\"mult\"") != NULL);
    homalg_string_free(json);

    HomalgVerdict v;
    CHECK(homalg_verify(a, HOMALG_SUITE_GORENSTEIN, 4, 6, &v, NULL) == HOMALG_STATUS_OK);
    CHECK(v == HOMALG_VERDICT_VERIFIED);

    HomalgDGRing *bad = NULL;
    CHECK(homalg_trivial_extension(a, 0, &bad) == HOMALG_STATUS_ERROR && bad == NULL);
    CHECK(strlen(homalg_last_error()) > 0);
    CHECK(homalg_algebra_from_json("{", &a) == HOMALG_STATUS_PARSE_ERROR);

    homalg_dgring_free(b);
    homalg_algebra_free(a);
    printf("ok %s\n", homalg_version());
    return 0;
}
