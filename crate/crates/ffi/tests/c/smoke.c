#include <stdio.h>
#include <string.h>

#include "affbound.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      const char *e = ab_last_error();                                \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, e ? e : ""); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  AbAlgebra *z6 = NULL;
  CHECK(ab_algebra_builtin("zn_ring:6", &z6) == AB_STATUS_OK);

  size_t n = 0, size = 0, m = 0;
  CHECK(ab_algebra_carrier(z6, &n) == AB_STATUS_OK && n == 6);
  CHECK(ab_monoid_size(z6, &size) == AB_STATUS_OK && size == 36);

  size_t args[2] = {4, 5}, v = 0;
  CHECK(ab_algebra_apply(z6, "*", args, 2, &v) == AB_STATUS_OK && v == 2);

  bool bounded = false;
  char *json = NULL;
  CHECK(ab_check_bounded_by(z6, 3, &bounded, &json) == AB_STATUS_OK && bounded);
  CHECK(json != NULL && strstr(json, "\"witnesses\"") != NULL);
  ab_string_free(json);

  CHECK(ab_minimal_bound(z6, &m, NULL) == AB_STATUS_OK && m == 2);

  size_t labels[6];
  CHECK(ab_principal_congruence(z6, 0, 3, labels, 6) == AB_STATUS_OK);
  CHECK(labels[3] == 0 && labels[4] == 1 && labels[5] == 2);
  CHECK(ab_principal_congruence(z6, 0, 3, labels, 2) == AB_STATUS_BUFFER_TOO_SMALL);

  size_t image[6];
  CHECK(ab_eval_term(z6, "(+ (* #2 x) #1)", image, 6) == AB_STATUS_OK && image[1] == 3);
  CHECK(ab_eval_term(z6, "(+ x", image, 6) == AB_STATUS_INVALID_INPUT);
  CHECK(ab_last_error() != NULL);

  AbAlgebra *bad = NULL;
  CHECK(ab_algebra_builtin("nope:1", &bad) == AB_STATUS_INVALID_INPUT && bad == NULL);
  ab_algebra_free(z6);
  printf("ok %s\n", ab_version());
  return 0;
}
