#include <math.h>
#include <stdio.h>
#include <string.h>

#include "wlab.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, \
              #cond);                                            \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  WlabForm *cayley = NULL;
  CHECK(wlab_form_parse("cayley", true, &cayley) == WLAB_STATUS_OK);

  size_t n = 0, k = 0;
  CHECK(wlab_form_shape(cayley, &n, &k) == WLAB_STATUS_OK);
  CHECK(n == 8 && k == 4);

  double norm_sq = 0.0;
  CHECK(wlab_form_norm_sq(cayley, &norm_sq) == WLAB_STATUS_OK);
  CHECK(norm_sq == 14.0);

  WlabForm *square = NULL;
  CHECK(wlab_form_wedge(cayley, cayley, &square) == WLAB_STATUS_OK);
  char *json = NULL;
  CHECK(wlab_form_to_json(square, &json) == WLAB_STATUS_OK);
  CHECK(strstr(json, "\"c\":\"14\"") != NULL);
  wlab_string_free(json);

  WlabOptions opts = {16, 0, 0.0, 1};
  double comass = 0.0;
  CHECK(wlab_comass(cayley, &opts, &comass) == WLAB_STATUS_OK);
  CHECK(fabs(comass - 1.0) < 1e-9);

  WlabForm *bad = NULL;
  CHECK(wlab_form_parse("dx12 + dx1234", true, &bad) == WLAB_STATUS_PARSE);
  CHECK(bad == NULL);
  CHECK(strstr(wlab_last_error(), "byte 5") != NULL);

  wlab_form_free(square);
  wlab_form_free(cayley);
  printf("ok\n");
  return 0;
}
