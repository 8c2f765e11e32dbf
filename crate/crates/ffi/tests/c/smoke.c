#include <stdio.h>
#include <string.h>

#include "legendrian.h"

#define CHECK(cond)                                                     \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "check failed at line %d: %s (%s)\n", __LINE__, \
              #cond, lg_last_error());                                  \
      return 1;                                                         \
    }                                                                   \
  } while (0)

int main(void) {
  LgKnot *b = NULL;
  CHECK(lg_knot_from_json(
            "{\"name\":\"B\",\"prime\":true,\"genus\":3,"
            "\"peaks\":[[0,-4],[0,0],[0,4]]}",
            &b) == LG_STATUS_OK);
  CHECK(lg_knot_peak_count(b) == 3);

  const LgKnot *knots[1] = {b};
  size_t counts[1] = {2};
  LgSum *sum = NULL;
  CHECK(lg_sum_new(knots, counts, 1, &sum) == LG_STATUS_OK);

  bool simple = true;
  LgCriterionCase which;
  CHECK(lg_sum_criterion(sum, &simple, &which) == LG_STATUS_OK);
  CHECK(!simple && which == LG_CRITERION_CASE_NOT_SIMPLE);

  size_t size = 0;
  CHECK(lg_sum_fiber_size(sum, 1, 0, &size) == LG_STATUS_OK);
  CHECK(size == 2);

  char *text = NULL;
  CHECK(lg_sum_render(sum, -1, LG_RENDER_FORMAT_ASCII, &text) == LG_STATUS_OK);
  CHECK(strstr(text, "2") != NULL);
  lg_string_free(text);

  LgKnot *bad = NULL;
  CHECK(lg_knot_from_json("{\"name\":", &bad) == LG_STATUS_PARSE_ERROR);
  CHECK(strlen(lg_last_error()) > 0);

  lg_sum_free(sum);
  lg_knot_free(b);
  printf("ok\n");
  return 0;
}
