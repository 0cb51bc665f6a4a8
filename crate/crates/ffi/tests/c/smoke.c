#include <stdio.h>
#include <string.h>

#include "movcone.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,          \
              movcone_last_error());                                  \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  MovconeCase *c = NULL;
  CHECK(movcone_case_new("P4/F=1,1,1,1,1/E=0,0,0,0,0", &c) == MOVCONE_STATUS_OK);

  MovconeProfile p;
  CHECK(movcone_case_profile(c, MOVCONE_SIDE_F, &p) == MOVCONE_STATUS_OK);
  CHECK(p.cubic[3] == 5 && p.odp == 50);

  MovconeCone *cone = NULL;
  CHECK(movcone_cone_new(c, &cone) == MOVCONE_STATUS_OK);
  int64_t m[4];
  CHECK(movcone_cone_map(cone, "generator", m) == MOVCONE_STATUS_OK);
  printf("generator %lld %lld %lld %lld\n", (long long)m[0], (long long)m[1],
         (long long)m[2], (long long)m[3]);

  char *json = NULL;
  CHECK(movcone_cone_json(cone, 2, &json) == MOVCONE_STATUS_OK);
  CHECK(strstr(json, "\"infinite\"") != NULL);
  movcone_string_free(json);

  MovconeCase *bad = NULL;
  CHECK(movcone_case_new("nonsense", &bad) == MOVCONE_STATUS_INVALID_INPUT);
  CHECK(bad == NULL);
  printf("error %s\n", movcone_last_error());

  movcone_cone_free(cone);
  movcone_case_free(c);
  return 0;
}
