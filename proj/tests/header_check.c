/* the public header must stay valid C */
#include "carnot/carnot.h"

#include <stdio.h>

int main(void) {
  carnot_algebra* a = NULL;
  if (carnot_algebra_builtin("heisenberg", &a) != CARNOT_OK) return 1;
  int ok = carnot_algebra_dim(a) == 3;
  carnot_algebra_free(a);
  printf("%s\n", carnot_version());
  return ok ? 0 : 1;
}
