/*
 * Copyright 2026 The expresslog Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <stdio.h>
#include <string.h>

#include "expresslog/expresslog.h"

int main(void) {
  double chi2 = 0, p = 0;
  if (exl_chi_square_2x2(269, 32, 195, 106, 0, &chi2, &p) != EXL_OK) return 1;
  if (chi2 < 51.47 || chi2 > 51.49) return 1;
  if (strcmp(exl_status_name(EXL_ERR_PARSE), "parse") != 0) return 1;
  printf("expresslog %s\n", exl_version());
  return 0;
}
