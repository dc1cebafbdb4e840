// Copyright 2026 The dpgmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPGMM_STATUS_MACROS_H_
#define DPGMM_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPGMM_CONCAT_INNER_(a, b) a##b
#define DPGMM_CONCAT_(a, b) DPGMM_CONCAT_INNER_(a, b)

#define DPGMM_RETURN_IF_ERROR(expr)              \
  do {                                           \
    const ::absl::Status _dpgmm_status = (expr); \
    if (!_dpgmm_status.ok()) return _dpgmm_status; \
  } while (0)

#define DPGMM_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                 \
  if (!tmp.ok()) return tmp.status();                \
  lhs = std::move(tmp).value()

#define DPGMM_ASSIGN_OR_RETURN(lhs, expr) \
  DPGMM_ASSIGN_OR_RETURN_IMPL_(DPGMM_CONCAT_(_dpgmm_or_, __LINE__), lhs, expr)

#endif  // DPGMM_STATUS_MACROS_H_
