// Copyright 2026 The privrewrite Authors
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

#ifndef PRIVREWRITE_CORE_ABSL_COMPAT_H_
#define PRIVREWRITE_CORE_ABSL_COMPAT_H_

#include <string_view>

#include "absl/strings/string_view.h"

namespace privrewrite {

// Some absl builds keep a distinct string_view type; bridge explicitly.
inline absl::string_view Sv(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

inline std::string_view StdSv(absl::string_view s) {
  return std::string_view(s.data(), s.size());
}

}  // namespace privrewrite

#endif  // PRIVREWRITE_CORE_ABSL_COMPAT_H_
