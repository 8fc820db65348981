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

#include "privrewrite/eval/cost.h"

#include <cmath>

#include "absl/status/status.h"

namespace privrewrite {

absl::StatusOr<double> CostEfficiency(double p_ours, double p_base,
                                      double c_ours, double c_base) {
  for (double v : {p_ours, p_base, c_ours, c_base}) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("cost inputs must be finite");
    }
  }
  if (c_base == c_ours) return absl::InvalidArgumentError("undefined efficiency");
  return (p_ours - p_base) / (c_base - c_ours);
}

absl::StatusOr<double> CostEfficiency(const CostInputs& in) {
  return CostEfficiency(in.p_ours, in.p_base, in.c_ours, in.c_base);
}

absl::StatusOr<CostInputs> CostInputsFromJson(const nlohmann::json& doc) {
  CostInputs in;
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("cost inputs must be an object");
  }
  for (auto [key, field] : {std::pair{"p_ours", &in.p_ours},
                            std::pair{"p_base", &in.p_base},
                            std::pair{"c_ours", &in.c_ours},
                            std::pair{"c_base", &in.c_base}}) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_number()) {
      return absl::InvalidArgumentError(
          std::string("cost inputs need numeric ") + key);
    }
    *field = it->get<double>();
  }
  return in;
}

nlohmann::json ToJson(const CostInputs& in) {
  return {{"p_ours", in.p_ours},
          {"p_base", in.p_base},
          {"c_ours", in.c_ours},
          {"c_base", in.c_base}};
}

}  // namespace privrewrite
