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

#ifndef PRIVREWRITE_EVAL_COST_H_
#define PRIVREWRITE_EVAL_COST_H_

#include "absl/status/statusor.h"
#include "json.hpp"

namespace privrewrite {

// Percentage-point gain per unit of cost saved, against a baseline.
struct CostInputs {
  double p_ours = 0.0;
  double p_base = 0.0;
  double c_ours = 0.0;
  double c_base = 0.0;
};

// (p_ours - p_base) / (c_base - c_ours). Equal costs are an error.
absl::StatusOr<double> CostEfficiency(double p_ours, double p_base,
                                      double c_ours, double c_base);
absl::StatusOr<double> CostEfficiency(const CostInputs& in);

absl::StatusOr<CostInputs> CostInputsFromJson(const nlohmann::json& doc);
nlohmann::json ToJson(const CostInputs& in);

}  // namespace privrewrite

#endif  // PRIVREWRITE_EVAL_COST_H_
