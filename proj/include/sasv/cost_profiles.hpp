// Copyright 2026  The sasvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_COST_PROFILES_HPP_
#define SASV_COST_PROFILES_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "sasv/metrics.hpp"

namespace sasv {

// Profile file schema:
//
//   {"profiles": {"<name>": {"c_miss": 1, "c_fa": 10, "c_fa_spoof": 10,
//                            "pi_target": 0.95, "pi_nontarget": 0.025,
//                            "pi_spoof": 0.025}, ...}}
//
// Every member of a profile is optional and falls back to the CostModel
// defaults.

std::map<std::string, CostModel> ParseCostProfiles(std::string_view json);

std::map<std::string, CostModel> LoadCostProfiles(const std::filesystem::path &path);

/// Applies "key=value,key=value" overrides, e.g. "c_fa=10,pi_target=0.9".
void ApplyCostOverrides(CostModel &cost, std::string_view overrides);

}  // namespace sasv

#endif  // SASV_COST_PROFILES_HPP_
