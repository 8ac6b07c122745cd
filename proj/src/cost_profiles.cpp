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

#include "sasv/cost_profiles.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sasv/errors.hpp"

namespace sasv {

namespace {

double *Field(CostModel &cost, std::string_view key) {
  if (key == "c_miss") return &cost.c_miss;
  if (key == "c_fa") return &cost.c_fa;
  if (key == "c_fa_spoof") return &cost.c_fa_spoof;
  if (key == "pi_target") return &cost.pi_target;
  if (key == "pi_nontarget") return &cost.pi_nontarget;
  if (key == "pi_spoof") return &cost.pi_spoof;
  return nullptr;
}

}  // namespace

std::map<std::string, CostModel> ParseCostProfiles(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error &e) {
    throw DataError(std::string("cost profile file is not valid JSON: ") + e.what());
  }
  if (!j.contains("profiles") || !j["profiles"].is_object())
    throw DataError("cost profile file needs a 'profiles' object");
  std::map<std::string, CostModel> out;
  for (const auto &[name, body] : j["profiles"].items()) {
    if (!body.is_object()) throw DataError("profile '" + name + "' is not an object");
    CostModel cost;
    for (const auto &[key, value] : body.items()) {
      if (key.starts_with("_")) continue;  // comments
      double *f = Field(cost, key);
      if (!f) throw DataError("profile '" + name + "': unknown key '" + key + "'");
      if (!value.is_number())
        throw DataError("profile '" + name + "': '" + key + "' is not a number");
      *f = value.get<double>();
    }
    out.emplace(name, cost);
  }
  return out;
}

std::map<std::string, CostModel> LoadCostProfiles(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cost profile file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCostProfiles(ss.str());
}

void ApplyCostOverrides(CostModel &cost, std::string_view overrides) {
  std::size_t start = 0;
  while (start <= overrides.size()) {
    std::size_t comma = overrides.find(',', start);
    if (comma == std::string_view::npos) comma = overrides.size();
    const std::string_view item = overrides.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw DataError("cost override must be key=value, got '" + std::string(item) + "'");
    double *f = Field(cost, item.substr(0, eq));
    if (!f) throw DataError("unknown cost key '" + std::string(item.substr(0, eq)) + "'");
    const std::string_view val = item.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), *f);
    if (ec != std::errc() || ptr != val.data() + val.size() || val.empty())
      throw DataError("cost override value is not a number: '" + std::string(val) + "'");
  }
}

}  // namespace sasv
