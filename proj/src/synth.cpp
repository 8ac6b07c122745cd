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

#include "sasv/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "sasv/errors.hpp"
#include "sasv/report.hpp"

namespace sasv {

namespace {

std::string Id(char prefix, std::size_t i, std::size_t n) {
  const int width = static_cast<int>(std::to_string(n).size());
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, i);
  return buf;
}

std::string Numbered(const char *prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%02zu", prefix, i);
  return buf;
}

}  // namespace

void SynthConfig::Validate() const {
  if (n_per_class == 0) throw DataError("n_per_class must be positive");
  if (!(sigma > 0.0) || !(asv_sigma > 0.0)) throw DataError("sigma must be positive");
  for (double m : {mu_pos, mu_neg, asv_target_mean, asv_nontarget_mean, asv_spoof_mean})
    if (!std::isfinite(m)) throw DataError("means must be finite");
  if (!std::isfinite(sigma) || !std::isfinite(asv_sigma))
    throw DataError("sigma must be finite");
  if (attacks == 0 || codecs == 0) throw DataError("need at least one attack and one codec");
}

double GaussianEer(double mu_pos, double mu_neg, double sigma) {
  // 1 - Phi(x) = erfc(x / sqrt 2) / 2
  const double x = (mu_pos - mu_neg) / (2.0 * sigma);
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

SynthData Synthesize(const SynthConfig &cfg) {
  cfg.Validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double mean, double sd) { return mean + sd * unit(rng); };
  auto codec = [&](std::size_t i) {
    return i % cfg.codecs == 0 ? std::string("-") : Numbered("C", i % cfg.codecs);
  };
  const std::size_t n = cfg.n_per_class;

  SynthData d;
  d.cm_scores.reserve(2 * n);
  d.meta.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = Id('B', i, n);
    d.cm_scores.push_back({id, draw(cfg.mu_pos, cfg.sigma)});
    d.meta.push_back({id, i % 2 ? Gender::kFemale : Gender::kMale, codec(i), "-",
                      Label::kBonafide});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = Id('S', i, n);
    d.cm_scores.push_back({id, draw(cfg.mu_neg, cfg.sigma)});
    d.meta.push_back({id, i % 2 ? Gender::kFemale : Gender::kMale, codec(i / cfg.attacks),
                      Numbered("A", 1 + i % cfg.attacks), Label::kSpoof});
  }

  d.trials.reserve(3 * n);
  const TrialClass classes[3] = {TrialClass::kTarget, TrialClass::kNontarget,
                                 TrialClass::kSpoof};
  const double asv_means[3] = {cfg.asv_target_mean, cfg.asv_nontarget_mean,
                               cfg.asv_spoof_mean};
  const char prefixes[3] = {'T', 'N', 'P'};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      SasvTrialRecord t;
      t.enroll_id = Numbered("spk", i % 10);
      t.test_utt = Id(prefixes[c], i, n);
      t.trial_class = classes[c];
      t.asv_score = draw(asv_means[c], cfg.asv_sigma);
      t.cm_score = draw(c == 2 ? cfg.mu_neg : cfg.mu_pos, cfg.sigma);
      d.trials.push_back(std::move(t));
    }
  }
  return d;
}

std::string SynthManifest(const SynthConfig &cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["n_per_class"] = cfg.n_per_class;
  j["attacks"] = cfg.attacks;
  j["codecs"] = cfg.codecs;
  j["cm"] = {{"mu_pos", cfg.mu_pos},
             {"mu_neg", cfg.mu_neg},
             {"sigma", cfg.sigma},
             {"eer_closed_form", RoundSignificant6(GaussianEer(cfg.mu_pos, cfg.mu_neg, cfg.sigma))}};
  j["asv"] = {{"target_mean", cfg.asv_target_mean},
              {"nontarget_mean", cfg.asv_nontarget_mean},
              {"spoof_mean", cfg.asv_spoof_mean},
              {"sigma", cfg.asv_sigma},
              {"eer_closed_form",
               RoundSignificant6(GaussianEer(cfg.asv_target_mean, cfg.asv_nontarget_mean,
                                             cfg.asv_sigma))}};
  return j.dump(2) + "\n";
}

}  // namespace sasv
