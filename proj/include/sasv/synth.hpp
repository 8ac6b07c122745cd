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

#ifndef SASV_SYNTH_HPP_
#define SASV_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sasv/protocol_io.hpp"

namespace sasv {

/// Gaussian score fixtures with known separability.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_per_class = 1000;
  // CM scores: bonafide ~ N(mu_pos, sigma), spoof ~ N(mu_neg, sigma).
  double mu_pos = 1.0;
  double mu_neg = -1.0;
  double sigma = 1.0;
  std::size_t attacks = 2;
  std::size_t codecs = 1;  // the first codec is the clean condition "-"
  // ASV scores of the SASV trials, all with standard deviation asv_sigma.
  double asv_target_mean = 2.0;
  double asv_nontarget_mean = 0.0;
  double asv_spoof_mean = 1.0;
  double asv_sigma = 1.0;

  void Validate() const;
};

struct SynthData {
  std::vector<ScoreRecord> cm_scores;
  std::vector<MetadataRecord> meta;
  std::vector<SasvTrialRecord> trials;
};

/// EER of two equal-variance Gaussian classes: 1 - Phi((mu_pos - mu_neg) / (2 sigma)).
double GaussianEer(double mu_pos, double mu_neg, double sigma);

SynthData Synthesize(const SynthConfig &cfg);

/// Sidecar JSON recording the generator parameters and closed-form EERs.
std::string SynthManifest(const SynthConfig &cfg);

}  // namespace sasv

#endif  // SASV_SYNTH_HPP_
