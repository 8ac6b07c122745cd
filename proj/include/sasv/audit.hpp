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

#ifndef SASV_AUDIT_HPP_
#define SASV_AUDIT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sasv/protocol_io.hpp"
#include "sasv/wav.hpp"

namespace sasv {

/// Frame-energy voice activity detection. A frame is active when its mean
/// square energy in dB exceeds the loudest frame by more than threshold_db;
/// speech starts at the first run of hangover_frames active frames.
struct VadConfig {
  double frame_len = 0.025;  // seconds
  double hop = 0.010;        // seconds
  double threshold_db = -35.0;
  int hangover_frames = 5;

  void Validate() const;
};

double DurationSeconds(const AudioBuffer &audio);

/// Seconds from the start of the file to speech onset, or nullopt when no
/// run of active frames exists (silence). Inside the first frame of the
/// run, the onset is the first sample whose power reaches the frame
/// threshold.
std::optional<double> SpeechOnsetDelay(const AudioBuffer &audio,
                                       const VadConfig &cfg);

/// Left-closed, right-open bins [lo + k*width, lo + (k+1)*width) over
/// [lo, hi). The last bin is cut at hi when the width does not divide the
/// range.
struct BinSpec {
  double width = 1.0;
  double lo = 0.0;
  double hi = 25.0;

  void Validate() const;
};

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  std::size_t total() const;
};

Histogram MakeHistogram(std::span<const double> values, const BinSpec &bins);

struct BalanceReport {
  std::size_t total = 0;
  std::map<std::string, std::size_t> by_label;   // bonafide, spoof
  std::map<std::string, std::size_t> by_attack;  // spoofed rows only
  std::map<std::string, std::size_t> by_gender;  // M, F, unknown
};

BalanceReport MakeBalanceReport(std::span<const MetadataRecord> meta);

/// Group key used by the per-attack histograms: the attack id for spoofed
/// rows and "bonafide" for bonafide rows.
std::string AttackGroup(const MetadataRecord &m);

struct QualitySummary {
  std::map<std::string, Histogram> per_attack;
  Histogram bonafide;
  Histogram spoof;
};

QualitySummary MakeQualitySummary(std::span<const ScoreRecord> quality,
                                  std::span<const MetadataRecord> meta,
                                  const BinSpec &bins);

struct DurationStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  std::map<std::string, Histogram> per_attack;
};

struct DelayStats {
  std::size_t count = 0;     // files with detected speech
  std::size_t no_speech = 0;
  double mean = 0.0;
  std::map<std::string, Histogram> per_attack;
};

struct AuditReport {
  BalanceReport balance;
  std::optional<DurationStats> duration;
  std::optional<DelayStats> delay;
  std::optional<QualitySummary> quality;
};

/// Per-utterance audio measurements, keyed like the metadata.
struct AudioMeasurement {
  std::string utt_id;
  double duration = 0.0;
  std::optional<double> delay;
};

DurationStats MakeDurationStats(std::span<const AudioMeasurement> audio,
                                std::span<const MetadataRecord> meta,
                                const BinSpec &bins);
DelayStats MakeDelayStats(std::span<const AudioMeasurement> audio,
                          std::span<const MetadataRecord> meta,
                          const BinSpec &bins);

}  // namespace sasv

#endif  // SASV_AUDIT_HPP_
