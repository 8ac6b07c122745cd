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

#include "sasv/audit.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sasv/errors.hpp"

namespace sasv {

void VadConfig::Validate() const {
  if (!(hop > 0.0) || !(frame_len >= hop))
    throw DataError("VAD needs frame_len >= hop > 0");
  if (!(threshold_db < 0.0)) throw DataError("VAD threshold_db must be negative");
  if (hangover_frames < 1) throw DataError("VAD hangover_frames must be at least 1");
}

double DurationSeconds(const AudioBuffer &audio) {
  if (!audio.valid()) throw DataError("empty audio buffer or zero sample rate");
  return static_cast<double>(audio.samples.size()) /
         static_cast<double>(audio.sample_rate);
}

std::optional<double> SpeechOnsetDelay(const AudioBuffer &audio,
                                       const VadConfig &cfg) {
  cfg.Validate();
  if (!audio.valid()) throw DataError("empty audio buffer or zero sample rate");
  const double rate = audio.sample_rate;
  const auto frame = std::max<std::size_t>(1, std::lround(cfg.frame_len * rate));
  const auto hop = std::max<std::size_t>(1, std::lround(cfg.hop * rate));
  const auto &x = audio.samples;
  if (x.size() < frame) throw DataError("audio is shorter than one VAD frame");

  const std::size_t frames = 1 + (x.size() - frame) / hop;
  std::vector<double> energy(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    double sum = 0.0;
    for (std::size_t i = k * hop; i < k * hop + frame; ++i) sum += x[i] * x[i];
    energy[k] = sum / static_cast<double>(frame);
  }
  const double peak = *std::max_element(energy.begin(), energy.end());
  if (!(peak > 0.0)) return std::nullopt;
  const double threshold = peak * std::pow(10.0, cfg.threshold_db / 10.0);

  std::size_t run = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    run = energy[k] > threshold ? run + 1 : 0;
    if (run == static_cast<std::size_t>(cfg.hangover_frames)) {
      const std::size_t first = (k + 1 - run) * hop;
      std::size_t i = first;
      while (i + 1 < first + frame && x[i] * x[i] < threshold) ++i;
      return static_cast<double>(i) / rate;
    }
  }
  return std::nullopt;
}

void BinSpec::Validate() const {
  if (!(width > 0.0)) throw DataError("histogram bin width must be positive");
  if (!(lo < hi)) throw DataError("histogram range needs lo < hi");
}

std::size_t Histogram::total() const {
  std::size_t n = underflow + overflow;
  for (auto c : counts) n += c;
  return n;
}

Histogram MakeHistogram(std::span<const double> values, const BinSpec &bins) {
  bins.Validate();
  Histogram h;
  const auto n = static_cast<std::size_t>(
      std::max(1.0, std::ceil((bins.hi - bins.lo) / bins.width - 1e-9)));
  for (std::size_t k = 0; k < n; ++k)
    h.bin_edges.push_back(bins.lo + static_cast<double>(k) * bins.width);
  h.bin_edges.push_back(bins.hi);
  h.counts.assign(n, 0);
  for (double v : values) {
    if (std::isnan(v)) throw DataError("NaN value passed to histogram");
    if (v < bins.lo) {
      ++h.underflow;
    } else if (v >= bins.hi) {
      ++h.overflow;
    } else {
      auto k = static_cast<std::size_t>(
          std::min<double>(static_cast<double>(n - 1),
                           std::floor((v - bins.lo) / bins.width)));
      // Keep the bin index consistent with the stored edges.
      while (k > 0 && v < h.bin_edges[k]) --k;
      while (k + 1 < n && v >= h.bin_edges[k + 1]) ++k;
      ++h.counts[k];
    }
  }
  return h;
}

BalanceReport MakeBalanceReport(std::span<const MetadataRecord> meta) {
  BalanceReport r;
  r.by_label = {{"bonafide", 0}, {"spoof", 0}};
  r.by_gender = {{"F", 0}, {"M", 0}, {"unknown", 0}};
  for (const auto &m : meta) {
    ++r.total;
    ++r.by_label[std::string(ToString(m.label))];
    ++r.by_gender[std::string(ToString(m.gender))];
    if (m.label == Label::kSpoof) ++r.by_attack[m.attack_id];
  }
  return r;
}

std::string AttackGroup(const MetadataRecord &m) {
  return m.label == Label::kBonafide ? std::string("bonafide") : m.attack_id;
}

namespace {

using MetaIndex = std::unordered_map<std::string_view, const MetadataRecord *>;

MetaIndex IndexMeta(std::span<const MetadataRecord> meta) {
  MetaIndex index;
  for (const auto &m : meta) index.emplace(m.utt_id, &m);
  return index;
}

const MetadataRecord &Lookup(const MetaIndex &index, const std::string &utt) {
  const auto it = index.find(utt);
  if (it == index.end()) throw DataError("no metadata for utterance '" + utt + "'");
  return *it->second;
}

std::map<std::string, Histogram> PerGroup(
    const std::map<std::string, std::vector<double>> &groups, const BinSpec &bins) {
  std::map<std::string, Histogram> out;
  for (const auto &[key, values] : groups) out.emplace(key, MakeHistogram(values, bins));
  return out;
}

}  // namespace

QualitySummary MakeQualitySummary(std::span<const ScoreRecord> quality,
                                  std::span<const MetadataRecord> meta,
                                  const BinSpec &bins) {
  bins.Validate();
  const ScoreSet joined = JoinScoresMetadata(quality, meta);
  std::map<std::string, std::vector<double>> groups;
  std::vector<double> bona, spoof;
  for (const auto &e : joined.entries) {
    if (e.label == Label::kBonafide) {
      bona.push_back(e.score);
    } else {
      spoof.push_back(e.score);
      groups[e.attack_id].push_back(e.score);
    }
  }
  return {PerGroup(groups, bins), MakeHistogram(bona, bins), MakeHistogram(spoof, bins)};
}

DurationStats MakeDurationStats(std::span<const AudioMeasurement> audio,
                                std::span<const MetadataRecord> meta,
                                const BinSpec &bins) {
  bins.Validate();
  const MetaIndex index = IndexMeta(meta);
  DurationStats s;
  std::map<std::string, std::vector<double>> groups;
  double sum = 0.0;
  for (const auto &a : audio) {
    groups[AttackGroup(Lookup(index, a.utt_id))].push_back(a.duration);
    sum += a.duration;
  }
  s.count = audio.size();
  if (s.count > 0) s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (const auto &a : audio) ss += (a.duration - s.mean) * (a.duration - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  s.per_attack = PerGroup(groups, bins);
  return s;
}

DelayStats MakeDelayStats(std::span<const AudioMeasurement> audio,
                          std::span<const MetadataRecord> meta,
                          const BinSpec &bins) {
  bins.Validate();
  const MetaIndex index = IndexMeta(meta);
  DelayStats s;
  std::map<std::string, std::vector<double>> groups;
  double sum = 0.0;
  for (const auto &a : audio) {
    const MetadataRecord &m = Lookup(index, a.utt_id);
    if (!a.delay) {
      ++s.no_speech;
      continue;
    }
    groups[AttackGroup(m)].push_back(*a.delay);
    sum += *a.delay;
    ++s.count;
  }
  if (s.count > 0) s.mean = sum / static_cast<double>(s.count);
  s.per_attack = PerGroup(groups, bins);
  return s;
}

}  // namespace sasv
