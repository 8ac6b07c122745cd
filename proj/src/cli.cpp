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

#include "sasv/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "sasv/audit.hpp"
#include "sasv/calibration.hpp"
#include "sasv/cost_profiles.hpp"
#include "sasv/errors.hpp"
#include "sasv/fusion.hpp"
#include "sasv/metrics.hpp"
#include "sasv/protocol_io.hpp"
#include "sasv/report.hpp"
#include "sasv/synth.hpp"
#include "sasv/wav.hpp"

namespace sasv::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// File helpers

std::string ReadText(const std::string &path) {
  if (path.empty()) throw UsageError("missing input path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Parser>
auto ParseFile(const std::string &path, Parser parse) {
  const std::string text = ReadText(path);
  try {
    return parse(std::string_view(text));
  } catch (const ParseError &e) {
    throw ParseError(e.line(), path + ": " + std::string(e.what()).substr(
                                                 std::string(e.what()).find(": ") + 2));
  }
}

std::vector<ScoreRecord> LoadScores(const std::string &path) {
  return ParseFile(path, [](std::string_view t) { return ParseCmScores(t); });
}

std::vector<MetadataRecord> LoadMeta(const std::string &path) {
  return ParseFile(path, [](std::string_view t) { return ParseMetadata(t); });
}

std::vector<SasvTrialRecord> LoadTrials(const std::string &path) {
  return ParseFile(path, [](std::string_view t) { return ParseSasvTrials(t); });
}

void Emit(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

ReportFormat Format(const std::string &name) {
  try {
    return ParseReportFormat(name);
  } catch (const DataError &e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Shared option groups

struct CostOptions {
  std::string profile;  // FILE or FILE#NAME
  std::string overrides;

  void Add(CLI::App *app) {
    app->add_option("--profile", profile,
                    "Cost profile: FILE or FILE#NAME (see config/cost_profiles.json)");
    app->add_option("--cost", overrides, "Inline cost overrides, e.g. c_fa=10,pi_target=0.9");
  }

  CostModel Resolve() const {
    if (profile.empty() && overrides.empty())
      throw UsageError("no cost model given; pass --profile and/or --cost");
    CostModel cost;
    if (!profile.empty()) {
      const std::size_t hash = profile.rfind('#');
      const std::string file = profile.substr(0, hash);
      const std::string name = hash == std::string::npos ? "" : profile.substr(hash + 1);
      const auto profiles = LoadCostProfiles(file);
      if (name.empty()) {
        if (profiles.size() != 1)
          throw UsageError(file + " holds " + std::to_string(profiles.size()) +
                           " profiles; select one with FILE#NAME");
        cost = profiles.begin()->second;
      } else {
        const auto it = profiles.find(name);
        if (it == profiles.end())
          throw UsageError("profile '" + name + "' not found in " + file);
        cost = it->second;
      }
    }
    if (!overrides.empty()) {
      try {
        ApplyCostOverrides(cost, overrides);
      } catch (const DataError &e) {
        throw UsageError(e.what());
      }
    }
    return cost;
  }
};

GroupBy ParseGroupBy(const std::vector<std::string> &by) {
  const bool attack = std::find(by.begin(), by.end(), "attack") != by.end();
  const bool codec = std::find(by.begin(), by.end(), "codec") != by.end();
  for (const auto &b : by)
    if (b != "attack" && b != "codec") throw UsageError("--by accepts attack and codec, got '" + b + "'");
  if (attack && codec) return GroupBy::kAttackCodec;
  return attack ? GroupBy::kAttack : GroupBy::kCodec;
}

BinSpec ParseBins(const std::string &spec) {
  try {
    const WeightGrid g = WeightGrid::Parse(spec);  // same a:b:c syntax
    BinSpec b{g.start, g.stop, g.step};
    b.Validate();
    return b;
  } catch (const DataError &e) {
    throw UsageError("bad bin spec '" + spec + "' (want width:lo:hi): " + e.what());
  }
}

// ---------------------------------------------------------------------------
// audit

struct AuditOptions {
  std::string meta, audio, quality, format = "json", out;
  std::string duration_bins = "1:0:25", delay_bins = "0.1:0:5", quality_bins = "0.25:0:5";
  VadConfig vad;
};

int RunAudit(const AuditOptions &o, std::ostream &out) {
  const ReportFormat format = Format(o.format);
  const BinSpec duration_bins = ParseBins(o.duration_bins);
  const BinSpec delay_bins = ParseBins(o.delay_bins);
  const BinSpec quality_bins = ParseBins(o.quality_bins);
  if (!o.audio.empty() && !fs::is_directory(o.audio))
    throw IoError("audio directory not found: " + o.audio);
  if (!o.quality.empty() && !fs::exists(o.quality))
    throw IoError("cannot open " + o.quality);
  const auto meta = LoadMeta(o.meta);

  AuditReport report;
  report.balance = MakeBalanceReport(meta);
  if (!o.audio.empty()) {
    o.vad.Validate();
    std::vector<AudioMeasurement> measured;
    measured.reserve(meta.size());
    for (const auto &m : meta) {
      const AudioBuffer audio = ReadWav(fs::path(o.audio) / (m.utt_id + ".wav"));
      measured.push_back({m.utt_id, DurationSeconds(audio), SpeechOnsetDelay(audio, o.vad)});
    }
    report.duration = MakeDurationStats(measured, meta, duration_bins);
    report.delay = MakeDelayStats(measured, meta, delay_bins);
  }
  if (!o.quality.empty())
    report.quality = MakeQualitySummary(LoadScores(o.quality), meta, quality_bins);
  Emit(o.out, WriteReport(report, format), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval-cm

struct EvalCmOptions {
  std::string scores, meta, format = "json", out, table_out, table_format = "csv";
  std::string metric = "eer";
  std::vector<std::string> by;
  CostOptions cost;
};

int RunEvalCm(const EvalCmOptions &o, std::ostream &out) {
  const ReportFormat format = Format(o.format);
  const ReportFormat table_format = Format(o.table_format);
  const CostModel cost = o.cost.Resolve();
  const ScoreSet set = JoinScoresMetadata(LoadScores(o.scores), LoadMeta(o.meta));
  BinaryScores s;
  for (const auto &e : set.entries)
    (e.label == Label::kBonafide ? s.pos : s.neg).push_back(e.score);
  if (s.pos.empty() || s.neg.empty())
    throw DataError("both bonafide and spoof scores are required (got " +
                    std::to_string(s.pos.size()) + " bonafide, " +
                    std::to_string(s.neg.size()) + " spoof)");
  Emit(o.out, WriteReport(EvaluateBinary(s, cost), format), out);
  if (!o.by.empty()) {
    MetricKind metric;
    try {
      metric = ParseMetricKind(o.metric);
    } catch (const DataError &e) {
      throw UsageError(e.what());
    }
    const BreakdownTable table = GroupedEval(set, ParseGroupBy(o.by), metric, cost);
    Emit(o.table_out, WriteReport(table, table_format), out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval-sasv

struct EvalSasvOptions {
  std::string trials, scores, meta, format = "json", out, table_out, table_format = "csv";
  std::vector<std::string> by;
  double p = 0.5;
  std::size_t teer_grid = 256;
  std::optional<double> asv_threshold;
  CostOptions cost;
};

bool HasPairs(const std::vector<SasvTrialRecord> &trials) {
  return std::all_of(trials.begin(), trials.end(), [](const SasvTrialRecord &t) {
    return t.asv_score && t.cm_score;
  });
}

PairedSasvScores Pairs(const std::vector<SasvTrialRecord> &trials) {
  PairedSasvScores p;
  for (const auto &t : trials) {
    if (!t.asv_score || !t.cm_score)
      throw DataError("trial '" + t.key() + "' lacks an ASV or CM score");
    const PairedScore s{*t.asv_score, *t.cm_score};
    switch (t.trial_class) {
      case TrialClass::kTarget: p.target.push_back(s); break;
      case TrialClass::kNontarget: p.nontarget.push_back(s); break;
      case TrialClass::kSpoof: p.spoof.push_back(s); break;
    }
  }
  return p;
}

int RunEvalSasv(const EvalSasvOptions &o, std::ostream &out, std::ostream &err) {
  const ReportFormat format = Format(o.format);
  const ReportFormat table_format = Format(o.table_format);
  const CostModel cost = o.cost.Resolve();
  if (!o.by.empty() && o.meta.empty()) throw UsageError("--by needs --meta");
  if (!o.scores.empty() && !fs::exists(o.scores)) throw IoError("cannot open " + o.scores);
  const auto trials = LoadTrials(o.trials);
  if (trials.empty()) throw DataError("trial file has no trials");

  std::vector<double> fused(trials.size());
  if (!o.scores.empty()) {
    std::unordered_map<std::string, double> by_key;
    for (const auto &r : LoadScores(o.scores)) by_key.emplace(r.utt_id, r.score);
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const auto it = by_key.find(trials[i].key());
      if (it == by_key.end()) throw DataError("no fused score for trial '" + trials[i].key() + "'");
      fused[i] = it->second;
    }
  } else if (HasPairs(trials)) {
    for (std::size_t i = 0; i < trials.size(); ++i)
      fused[i] = LseFuse(*trials[i].cm_score, *trials[i].asv_score, {o.p});
  } else {
    throw DataError("no fused scores: pass --scores or trials with ASV and CM columns");
  }

  SasvScores s;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    switch (trials[i].trial_class) {
      case TrialClass::kTarget: s.target.push_back(fused[i]); break;
      case TrialClass::kNontarget: s.nontarget.push_back(fused[i]); break;
      case TrialClass::kSpoof: s.spoof.push_back(fused[i]); break;
    }
  }
  MetricReport report;
  const DcfResult a = MinADcf(s, cost);
  report.a_dcf = a.value;
  report.a_dcf_threshold = a.threshold;
  if (HasPairs(trials)) {
    const PairedSasvScores pairs = Pairs(trials);
    const TdcfResult t = MinTDcf(pairs, cost, o.asv_threshold);
    report.t_dcf = t.value;
    report.t_dcf_asv_threshold = t.asv_threshold;
    report.t_dcf_cm_threshold = t.cm_threshold;
    try {
      report.t_eer = TEer(pairs, {o.teer_grid, 1e-6}).rate;
    } catch (const NoConcurrentPointError &e) {
      err << "warning: t-EER not reported: " << e.what() << "\n";
      report.t_eer = std::optional<double>();
    }
  }
  Emit(o.out, WriteReport(report, format), out);

  if (!o.by.empty()) {
    const auto meta = LoadMeta(o.meta);
    std::unordered_map<std::string_view, const MetadataRecord *> index;
    for (const auto &m : meta) index.emplace(m.utt_id, &m);
    std::vector<AttributedTrial> attributed;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const auto it = index.find(trials[i].test_utt);
      if (it == index.end())
        throw DataError("no metadata for test utterance '" + trials[i].test_utt + "'");
      attributed.push_back({trials[i].trial_class, fused[i], it->second->attack_id,
                            it->second->codec_id});
    }
    Emit(o.table_out,
         WriteReport(GroupedEvalSasv(attributed, ParseGroupBy(o.by), cost), table_format),
         out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOptions {
  std::string mode, scores, meta, trials, column = "cm", model, out;
  std::string kind = "logreg", scaling = "cosine_affine", prior = "0.5";
  int max_iters = 100;
};

// Positive / negative training scores for the selected input.
std::pair<std::vector<double>, std::vector<double>> TrainingScores(const CalibrateOptions &o) {
  std::vector<double> pos, neg;
  if (!o.trials.empty()) {
    for (const auto &t : LoadTrials(o.trials)) {
      if (o.column == "asv") {
        if (t.trial_class == TrialClass::kSpoof) continue;  // target vs nontarget only
        if (!t.asv_score) throw DataError("trial '" + t.key() + "' has no ASV score");
        (t.trial_class == TrialClass::kTarget ? pos : neg).push_back(*t.asv_score);
      } else {
        if (!t.cm_score) throw DataError("trial '" + t.key() + "' has no CM score");
        (t.trial_class == TrialClass::kSpoof ? neg : pos).push_back(*t.cm_score);
      }
    }
    return {pos, neg};
  }
  if (o.scores.empty() || o.meta.empty())
    throw UsageError("fit needs --scores with --meta, or --trials");
  const ScoreSet set = JoinScoresMetadata(LoadScores(o.scores), LoadMeta(o.meta));
  for (const auto &e : set.entries) (e.label == Label::kBonafide ? pos : neg).push_back(e.score);
  return {pos, neg};
}

int RunCalibrate(const CalibrateOptions &o, std::ostream &out) {
  if (o.column != "asv" && o.column != "cm") throw UsageError("--column must be asv or cm");
  if (o.mode == "fit") {
    TrainConfig tc;
    tc.max_iters = o.max_iters;
    if (o.prior == "empirical") {
      tc.effective_prior.reset();
    } else {
      double prior = 0.0;
      const auto [ptr, ec] = std::from_chars(o.prior.data(), o.prior.data() + o.prior.size(), prior);
      if (ec != std::errc() || ptr != o.prior.data() + o.prior.size())
        throw UsageError("--prior must be a number or 'empirical'");
      tc.effective_prior = prior;
    }
    try {
      tc.Validate();
    } catch (const DataError &e) {
      throw UsageError(e.what());
    }
    ScoreScaling scaling;
    try {
      scaling.kind = ParseScalingKind(o.scaling);
    } catch (const DataError &e) {
      throw UsageError(e.what());
    }
    const auto [pos, neg] = TrainingScores(o);
    if (pos.empty() || neg.empty())
      throw DataError("calibration needs both classes (got " + std::to_string(pos.size()) +
                      " positive, " + std::to_string(neg.size()) + " negative)");
    CalibrationModel m;
    if (o.kind == "logreg")
      m = FitLogReg(pos, neg, tc);
    else if (o.kind == "beta")
      m = FitBeta(pos, neg, scaling, tc);
    else
      throw UsageError("--kind must be logreg or beta");
    Emit(o.out, ModelToJson(m), out);
    return kExitOk;
  }
  if (o.mode == "apply") {
    if (o.model.empty()) throw UsageError("apply needs --model");
    const CalibrationModel m = ModelFromJson(ReadText(o.model));
    if (!o.trials.empty()) {
      auto trials = LoadTrials(o.trials);
      for (auto &t : trials) {
        auto &slot = o.column == "asv" ? t.asv_score : t.cm_score;
        if (slot) slot = m.Apply(*slot);
      }
      Emit(o.out, WriteSasvTrials(trials), out);
      return kExitOk;
    }
    if (o.scores.empty()) throw UsageError("apply needs --scores or --trials");
    auto scores = LoadScores(o.scores);
    for (auto &s : scores) s.score = m.Apply(s.score);
    Emit(o.out, WriteCmScores(scores), out);
    return kExitOk;
  }
  throw UsageError("--mode must be fit or apply");
}

// ---------------------------------------------------------------------------
// fuse

struct FuseOptions {
  std::string mode = "linear", out;
  std::vector<std::string> scores;
  std::vector<double> weights;
  double p = 0.5;
};

int RunFuse(const FuseOptions &o, std::ostream &out) {
  if (o.mode != "linear" && o.mode != "lse") throw UsageError("--mode must be linear or lse");
  if (o.scores.size() < 2) throw UsageError("fuse needs at least two --scores files");
  if (o.mode == "lse" && o.scores.size() != 2)
    throw UsageError("lse fusion takes exactly two files: CM then ASV");
  if (o.mode == "linear" && !o.weights.empty() && o.weights.size() != o.scores.size())
    throw UsageError("--weights needs one weight per score file");
  for (const auto &f : o.scores)
    if (!fs::exists(f)) throw IoError("cannot open " + f);

  std::vector<std::vector<ScoreRecord>> files;
  for (const auto &f : o.scores) files.push_back(LoadScores(f));
  std::vector<std::unordered_map<std::string, double>> maps;
  for (const auto &f : files) {
    std::unordered_map<std::string, double> m;
    for (const auto &r : f) m.emplace(r.utt_id, r.score);
    maps.push_back(std::move(m));
  }
  std::set<std::string> offending;
  for (std::size_t k = 1; k < files.size(); ++k) {
    for (const auto &r : files[0])
      if (!maps[k].count(r.utt_id)) offending.insert(r.utt_id);
    for (const auto &r : files[k])
      if (!maps[0].count(r.utt_id)) offending.insert(r.utt_id);
  }
  if (!offending.empty()) {
    std::string msg = std::to_string(offending.size()) + " key(s) not present in every file:";
    std::size_t shown = 0;
    for (const auto &key : offending) {
      if (shown++ == 10) break;
      msg += " " + key;
    }
    throw DataError(msg);
  }

  LinearFusionSpec spec;
  spec.weights = o.weights.empty()
                     ? std::vector<double>(files.size(), 1.0 / static_cast<double>(files.size()))
                     : o.weights;
  std::vector<ScoreRecord> fused;
  fused.reserve(files[0].size());
  std::vector<double> row(files.size());
  for (const auto &r : files[0]) {
    for (std::size_t k = 0; k < files.size(); ++k) row[k] = maps[k].at(r.utt_id);
    const double v = o.mode == "lse" ? LseFuse(row[0], row[1], {o.p}) : LinearFuse(row, spec);
    fused.push_back({r.utt_id, v});
  }
  Emit(o.out, WriteCmScores(fused), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string trials, grid = "0:1:0.05", objective = "min_a_dcf", format = "json", out;
  CostOptions cost;
};

int RunSweep(const SweepOptions &o, std::ostream &out) {
  const ReportFormat format = Format(o.format);
  const CostModel cost = o.cost.Resolve();
  std::vector<double> grid;
  SweepObjective objective;
  try {
    grid = WeightGrid::Parse(o.grid).Points();
    objective = ParseSweepObjective(o.objective);
  } catch (const DataError &e) {
    throw UsageError(e.what());
  }
  const auto trials = LoadTrials(o.trials);
  if (trials.empty()) throw DataError("trial file has no trials");
  const SweepReport report = GridSearchWeight(Pairs(trials), objective, cost, grid);
  Emit(o.out, WriteReport(report, format), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

int RunSynth(const SynthConfig &cfg, const std::string &dir) {
  try {
    cfg.Validate();
  } catch (const DataError &e) {
    throw UsageError(e.what());
  }
  if (dir.empty()) throw UsageError("synth needs --out DIR");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const SynthData d = Synthesize(cfg);
  std::ostringstream sink;
  Emit((fs::path(dir) / "cm_scores.txt").string(), WriteCmScores(d.cm_scores), sink);
  Emit((fs::path(dir) / "metadata.tsv").string(), WriteMetadata(d.meta), sink);
  Emit((fs::path(dir) / "trials.tsv").string(), WriteSasvTrials(d.trials), sink);
  Emit((fs::path(dir) / "manifest.json").string(), SynthManifest(cfg), sink);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// asv-score

struct AsvScoreOptions {
  std::string embeddings, enroll, trials, out;
};

int RunAsvScore(const AsvScoreOptions &o, std::ostream &out) {
  std::unordered_map<std::string, Embedding> emb;
  {
    std::istringstream in(ReadText(o.embeddings));
    for (auto &e : ParseEmbeddings(in)) emb.emplace(std::move(e.utt_id), std::move(e.embedding));
  }
  auto lookup = [&emb](const std::string &utt) -> const Embedding & {
    const auto it = emb.find(utt);
    if (it == emb.end()) throw DataError("no embedding for utterance '" + utt + "'");
    return it->second;
  };

  std::unordered_map<std::string, Embedding> models;
  std::istringstream in(ReadText(o.enroll));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string id, utt;
    if (!(fields >> id) || id.front() == '#') continue;
    std::vector<Embedding> list;
    while (fields >> utt) list.push_back(lookup(utt));
    if (list.empty()) throw ParseError(number, "enrollment '" + id + "' lists no utterances");
    if (!models.emplace(id, EnrollAverage(list)).second)
      throw ParseError(number, "duplicate enrollment id '" + id + "'");
  }

  std::vector<ScoreRecord> scores;
  for (const auto &t : LoadTrials(o.trials)) {
    const auto it = models.find(t.enroll_id);
    if (it == models.end()) throw DataError("no enrollment for '" + t.enroll_id + "'");
    scores.push_back({t.key(), CosineScore(it->second, lookup(t.test_utt))});
  }
  Emit(o.out, WriteCmScores(scores), out);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Score-domain toolkit for spoofing-aware speaker verification", "sasvkit"};
  app.require_subcommand(1);

  AuditOptions audit_o;
  auto *audit = app.add_subcommand("audit", "Dataset balance, duration, delay and quality audit");
  audit->add_option("--meta", audit_o.meta, "Metadata TSV")->required();
  audit->add_option("--audio", audit_o.audio, "Directory of <utt_id>.wav files");
  audit->add_option("--scores", audit_o.quality, "Per-utterance quality scores (score-file format)");
  audit->add_option("--format", audit_o.format, "json or csv");
  audit->add_option("--out", audit_o.out, "Output path (default stdout)");
  audit->add_option("--duration-bins", audit_o.duration_bins, "width:lo:hi in seconds");
  audit->add_option("--delay-bins", audit_o.delay_bins, "width:lo:hi in seconds");
  audit->add_option("--quality-bins", audit_o.quality_bins, "width:lo:hi");
  audit->add_option("--vad-frame", audit_o.vad.frame_len, "VAD frame length (s)");
  audit->add_option("--vad-hop", audit_o.vad.hop, "VAD hop (s)");
  audit->add_option("--vad-threshold-db", audit_o.vad.threshold_db, "dB below the peak frame");
  audit->add_option("--vad-hangover", audit_o.vad.hangover_frames, "Active frames needed for onset");

  EvalCmOptions cm_o;
  auto *eval_cm = app.add_subcommand("eval-cm", "EER, minDCF, actDCF and Cllr of CM scores");
  eval_cm->add_option("--scores", cm_o.scores, "CM score file")->required();
  eval_cm->add_option("--meta", cm_o.meta, "Metadata TSV")->required();
  eval_cm->add_option("--by", cm_o.by, "Breakdown: attack, codec or both")->delimiter(',');
  eval_cm->add_option("--metric", cm_o.metric, "Breakdown metric: eer, min_dcf, act_dcf, cllr");
  eval_cm->add_option("--format", cm_o.format, "json, csv or text");
  eval_cm->add_option("--out", cm_o.out, "Output path (default stdout)");
  eval_cm->add_option("--table-out", cm_o.table_out, "Breakdown output path (default stdout)");
  eval_cm->add_option("--table-format", cm_o.table_format, "csv or json");
  cm_o.cost.Add(eval_cm);

  EvalSasvOptions sasv_o;
  auto *eval_sasv = app.add_subcommand("eval-sasv", "min a-DCF, min t-DCF and t-EER");
  eval_sasv->add_option("--trials", sasv_o.trials, "SASV trial file")->required();
  eval_sasv->add_option("--scores", sasv_o.scores, "Fused scores keyed enroll_id*test_utt");
  eval_sasv->add_option("--meta", sasv_o.meta, "Metadata of test utterances (for --by)");
  eval_sasv->add_option("--by", sasv_o.by, "Breakdown: attack, codec or both")->delimiter(',');
  eval_sasv->add_option("--p", sasv_o.p, "LSE weight used when fusing trial pairs");
  eval_sasv->add_option("--asv-threshold", sasv_o.asv_threshold, "ASV gate for t-DCF");
  eval_sasv->add_option("--teer-grid", sasv_o.teer_grid, "ASV grid points for t-EER");
  eval_sasv->add_option("--format", sasv_o.format, "json, csv or text");
  eval_sasv->add_option("--out", sasv_o.out, "Output path (default stdout)");
  eval_sasv->add_option("--table-out", sasv_o.table_out, "Breakdown output path");
  eval_sasv->add_option("--table-format", sasv_o.table_format, "csv or json");
  sasv_o.cost.Add(eval_sasv);

  CalibrateOptions cal_o;
  auto *calibrate = app.add_subcommand("calibrate", "Fit or apply a score-to-LLR calibrator");
  calibrate->add_option("--mode", cal_o.mode, "fit or apply")->required();
  calibrate->add_option("--scores", cal_o.scores, "Score file");
  calibrate->add_option("--meta", cal_o.meta, "Metadata TSV (fit on CM scores)");
  calibrate->add_option("--trials", cal_o.trials, "SASV trial file");
  calibrate->add_option("--column", cal_o.column, "Trial score column: asv or cm");
  calibrate->add_option("--model", cal_o.model, "Calibration model JSON (apply)");
  calibrate->add_option("--kind", cal_o.kind, "logreg or beta");
  calibrate->add_option("--scaling", cal_o.scaling, "cosine_affine, logistic or identity");
  calibrate->add_option("--prior", cal_o.prior, "Effective prior or 'empirical'");
  calibrate->add_option("--max-iters", cal_o.max_iters, "Solver iteration cap");
  calibrate->add_option("--out", cal_o.out, "Output path (default stdout)");

  FuseOptions fuse_o;
  auto *fuse = app.add_subcommand("fuse", "Linear or LSE score fusion");
  fuse->add_option("--mode", fuse_o.mode, "linear or lse");
  fuse->add_option("--scores", fuse_o.scores, "Score files (lse: CM,ASV)")->delimiter(',')->required();
  fuse->add_option("--weights", fuse_o.weights, "Linear weights")->delimiter(',');
  fuse->add_option("--p", fuse_o.p, "LSE weight of the ASV term");
  fuse->add_option("--out", fuse_o.out, "Output path (default stdout)");

  SweepOptions sweep_o;
  auto *sweep = app.add_subcommand("sweep", "Grid search of the LSE fusion weight");
  sweep->add_option("--trials", sweep_o.trials, "Trials with calibrated ASV and CM LLRs")->required();
  sweep->add_option("--grid", sweep_o.grid, "start:stop:step");
  sweep->add_option("--objective", sweep_o.objective, "min_a_dcf or act_a_dcf");
  sweep->add_option("--format", sweep_o.format, "json or csv");
  sweep->add_option("--out", sweep_o.out, "Output path (default stdout)");
  sweep_o.cost.Add(sweep);

  SynthConfig synth_o;
  std::string synth_dir;
  auto *synth = app.add_subcommand("synth", "Generate Gaussian score fixtures");
  synth->add_option("--seed", synth_o.seed, "RNG seed");
  synth->add_option("--n", synth_o.n_per_class, "Trials per class");
  synth->add_option("--mu-pos", synth_o.mu_pos, "Bonafide CM mean");
  synth->add_option("--mu-neg", synth_o.mu_neg, "Spoof CM mean");
  synth->add_option("--sigma", synth_o.sigma, "CM standard deviation");
  synth->add_option("--attacks", synth_o.attacks, "Number of attack ids");
  synth->add_option("--codecs", synth_o.codecs, "Number of codec conditions");
  synth->add_option("--asv-target-mean", synth_o.asv_target_mean, "ASV target mean");
  synth->add_option("--asv-nontarget-mean", synth_o.asv_nontarget_mean, "ASV nontarget mean");
  synth->add_option("--asv-spoof-mean", synth_o.asv_spoof_mean, "ASV spoof mean");
  synth->add_option("--asv-sigma", synth_o.asv_sigma, "ASV standard deviation");
  synth->add_option("--out", synth_dir, "Output directory")->required();

  AsvScoreOptions asv_o;
  auto *asv = app.add_subcommand("asv-score", "Cosine ASV scores from embeddings");
  asv->add_option("--embeddings", asv_o.embeddings, "Embedding text file")->required();
  asv->add_option("--enroll", asv_o.enroll, "Lines: enroll_id utt_id [utt_id ...]")->required();
  asv->add_option("--trials", asv_o.trials, "SASV trial file")->required();
  asv->add_option("--out", asv_o.out, "Output path (default stdout)");

  std::vector<char *> argv;
  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) storage.emplace_back("sasvkit");
  for (auto &a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*audit) return RunAudit(audit_o, out);
    if (*eval_cm) return RunEvalCm(cm_o, out);
    if (*eval_sasv) return RunEvalSasv(sasv_o, out, err);
    if (*calibrate) return RunCalibrate(cal_o, out);
    if (*fuse) return RunFuse(fuse_o, out);
    if (*sweep) return RunSweep(sweep_o, out);
    if (*synth) return RunSynth(synth_o, synth_dir);
    if (*asv) return RunAsvScore(asv_o, out);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError &e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace sasv::cli
