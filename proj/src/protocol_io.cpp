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

#include "sasv/protocol_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sasv/errors.hpp"

namespace sasv {

namespace {

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '\v' &&
           c != '\f';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

bool SkipLine(std::string_view line) {
  const std::string_view t = Trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> SplitTabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = s.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> ParseReal(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
    return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// Calls fn(line_number, line) for every content line, with CR stripped.
template <typename Fn>
void ForEachLine(std::istream &in, Fn &&fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (SkipLine(line)) continue;
    fn(number, std::string_view(line));
  }
}

}  // namespace

bool IsBonafideMarker(std::string_view attack_id) {
  return attack_id == "-" || Lower(attack_id) == "bonafide";
}

std::string_view ToString(Gender g) {
  switch (g) {
    case Gender::kMale: return "M";
    case Gender::kFemale: return "F";
    case Gender::kUnknown: break;
  }
  return "unknown";
}

std::string_view ToString(Label l) {
  return l == Label::kBonafide ? "bonafide" : "spoof";
}

std::string_view ToString(TrialClass c) {
  switch (c) {
    case TrialClass::kTarget: return "target";
    case TrialClass::kNontarget: return "nontarget";
    case TrialClass::kSpoof: break;
  }
  return "spoof";
}

std::string FormatReal(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<ScoreRecord> ParseCmScores(std::istream &in) {
  std::vector<ScoreRecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  ForEachLine(in, [&](std::size_t n, std::string_view line) {
    const auto fields = SplitWhitespace(line);
    if (fields.size() < 2)
      throw ParseError(n, "expected 'utt_id score', got " +
                              std::to_string(fields.size()) + " field(s)");
    const auto score = ParseReal(fields[1]);
    if (!score)
      throw ParseError(n, "score is not a finite number: '" +
                              std::string(fields[1]) + "'");
    std::string id(fields[0]);
    const auto [it, inserted] = seen.emplace(id, n);
    if (!inserted)
      throw ParseError(n, "duplicate utt_id '" + id + "' (first seen on line " +
                              std::to_string(it->second) + ")");
    out.push_back({std::move(id), *score});
  });
  return out;
}

std::vector<MetadataRecord> ParseMetadata(std::istream &in) {
  std::vector<MetadataRecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  ForEachLine(in, [&](std::size_t n, std::string_view line) {
    const auto fields = SplitTabs(line);
    if (fields.size() != 5)
      throw ParseError(n, "expected 5 tab-separated columns, got " +
                              std::to_string(fields.size()));
    MetadataRecord rec;
    rec.utt_id = std::string(Trim(fields[0]));
    if (rec.utt_id.empty()) throw ParseError(n, "empty utt_id");

    const std::string gender = Lower(Trim(fields[1]));
    if (gender == "m" || gender == "male")
      rec.gender = Gender::kMale;
    else if (gender == "f" || gender == "female")
      rec.gender = Gender::kFemale;
    else if (gender == "unknown" || gender == "-" || gender == "u")
      rec.gender = Gender::kUnknown;
    else
      throw ParseError(n, "unknown gender '" + gender + "'");

    rec.codec_id = std::string(Trim(fields[2]));
    rec.attack_id = std::string(Trim(fields[3]));
    if (rec.codec_id.empty() || rec.attack_id.empty())
      throw ParseError(n, "empty codec or attack column");

    const std::string label = Lower(Trim(fields[4]));
    if (label == "bonafide")
      rec.label = Label::kBonafide;
    else if (label == "spoof")
      rec.label = Label::kSpoof;
    else
      throw ParseError(n, "unknown label '" + label + "'");

    if ((rec.label == Label::kBonafide) != IsBonafideMarker(rec.attack_id))
      throw ParseError(n, "label '" + label + "' inconsistent with attack '" +
                              rec.attack_id + "'");
    const auto [it, inserted] = seen.emplace(rec.utt_id, n);
    if (!inserted)
      throw ParseError(n, "duplicate utt_id '" + rec.utt_id +
                              "' (first seen on line " +
                              std::to_string(it->second) + ")");
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<SasvTrialRecord> ParseSasvTrials(std::istream &in) {
  std::vector<SasvTrialRecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  ForEachLine(in, [&](std::size_t n, std::string_view line) {
    const auto fields = SplitTabs(line);
    if (fields.size() < 3 || fields.size() > 5)
      throw ParseError(n, "expected 3 to 5 tab-separated columns, got " +
                              std::to_string(fields.size()));
    SasvTrialRecord rec;
    rec.enroll_id = std::string(Trim(fields[0]));
    rec.test_utt = std::string(Trim(fields[1]));
    if (rec.enroll_id.empty() || rec.test_utt.empty())
      throw ParseError(n, "empty enroll_id or test_utt");
    const std::string cls = Lower(Trim(fields[2]));
    if (cls == "target")
      rec.trial_class = TrialClass::kTarget;
    else if (cls == "nontarget" || cls == "non-target")
      rec.trial_class = TrialClass::kNontarget;
    else if (cls == "spoof")
      rec.trial_class = TrialClass::kSpoof;
    else
      throw ParseError(n, "unknown trial class '" + std::string(Trim(fields[2])) + "'");

    if (fields.size() >= 4) {
      const std::string_view tok = Trim(fields[3]);
      if (tok != "-") {
        rec.asv_score = ParseReal(tok);
        if (!rec.asv_score)
          throw ParseError(n, "ASV score is not a finite number: '" +
                                  std::string(tok) + "'");
      } else if (fields.size() == 4) {
        throw ParseError(n, "'-' placeholder without a following CM score");
      }
    }
    if (fields.size() == 5) {
      const std::string_view tok = Trim(fields[4]);
      rec.cm_score = ParseReal(tok);
      if (!rec.cm_score)
        throw ParseError(n, "CM score is not a finite number: '" +
                                std::string(tok) + "'");
    }
    const auto [it, inserted] = seen.emplace(rec.key(), n);
    if (!inserted)
      throw ParseError(n, "duplicate trial '" + rec.key() +
                              "' (first seen on line " +
                              std::to_string(it->second) + ")");
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<ScoreRecord> ParseCmScores(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseCmScores(in);
}

std::vector<MetadataRecord> ParseMetadata(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseMetadata(in);
}

std::vector<SasvTrialRecord> ParseSasvTrials(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseSasvTrials(in);
}

std::string WriteCmScores(std::span<const ScoreRecord> records) {
  std::string out;
  for (const auto &r : records) {
    out += r.utt_id;
    out += ' ';
    out += FormatReal(r.score);
    out += '\n';
  }
  return out;
}

std::string WriteMetadata(std::span<const MetadataRecord> records) {
  std::string out;
  for (const auto &r : records) {
    out += r.utt_id;
    out += '\t';
    out += ToString(r.gender);
    out += '\t';
    out += r.codec_id;
    out += '\t';
    out += r.attack_id;
    out += '\t';
    out += ToString(r.label);
    out += '\n';
  }
  return out;
}

std::string WriteSasvTrials(std::span<const SasvTrialRecord> records) {
  std::string out;
  for (const auto &r : records) {
    out += r.enroll_id;
    out += '\t';
    out += r.test_utt;
    out += '\t';
    out += ToString(r.trial_class);
    if (r.asv_score || r.cm_score) {
      out += '\t';
      out += r.asv_score ? FormatReal(*r.asv_score) : std::string("-");
    }
    if (r.cm_score) {
      out += '\t';
      out += FormatReal(*r.cm_score);
    }
    out += '\n';
  }
  return out;
}

std::size_t ScoreSet::count(Label l) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(),
      [l](const Entry &e) { return e.label == l; }));
}

ScoreSet JoinScoresMetadata(std::span<const ScoreRecord> scores,
                            std::span<const MetadataRecord> meta) {
  std::unordered_map<std::string_view, const MetadataRecord *> index;
  index.reserve(meta.size());
  for (const auto &m : meta) {
    if (!index.emplace(m.utt_id, &m).second)
      throw DataError("duplicate utt_id '" + m.utt_id + "' in metadata");
  }

  ScoreSet set;
  set.entries.reserve(scores.size());
  std::vector<std::string> missing;
  std::unordered_set<std::string_view> used;
  for (const auto &s : scores) {
    const auto it = index.find(s.utt_id);
    if (it == index.end()) {
      missing.push_back(s.utt_id);
      continue;
    }
    used.insert(it->first);
    const MetadataRecord &m = *it->second;
    set.entries.push_back(
        {s.utt_id, s.score, m.label, m.attack_id, m.codec_id, m.gender});
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) +
                      " scored utterance(s) have no metadata:";
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i)
      msg += " " + missing[i];
    if (missing.size() > 10) msg += " ...";
    throw DataError(msg);
  }
  set.unscored = meta.size() - used.size();
  return set;
}

}  // namespace sasv
