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

#ifndef SASV_PROTOCOL_IO_HPP_
#define SASV_PROTOCOL_IO_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sasv {

// Text formats. Blank lines and lines whose first non-space character is
// '#' are skipped everywhere. LF and CRLF are accepted, LF is emitted.
//
//   score file     utt_id <ws> score [<ws> ignored...]
//   metadata       utt_id \t gender \t codec_id \t attack_id \t label
//   SASV trials    enroll_id \t test_utt \t class [\t asv [\t cm]]
//
// In trial files an absent ASV score may be written as "-" when a CM score
// follows it.

struct ScoreRecord {
  std::string utt_id;
  double score = 0.0;

  bool operator==(const ScoreRecord &) const = default;
};

enum class Gender { kMale, kFemale, kUnknown };
enum class Label { kBonafide, kSpoof };

struct MetadataRecord {
  std::string utt_id;
  Gender gender = Gender::kUnknown;
  std::string codec_id = "-";   // "-" is the clean condition
  std::string attack_id = "-";  // "-" or "bonafide" on bonafide rows
  Label label = Label::kBonafide;

  bool operator==(const MetadataRecord &) const = default;
};

enum class TrialClass { kTarget, kNontarget, kSpoof };

struct SasvTrialRecord {
  std::string enroll_id;
  std::string test_utt;
  TrialClass trial_class = TrialClass::kTarget;
  std::optional<double> asv_score;
  std::optional<double> cm_score;

  /// Key used when trial scores are stored in score-file format.
  std::string key() const { return enroll_id + "*" + test_utt; }
  bool operator==(const SasvTrialRecord &) const = default;
};

/// True for the attack tokens that mark a bonafide utterance.
bool IsBonafideMarker(std::string_view attack_id);

std::string_view ToString(Gender g);
std::string_view ToString(Label l);
std::string_view ToString(TrialClass c);

std::vector<ScoreRecord> ParseCmScores(std::istream &in);
std::vector<MetadataRecord> ParseMetadata(std::istream &in);
std::vector<SasvTrialRecord> ParseSasvTrials(std::istream &in);

std::vector<ScoreRecord> ParseCmScores(std::string_view text);
std::vector<MetadataRecord> ParseMetadata(std::string_view text);
std::vector<SasvTrialRecord> ParseSasvTrials(std::string_view text);

std::string WriteCmScores(std::span<const ScoreRecord> records);
std::string WriteMetadata(std::span<const MetadataRecord> records);
std::string WriteSasvTrials(std::span<const SasvTrialRecord> records);

/// Shortest decimal text that parses back to exactly `value`.
std::string FormatReal(double value);

/// Scores joined with their metadata; the substrate of every CM metric.
struct ScoreSet {
  struct Entry {
    std::string utt_id;
    double score = 0.0;
    Label label = Label::kBonafide;
    std::string attack_id;
    std::string codec_id;
    Gender gender = Gender::kUnknown;
  };
  std::vector<Entry> entries;
  /// Metadata rows that had no score.
  std::size_t unscored = 0;

  std::size_t size() const { return entries.size(); }
  std::size_t count(Label l) const;
};

/// Joins scores to metadata by utt_id. Every score needs exactly one
/// metadata row; metadata without a score is counted, not an error.
ScoreSet JoinScoresMetadata(std::span<const ScoreRecord> scores,
                            std::span<const MetadataRecord> meta);

}  // namespace sasv

#endif  // SASV_PROTOCOL_IO_HPP_
