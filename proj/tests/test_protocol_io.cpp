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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "sasv/errors.hpp"
#include "sasv/protocol_io.hpp"

using namespace sasv;

TEST_CASE("cm scores: basic parse") {
  auto r = ParseCmScores(std::string_view("utt1 0.35\nutt2 -0.10\n"));
  REQUIRE(r.size() == 2);
  CHECK(r[0] == ScoreRecord{"utt1", 0.35});
  CHECK(r[1] == ScoreRecord{"utt2", -0.10});
  CHECK(ParseCmScores(std::string_view("")).empty());
}

TEST_CASE("cm scores: comments, blank lines, CRLF, extra columns") {
  auto r = ParseCmScores(std::string_view("# header\n\nu1\t1.5\r\n  u2   2e-3 extra\n"));
  REQUIRE(r.size() == 2);
  CHECK(r[0].score == 1.5);
  CHECK(r[1].utt_id == "u2");
  CHECK(r[1].score == 2e-3);
}

TEST_CASE("cm scores: errors carry line numbers") {
  try {
    ParseCmScores(std::string_view("utt1 abc"));
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 1);
  }
  try {
    ParseCmScores(std::string_view("# c\nu1 1\nu2\n"));
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(ParseCmScores(std::string_view("u1 1\nu1 2\n")), ParseError);
  CHECK_THROWS_AS(ParseCmScores(std::string_view("u1 nan\n")), ParseError);
  CHECK_THROWS_AS(ParseCmScores(std::string_view("u1 1.0x\n")), ParseError);
}

TEST_CASE("metadata: parse and validation") {
  auto r = ParseMetadata(std::string_view("u1\tM\t-\t-\tbonafide\nu2\tF\tC01\tA17\tspoof\n"));
  REQUIRE(r.size() == 2);
  CHECK(r[0].gender == Gender::kMale);
  CHECK(r[0].label == Label::kBonafide);
  CHECK(r[1].gender == Gender::kFemale);
  CHECK(r[1].codec_id == "C01");
  CHECK(r[1].attack_id == "A17");
  CHECK(r[1].label == Label::kSpoof);

  CHECK_THROWS_AS(ParseMetadata(std::string_view("u3\tF\t-\tA01\tbonafide\n")), ParseError);
  CHECK_THROWS_AS(ParseMetadata(std::string_view("u3\tF\t-\t-\tspoof\n")), ParseError);
  CHECK_THROWS_AS(ParseMetadata(std::string_view("u3\tF\t-\t-\tgenuine\n")), ParseError);
  CHECK_THROWS_AS(ParseMetadata(std::string_view("u3\tX\t-\t-\tbonafide\n")), ParseError);
  CHECK_THROWS_AS(ParseMetadata(std::string_view("u3\tF\t-\tbonafide\n")), ParseError);
  CHECK_THROWS_AS(
      ParseMetadata(std::string_view("u1\tM\t-\t-\tbonafide\nu1\tM\t-\t-\tbonafide\n")),
      ParseError);
  // "bonafide" is accepted as the attack marker on bonafide rows.
  CHECK(ParseMetadata(std::string_view("u4\t-\t-\tbonafide\tbonafide\n"))[0].gender ==
        Gender::kUnknown);
}

TEST_CASE("trials: parse") {
  auto r = ParseSasvTrials(std::string_view(
      "spk1\tu9\ttarget\t0.81\t2.3\nspk1\tu10\tspoof\nspk2\tu9\tNonTarget\t-\t1\n"));
  REQUIRE(r.size() == 3);
  CHECK(r[0].trial_class == TrialClass::kTarget);
  CHECK(*r[0].asv_score == 0.81);
  CHECK(*r[0].cm_score == 2.3);
  CHECK(r[1].trial_class == TrialClass::kSpoof);
  CHECK_FALSE(r[1].asv_score.has_value());
  CHECK_FALSE(r[1].cm_score.has_value());
  CHECK(r[2].trial_class == TrialClass::kNontarget);
  CHECK_FALSE(r[2].asv_score.has_value());
  CHECK(*r[2].cm_score == 1.0);
  CHECK(r[0].key() == "spk1*u9");

  CHECK_THROWS_AS(ParseSasvTrials(std::string_view("spk1\tu11\tbona\n")), ParseError);
  CHECK_THROWS_AS(ParseSasvTrials(std::string_view("spk1\tu11\ttarget\tx\n")), ParseError);
  CHECK_THROWS_AS(ParseSasvTrials(std::string_view("spk1\tu11\ttarget\t1\ty\n")), ParseError);
  CHECK_THROWS_AS(ParseSasvTrials(std::string_view("spk1\tu11\ttarget\t-\n")), ParseError);
  CHECK_THROWS_AS(ParseSasvTrials(std::string_view("spk1\tu11\n")), ParseError);
  CHECK_THROWS_AS(
      ParseSasvTrials(std::string_view("s\tu\ttarget\ns\tu\tspoof\n")), ParseError);
}

TEST_CASE("join scores with metadata") {
  std::vector<MetadataRecord> meta{{"u1", Gender::kMale, "-", "-", Label::kBonafide},
                                   {"u2", Gender::kFemale, "C01", "A01", Label::kSpoof}};
  std::vector<ScoreRecord> scores{{"u1", 1.0}, {"u2", -1.0}};
  auto set = JoinScoresMetadata(scores, meta);
  CHECK(set.size() == 2);
  CHECK(set.unscored == 0);
  CHECK(set.count(Label::kSpoof) == 1);
  CHECK(set.entries[1].attack_id == "A01");
  CHECK(set.entries[1].codec_id == "C01");

  std::vector<ScoreRecord> orphan{{"u1", 1.0}};
  std::vector<MetadataRecord> none;
  try {
    JoinScoresMetadata(orphan, none);
    FAIL("expected DataError");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("u1") != std::string::npos);
  }

  std::vector<ScoreRecord> empty;
  std::vector<MetadataRecord> one{meta[0]};
  auto s2 = JoinScoresMetadata(empty, one);
  CHECK(s2.size() == 0);
  CHECK(s2.unscored == 1);
}

TEST_CASE("join lists at most ten missing ids") {
  std::vector<ScoreRecord> scores;
  for (int i = 0; i < 15; ++i) scores.push_back({"x" + std::to_string(i), 0.0});
  std::vector<MetadataRecord> none;
  try {
    JoinScoresMetadata(scores, none);
    FAIL("expected DataError");
  } catch (const DataError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("x9") != std::string::npos);
    CHECK(msg.find("x10") == std::string::npos);
  }
}

TEST_CASE("property: writers and parsers round-trip") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd(0.0, 3.0);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<ScoreRecord> scores;
    std::vector<MetadataRecord> meta;
    std::vector<SasvTrialRecord> trials;
    for (int i = 0; i < 40; ++i) {
      const std::string id = "utt" + std::to_string(rep) + "_" + std::to_string(i);
      scores.push_back({id, nd(rng) * std::pow(10.0, pick(rng) - 1)});
      MetadataRecord m;
      m.utt_id = id;
      m.gender = static_cast<Gender>(pick(rng));
      m.codec_id = pick(rng) == 0 ? "-" : "C0" + std::to_string(pick(rng));
      if (pick(rng) == 0) {
        m.label = Label::kBonafide;
        m.attack_id = "-";
      } else {
        m.label = Label::kSpoof;
        m.attack_id = "A0" + std::to_string(pick(rng));
      }
      meta.push_back(m);
      SasvTrialRecord t;
      t.enroll_id = "spk" + std::to_string(i % 5);
      t.test_utt = id;
      t.trial_class = static_cast<TrialClass>(pick(rng));
      const int shape = pick(rng);
      if (shape >= 1) t.cm_score = nd(rng);
      if (shape == 2) t.asv_score = nd(rng);
      trials.push_back(t);
    }
    const std::string s_text = WriteCmScores(scores);
    const std::string m_text = WriteMetadata(meta);
    const std::string t_text = WriteSasvTrials(trials);
    CHECK(ParseCmScores(s_text) == scores);
    CHECK(ParseMetadata(m_text) == meta);
    CHECK(ParseSasvTrials(t_text) == trials);
    CHECK(WriteCmScores(ParseCmScores(s_text)) == s_text);
    CHECK(WriteMetadata(ParseMetadata(m_text)) == m_text);
    CHECK(WriteSasvTrials(ParseSasvTrials(t_text)) == t_text);
  }
}

TEST_CASE("FormatReal is shortest round-trip") {
  CHECK(FormatReal(0.1) == "0.1");
  CHECK(FormatReal(-2.0) == "-2");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(FormatReal(x)) == x);
}
