#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mapeval/score_model.hpp"

using namespace mapeval;

namespace {

ScoreDataset parse(const std::string& text, ProbePolicy policy = ProbePolicy::Uniform) {
  std::istringstream in(text);
  return parse_score_csv(in, policy);
}

const std::string kMinimal =
    "morph_id,subject_role,probe_id,frs_id,score\n"
    "m1,A,p1,f1,0.9\n"
    "m1,B,p1,f1,0.8\n";

}  // namespace

TEST_CASE("minimal valid dataset: 1 morph x 2 roles x 1 probe x 1 FRS") {
  const auto ds = parse(kMinimal);
  REQUIRE(ds.morph_count() == 1);
  REQUIRE(ds.r_max() == 1);
  REQUIRE(ds.frs_ids() == std::vector<std::string>{"f1"});
  REQUIRE(ds.records().size() == 2);
}

TEST_CASE("header with no data rows is an empty-dataset error") {
  REQUIRE_THROWS_AS(parse("morph_id,subject_role,probe_id,frs_id,score\n"), IntegrityError);
}

TEST_CASE("bad header is a parse error naming line 1") {
  try {
    parse("morph,role,probe,frs,score\nm1,A,p1,f1,0.1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("malformed rows carry their line number") {
  const std::string base = "morph_id,subject_role,probe_id,frs_id,score\n";
  for (const auto& [row, what] :
       std::vector<std::pair<std::string, std::string>>{
           {"m1,A,p1,f1\n", "5 columns"},
           {"m1,X,p1,f1,0.5\n", "subject_role"},
           {"m1,A,p1,f1,abc\n", "non-numeric"},
           {"m1,A,p1,f1,nan\n", "non-numeric"},
           {",A,p1,f1,0.5\n", "empty identifier"}}) {
    try {
      parse(base + row);
      FAIL("expected ParseError for row: " + row);
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      INFO(msg);
      REQUIRE(msg.find("line 2") != std::string::npos);
      REQUIRE(msg.find(what) != std::string::npos);
    }
  }
}

TEST_CASE("duplicate key is an integrity error naming the key") {
  const std::string text =
      "morph_id,subject_role,probe_id,frs_id,score\n"
      "m1,A,p1,f1,0.9\n"
      "m1,B,p1,f1,0.8\n"
      "m1,A,p1,f1,0.7\n";
  try {
    parse(text);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("duplicate") != std::string::npos);
    REQUIRE(msg.find("m1") != std::string::npos);
    REQUIRE(msg.find("f1") != std::string::npos);
  }
}

TEST_CASE("missing role coverage names the morph") {
  const std::string text =
      "morph_id,subject_role,probe_id,frs_id,score\n"
      "m1,A,p1,f1,0.9\n"
      "m1,B,p1,f1,0.8\n"
      "m2,A,p1,f1,0.9\n";
  try {
    parse(text);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("m2") != std::string::npos);
    REQUIRE(msg.find("criminal") != std::string::npos);
  }
}

TEST_CASE("uneven probe counts break the uniform policy but not ragged") {
  const std::string text =
      "morph_id,subject_role,probe_id,frs_id,score\n"
      "m1,A,p1,f1,0.9\n"
      "m1,A,p2,f1,0.7\n"
      "m1,B,p1,f1,0.8\n";
  try {
    parse(text);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    REQUIRE(std::string(e.what()).find("m1") != std::string::npos);
  }
  const auto ds = parse(text, ProbePolicy::Ragged);
  REQUIRE(ds.r_max() == 1);
  REQUIRE(ds.probe_count("m1", SubjectRole::Accomplice, "f1") == 2);
}

TEST_CASE("row order never affects the dataset") {
  const std::string text =
      "morph_id,subject_role,probe_id,frs_id,score\n"
      "m2,A,p1,f2,0.4\n"
      "m1,A,p1,f1,0.9\n"
      "m2,B,p1,f2,0.3\n"
      "m1,B,p1,f1,0.8\n"
      "m1,A,p1,f2,0.5\n"
      "m1,B,p1,f2,0.2\n"
      "m2,A,p1,f1,0.6\n"
      "m2,B,p1,f1,0.1\n";
  const auto ds = parse(text);

  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  std::mt19937 shuffle_rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(lines.begin(), lines.end(), shuffle_rng);
    std::string permuted = "morph_id,subject_role,probe_id,frs_id,score\n";
    for (const auto& l : lines) permuted += l + "\n";
    REQUIRE(parse(permuted) == ds);
  }
}

TEST_CASE("serialize then parse is the identity") {
  const std::string text =
      "morph_id,subject_role,probe_id,frs_id,score\n"
      "m1,A,p1,f1,0.912345678901234567\n"
      "m1,B,p1,f1,-0.25\n"
      "m1,A,p1,f2,1e-17\n"
      "m1,B,p1,f2,42\n";
  const auto ds = parse(text);
  std::ostringstream out;
  write_score_csv(ds, out);
  REQUIRE(parse(out.str()) == ds);
}

TEST_CASE("windows line endings are tolerated") {
  const auto ds = parse("morph_id,subject_role,probe_id,frs_id,score\r\nm1,A,p1,f1,0.9\r\nm1,B,p1,f1,0.8\r\n");
  REQUIRE(ds.morph_count() == 1);
}

// --- calibration CSV ---

TEST_CASE("calibration CSV: single row") {
  std::istringstream in("frs_id,label,score\nf1,impostor,0.31\n");
  const auto data = parse_calibration_csv(in);
  REQUIRE(data.records.size() == 1);
  REQUIRE(data.records[0].label == CalLabel::Impostor);
  REQUIRE(data.records[0].score == 0.31);
}

TEST_CASE("calibration CSV: misspelled label is rejected with its line") {
  std::istringstream in("frs_id,label,score\nf1,impostor,0.31\nf1,Imposter,0.2\n");
  try {
    parse_calibration_csv(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("line 3") != std::string::npos);
    REQUIRE(msg.find("Imposter") != std::string::npos);
  }
}

TEST_CASE("calibration CSV: grouped counts") {
  std::string text = "frs_id,label,score\n";
  for (int i = 0; i < 1000; ++i) text += "f1,impostor,0." + std::to_string(100 + i) + "\n";
  for (int i = 0; i < 1000; ++i) text += "f1,genuine,0." + std::to_string(900 + i) + "\n";
  std::istringstream in(text);
  const auto data = parse_calibration_csv(in);
  REQUIRE(data.counts.at("f1").first == 1000);
  REQUIRE(data.counts.at("f1").second == 1000);
  REQUIRE(data.frs_without_impostors().empty());
}

TEST_CASE("calibration CSV: FRS with only genuine rows is flagged") {
  std::istringstream in("frs_id,label,score\nf1,genuine,0.9\nf2,impostor,0.1\n");
  const auto data = parse_calibration_csv(in);
  REQUIRE(data.frs_without_impostors() == std::vector<std::string>{"f1"});
}

// --- threshold JSON ---

TEST_CASE("threshold JSON bytes for a single entry") {
  ThresholdTable t;
  t.target_far = 0.001;
  t.entries["f1"] = 0.5;
  std::ostringstream out;
  write_threshold_json(t, out);
  REQUIRE(out.str() == R"({"target_far":0.001,"thresholds":{"f1":0.5}})");
}

TEST_CASE("empty threshold table is an error") {
  ThresholdTable t;
  t.target_far = 0.001;
  std::ostringstream out;
  REQUIRE_THROWS_AS(write_threshold_json(t, out), SemanticError);
}

TEST_CASE("threshold JSON round-trips three FRSs including AboveMax") {
  ThresholdTable t;
  t.target_far = 0.01;
  t.entries["a"] = 0.1;
  t.entries["b"] = std::numeric_limits<double>::infinity();
  t.entries["c"] = -3.75e-17;
  std::ostringstream out;
  write_threshold_json(t, out);
  std::istringstream in(out.str());
  REQUIRE(read_threshold_json(in) == t);
}

TEST_CASE("threshold JSON rejects junk") {
  for (const std::string bad :
       {"not json", "{}", R"({"target_far":1.5,"thresholds":{"f":1}})",
        R"({"target_far":0.1,"thresholds":{}})",
        R"({"target_far":0.1,"thresholds":{"f":"huge"}})"}) {
    std::istringstream in(bad);
    REQUIRE_THROWS_AS(read_threshold_json(in), ParseError);
  }
}
