#pragma once

// Score-dataset data model and the external file formats.
//
// Score CSV      header: morph_id,subject_role,probe_id,frs_id,score
//                subject_role is A (accomplice) or B (criminal).
// Calibration CSV header: frs_id,label,score   label: genuine|impostor
// Threshold JSON  {"target_far":x,"thresholds":{"<frs_id>":tau,...}}
//                 tau is a number or the string "AboveMax" (reject all).
//
// Decision rule everywhere: score >= tau accepts.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapeval/errors.hpp"
#include "mapeval/format.hpp"

namespace mapeval {

enum class SubjectRole : std::uint8_t { Accomplice = 0, Criminal = 1 };

inline const char* role_csv_token(SubjectRole r) {
  return r == SubjectRole::Accomplice ? "A" : "B";
}

inline const char* role_name(SubjectRole r) {
  return r == SubjectRole::Accomplice ? "accomplice" : "criminal";
}

struct ScoreRecord {
  std::string morph_id;
  SubjectRole role = SubjectRole::Accomplice;
  std::string probe_id;
  std::string frs_id;
  double score = 0.0;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

// Uniform: every (morph, role, FRS) carries the same probe count, which is
// r_max. Ragged: r_max is the minimum count; opt-in.
enum class ProbePolicy { Uniform, Ragged };

namespace detail {

inline std::tuple<const std::string&, int, const std::string&, const std::string&>
record_key(const ScoreRecord& r) {
  return {r.morph_id, static_cast<int>(r.role), r.probe_id, r.frs_id};
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Reads a line, strips a trailing '\r'; returns false on EOF.
inline bool getline_norm(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace detail

class ScoreDataset {
 public:
  // Validates and canonicalizes. Record order never affects the result:
  // records are sorted by (morph_id, role, probe_id, frs_id) and the checks
  // walk sorted structures, so even error selection is order-independent.
  static ScoreDataset build(std::vector<ScoreRecord> records,
                            ProbePolicy policy = ProbePolicy::Uniform) {
    if (records.empty()) {
      throw IntegrityError("dataset contains no morphs (no score records)");
    }
    for (const auto& r : records) {
      if (!std::isfinite(r.score)) {
        throw IntegrityError("non-finite score for morph '" + r.morph_id + "'");
      }
      if (r.morph_id.empty() || r.probe_id.empty() || r.frs_id.empty()) {
        throw IntegrityError("empty identifier in a score record");
      }
    }
    std::sort(records.begin(), records.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
      return detail::record_key(a) < detail::record_key(b);
    });
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (detail::record_key(records[i - 1]) == detail::record_key(records[i])) {
        const auto& r = records[i];
        throw IntegrityError("duplicate score record for (morph '" + r.morph_id +
                             "', role " + role_csv_token(r.role) + ", probe '" +
                             r.probe_id + "', FRS '" + r.frs_id + "')");
      }
    }

    ScoreDataset ds;
    ds.policy_ = policy;
    ds.records_ = std::move(records);

    std::set<std::string> frs_set;
    for (const auto& r : ds.records_) frs_set.insert(r.frs_id);
    ds.frs_ids_.assign(frs_set.begin(), frs_set.end());

    // counts[morph][role][frs] = probe count
    std::map<std::string, std::array<std::map<std::string, int>, 2>> counts;
    for (const auto& r : ds.records_) {
      counts[r.morph_id][static_cast<int>(r.role)][r.frs_id] += 1;
    }
    ds.morph_ids_.reserve(counts.size());
    for (const auto& [morph, _] : counts) ds.morph_ids_.push_back(morph);

    int common = -1;
    int min_count = std::numeric_limits<int>::max();
    for (const auto& [morph, per_role] : counts) {
      for (int role = 0; role < 2; ++role) {
        for (const auto& frs : ds.frs_ids_) {
          const auto it = per_role[role].find(frs);
          if (it == per_role[role].end()) {
            throw IntegrityError("morph '" + morph + "' has no " +
                                 role_name(static_cast<SubjectRole>(role)) +
                                 " scores under FRS '" + frs + "'");
          }
          const int n = it->second;
          min_count = std::min(min_count, n);
          if (policy == ProbePolicy::Uniform) {
            if (common == -1) {
              common = n;
            } else if (n != common) {
              throw IntegrityError(
                  "uniform probe policy violated: morph '" + morph + "' has " +
                  std::to_string(n) + " " + role_name(static_cast<SubjectRole>(role)) +
                  " probes under FRS '" + frs + "' but " + std::to_string(common) +
                  " were seen elsewhere (use the ragged policy for uneven datasets)");
            }
          }
        }
      }
    }
    ds.r_max_ = policy == ProbePolicy::Uniform ? common : min_count;
    return ds;
  }

  const std::vector<ScoreRecord>& records() const { return records_; }
  const std::vector<std::string>& morph_ids() const { return morph_ids_; }
  const std::vector<std::string>& frs_ids() const { return frs_ids_; }
  int r_max() const { return r_max_; }
  int morph_count() const { return static_cast<int>(morph_ids_.size()); }
  ProbePolicy policy() const { return policy_; }

  int probe_count(const std::string& morph, SubjectRole role, const std::string& frs) const {
    int n = 0;
    for (const auto& r : records_) {
      if (r.morph_id == morph && r.role == role && r.frs_id == frs) ++n;
    }
    return n;
  }

  friend bool operator==(const ScoreDataset&, const ScoreDataset&) = default;

 private:
  std::vector<ScoreRecord> records_;
  std::vector<std::string> morph_ids_;
  std::vector<std::string> frs_ids_;
  int r_max_ = 0;
  ProbePolicy policy_ = ProbePolicy::Uniform;
};

inline constexpr std::string_view kScoreCsvHeader = "morph_id,subject_role,probe_id,frs_id,score";

inline ScoreDataset parse_score_csv(std::istream& in,
                                    ProbePolicy policy = ProbePolicy::Uniform) {
  std::string line;
  if (!detail::getline_norm(in, line) || line != kScoreCsvHeader) {
    throw ParseError("score CSV line 1: expected header '" + std::string(kScoreCsvHeader) +
                     "'");
  }
  std::vector<ScoreRecord> records;
  int line_no = 1;
  while (detail::getline_norm(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 5) {
      throw ParseError("score CSV line " + std::to_string(line_no) + ": expected 5 columns, got " +
                       std::to_string(fields.size()));
    }
    ScoreRecord r;
    r.morph_id = std::string(fields[0]);
    if (fields[1] == "A") {
      r.role = SubjectRole::Accomplice;
    } else if (fields[1] == "B") {
      r.role = SubjectRole::Criminal;
    } else {
      throw ParseError("score CSV line " + std::to_string(line_no) + ": unknown subject_role '" +
                       std::string(fields[1]) + "' (expected A or B)");
    }
    r.probe_id = std::string(fields[2]);
    r.frs_id = std::string(fields[3]);
    if (!parse_double_strict(fields[4], r.score)) {
      throw ParseError("score CSV line " + std::to_string(line_no) + ": non-numeric score '" +
                       std::string(fields[4]) + "'");
    }
    if (r.morph_id.empty() || r.probe_id.empty() || r.frs_id.empty()) {
      throw ParseError("score CSV line " + std::to_string(line_no) + ": empty identifier field");
    }
    records.push_back(std::move(r));
  }
  return ScoreDataset::build(std::move(records), policy);
}

inline void write_score_csv(const ScoreDataset& ds, std::ostream& out) {
  out << kScoreCsvHeader << '\n';
  for (const auto& r : ds.records()) {
    out << r.morph_id << ',' << role_csv_token(r.role) << ',' << r.probe_id << ','
        << r.frs_id << ',' << fmt_g17(r.score) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Calibration records

enum class CalLabel : std::uint8_t { Genuine = 0, Impostor = 1 };

struct CalibrationRecord {
  std::string frs_id;
  CalLabel label = CalLabel::Impostor;
  double score = 0.0;
};

struct CalibrationData {
  std::vector<CalibrationRecord> records;
  // frs_id -> (genuine count, impostor count)
  std::map<std::string, std::pair<int, int>> counts;

  std::vector<std::string> frs_without_impostors() const {
    std::vector<std::string> out;
    for (const auto& [frs, c] : counts) {
      if (c.second == 0) out.push_back(frs);
    }
    return out;
  }
};

inline constexpr std::string_view kCalibrationCsvHeader = "frs_id,label,score";

inline CalibrationData parse_calibration_csv(std::istream& in) {
  std::string line;
  if (!detail::getline_norm(in, line) || line != kCalibrationCsvHeader) {
    throw ParseError("calibration CSV line 1: expected header '" +
                     std::string(kCalibrationCsvHeader) + "'");
  }
  CalibrationData data;
  int line_no = 1;
  while (detail::getline_norm(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 3) {
      throw ParseError("calibration CSV line " + std::to_string(line_no) +
                       ": expected 3 columns, got " + std::to_string(fields.size()));
    }
    CalibrationRecord r;
    r.frs_id = std::string(fields[0]);
    if (fields[1] == "genuine") {
      r.label = CalLabel::Genuine;
    } else if (fields[1] == "impostor") {
      r.label = CalLabel::Impostor;
    } else {
      throw ParseError("calibration CSV line " + std::to_string(line_no) + ": unknown label '" +
                       std::string(fields[1]) + "' (expected genuine or impostor)");
    }
    if (!parse_double_strict(fields[2], r.score)) {
      throw ParseError("calibration CSV line " + std::to_string(line_no) +
                       ": non-numeric score '" + std::string(fields[2]) + "'");
    }
    if (r.frs_id.empty()) {
      throw ParseError("calibration CSV line " + std::to_string(line_no) + ": empty frs_id");
    }
    auto& c = data.counts[r.frs_id];
    (r.label == CalLabel::Genuine ? c.first : c.second) += 1;
    data.records.push_back(std::move(r));
  }
  return data;
}

inline void write_calibration_csv(const std::vector<CalibrationRecord>& records,
                                  std::ostream& out) {
  out << kCalibrationCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.frs_id << ',' << (r.label == CalLabel::Genuine ? "genuine" : "impostor") << ','
        << fmt_g17(r.score) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Threshold table

// AboveMax (no finite threshold meets the FAR target) is +infinity in memory
// and the string "AboveMax" on disk.
struct ThresholdTable {
  double target_far = 0.0;
  std::map<std::string, double> entries;

  static bool is_above_max(double tau) {
    return tau == std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const ThresholdTable&, const ThresholdTable&) = default;
};

inline void write_threshold_json(const ThresholdTable& table, std::ostream& out) {
  if (table.entries.empty()) {
    throw SemanticError("threshold table has no FRSs");
  }
  out << "{\"target_far\":" << fmt_g17(table.target_far) << ",\"thresholds\":{";
  bool first = true;
  for (const auto& [frs, tau] : table.entries) {
    if (!first) out << ',';
    first = false;
    out << json_quote(frs) << ':';
    if (ThresholdTable::is_above_max(tau)) {
      out << "\"AboveMax\"";
    } else {
      out << fmt_g17(tau);
    }
  }
  out << "}}";
  if (!out) throw IoError("failed to write threshold JSON");
}

inline ThresholdTable read_threshold_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("threshold JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("target_far") || !j.contains("thresholds")) {
    throw ParseError("threshold JSON: expected {\"target_far\":..., \"thresholds\":{...}}");
  }
  ThresholdTable table;
  if (!j["target_far"].is_number()) {
    throw ParseError("threshold JSON: target_far must be a number");
  }
  table.target_far = j["target_far"].get<double>();
  if (!(table.target_far > 0.0 && table.target_far < 1.0)) {
    throw ParseError("threshold JSON: target_far must lie in (0,1)");
  }
  const auto& th = j["thresholds"];
  if (!th.is_object() || th.empty()) {
    throw ParseError("threshold JSON: thresholds must be a non-empty object");
  }
  for (const auto& [frs, v] : th.items()) {
    if (v.is_number()) {
      const double tau = v.get<double>();
      if (!std::isfinite(tau)) {
        throw ParseError("threshold JSON: non-finite threshold for FRS '" + frs + "'");
      }
      table.entries[frs] = tau;
    } else if (v.is_string() && v.get<std::string>() == "AboveMax") {
      table.entries[frs] = std::numeric_limits<double>::infinity();
    } else {
      throw ParseError("threshold JSON: threshold for FRS '" + frs +
                       "' must be a number or \"AboveMax\"");
    }
  }
  return table;
}

}  // namespace mapeval
