#pragma once

// Morphing Attack Potential matrix, robustness/generality curves, MAP_Avg.
//
// MAP[r][c] is the percentage of morphs verified with at least r probes of
// BOTH contributing subjects by at least c FRSs. The default (JointFrs)
// counts an FRS toward a morph only if that same FRS verifies >= r probes of
// each subject — the reading under which one deployed matcher accepts both
// identities. PooledFrs is the alternative reading (the c FRSs may differ
// between the subjects); it is opt-in.
//
// Curve and scalar weights: row r weighs r/r_max, column c weighs c/c_max.
//   robustness[r] = sum_c (c/c_max) MAP[r][c] / sum_c (c/c_max)
//   generality[c] = sum_r (r/r_max) MAP[r][c] / sum_r (r/r_max)
//   MAP_Avg      = sum_{r,c} (r/r_max)(c/c_max) (MAP[r][c]/100)
//                  / sum_{r,c} (r/r_max)(c/c_max)

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mapeval/errors.hpp"
#include "mapeval/format.hpp"
#include "mapeval/score_model.hpp"

namespace mapeval {

enum class FrsCountingMode { JointFrs, PooledFrs };

// n[morph][frs][role]: probes of that role accepted at the FRS's threshold.
class SuccessCounts {
 public:
  SuccessCounts(std::vector<std::string> morph_ids, std::vector<std::string> frs_ids)
      : morph_ids_(std::move(morph_ids)),
        frs_ids_(std::move(frs_ids)),
        counts_(morph_ids_.size() * frs_ids_.size(), {0, 0}) {
    for (std::size_t i = 0; i < morph_ids_.size(); ++i) morph_index_[morph_ids_[i]] = i;
    for (std::size_t i = 0; i < frs_ids_.size(); ++i) frs_index_[frs_ids_[i]] = i;
  }

  int at(std::size_t morph, std::size_t frs, SubjectRole role) const {
    return counts_[morph * frs_ids_.size() + frs][static_cast<int>(role)];
  }
  int at(const std::string& morph, const std::string& frs, SubjectRole role) const {
    return at(morph_index_.at(morph), frs_index_.at(frs), role);
  }
  void add(const std::string& morph, const std::string& frs, SubjectRole role) {
    counts_[morph_index_.at(morph) * frs_ids_.size() + frs_index_.at(frs)]
           [static_cast<int>(role)] += 1;
  }

  const std::vector<std::string>& morph_ids() const { return morph_ids_; }
  const std::vector<std::string>& frs_ids() const { return frs_ids_; }

 private:
  std::vector<std::string> morph_ids_;
  std::vector<std::string> frs_ids_;
  std::vector<std::array<int, 2>> counts_;
  std::map<std::string, std::size_t> morph_index_;
  std::map<std::string, std::size_t> frs_index_;
};

inline SuccessCounts success_counts(const ScoreDataset& ds, const ThresholdTable& thresholds) {
  for (const auto& frs : ds.frs_ids()) {
    if (!thresholds.entries.contains(frs)) {
      throw SemanticError("no threshold for FRS '" + frs + "'");
    }
  }
  SuccessCounts counts(ds.morph_ids(), ds.frs_ids());
  for (const auto& r : ds.records()) {
    if (r.score >= thresholds.entries.at(r.frs_id)) {
      counts.add(r.morph_id, r.frs_id, r.role);
    }
  }
  return counts;
}

struct MapMatrix {
  int r_max = 0;
  int c_max = 0;
  int morph_count = 0;
  std::vector<double> values;  // r-major, percentages

  double at(int r, int c) const {  // 1-based, matching the metric's indices
    return values[static_cast<std::size_t>(r - 1) * c_max + (c - 1)];
  }
  double& at(int r, int c) {
    return values[static_cast<std::size_t>(r - 1) * c_max + (c - 1)];
  }
};

inline MapMatrix map_matrix(const ScoreDataset& ds, const ThresholdTable& thresholds,
                            FrsCountingMode mode = FrsCountingMode::JointFrs) {
  const SuccessCounts n = success_counts(ds, thresholds);
  const int r_max = ds.r_max();
  const int c_max = static_cast<int>(ds.frs_ids().size());
  const int morphs = ds.morph_count();

  std::vector<int> cell_hits(static_cast<std::size_t>(r_max) * c_max, 0);
  for (std::size_t m = 0; m < ds.morph_ids().size(); ++m) {
    for (int r = 1; r <= r_max; ++r) {
      int frs_tally = 0;
      if (mode == FrsCountingMode::JointFrs) {
        for (std::size_t f = 0; f < ds.frs_ids().size(); ++f) {
          const int joint = std::min(n.at(m, f, SubjectRole::Accomplice),
                                     n.at(m, f, SubjectRole::Criminal));
          if (joint >= r) ++frs_tally;
        }
      } else {
        int tally_a = 0;
        int tally_b = 0;
        for (std::size_t f = 0; f < ds.frs_ids().size(); ++f) {
          if (n.at(m, f, SubjectRole::Accomplice) >= r) ++tally_a;
          if (n.at(m, f, SubjectRole::Criminal) >= r) ++tally_b;
        }
        frs_tally = std::min(tally_a, tally_b);
      }
      for (int c = 1; c <= frs_tally; ++c) {
        cell_hits[static_cast<std::size_t>(r - 1) * c_max + (c - 1)] += 1;
      }
    }
  }

  MapMatrix out;
  out.r_max = r_max;
  out.c_max = c_max;
  out.morph_count = morphs;
  out.values.resize(cell_hits.size());
  for (std::size_t i = 0; i < cell_hits.size(); ++i) {
    out.values[i] = 100.0 * static_cast<double>(cell_hits[i]) / static_cast<double>(morphs);
  }
  return out;
}

struct MapCurves {
  std::vector<double> robustness;  // length r_max
  std::vector<double> generality;  // length c_max
};

inline MapCurves curves(const MapMatrix& m) {
  MapCurves out;
  out.robustness.resize(m.r_max);
  out.generality.resize(m.c_max);
  for (int r = 1; r <= m.r_max; ++r) {
    double num = 0.0;
    double den = 0.0;
    for (int c = 1; c <= m.c_max; ++c) {
      const double w = static_cast<double>(c) / m.c_max;
      num += w * m.at(r, c);
      den += w;
    }
    out.robustness[r - 1] = num / den;
  }
  for (int c = 1; c <= m.c_max; ++c) {
    double num = 0.0;
    double den = 0.0;
    for (int r = 1; r <= m.r_max; ++r) {
      const double w = static_cast<double>(r) / m.r_max;
      num += w * m.at(r, c);
      den += w;
    }
    out.generality[c - 1] = num / den;
  }
  return out;
}

inline double map_avg(const MapMatrix& m) {
  double num = 0.0;
  double den = 0.0;
  for (int r = 1; r <= m.r_max; ++r) {
    for (int c = 1; c <= m.c_max; ++c) {
      const double w = (static_cast<double>(r) / m.r_max) * (static_cast<double>(c) / m.c_max);
      num += w * (m.at(r, c) / 100.0);
      den += w;
    }
  }
  return num / den;
}

inline constexpr std::string_view kMatrixCsvHeader = "r,c,map_percent";
inline constexpr std::string_view kCurvesCsvHeader = "axis,index,value";

inline void write_matrix_csv(const MapMatrix& m, std::ostream& out) {
  out << kMatrixCsvHeader << '\n';
  for (int r = 1; r <= m.r_max; ++r) {
    for (int c = 1; c <= m.c_max; ++c) {
      out << r << ',' << c << ',' << fmt_g17(m.at(r, c)) << '\n';
    }
  }
  if (!out) throw IoError("failed to write MAP matrix CSV");
}

inline void write_curves_csv(const MapCurves& cv, std::ostream& out) {
  out << kCurvesCsvHeader << '\n';
  for (std::size_t i = 0; i < cv.robustness.size(); ++i) {
    out << "robustness," << (i + 1) << ',' << fmt_g17(cv.robustness[i]) << '\n';
  }
  for (std::size_t i = 0; i < cv.generality.size(); ++i) {
    out << "generality," << (i + 1) << ',' << fmt_g17(cv.generality[i]) << '\n';
  }
  if (!out) throw IoError("failed to write curves CSV");
}

}  // namespace mapeval
