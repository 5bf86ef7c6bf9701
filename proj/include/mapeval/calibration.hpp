#pragma once

// Per-FRS threshold calibration at a target false-acceptance rate.
//
// Candidate thresholds are the observed impostor scores themselves (no
// interpolation between them): tau_f is the smallest observed score whose
// FAR is within target, which maximizes acceptance subject to the FAR
// constraint. When even the maximum observed score is too permissive
// (duplicated maxima), the AboveMax sentinel rejects all observed impostors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapeval/errors.hpp"
#include "mapeval/score_model.hpp"

namespace mapeval {

// Fraction of impostor scores accepted (score >= threshold).
inline double far_at(double threshold, std::span<const double> impostor_scores) {
  if (impostor_scores.empty()) {
    throw std::invalid_argument("far_at: empty impostor score collection");
  }
  std::size_t accepted = 0;
  for (const double s : impostor_scores) {
    if (s >= threshold) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(impostor_scores.size());
}

// Fraction of genuine scores rejected (score < threshold).
inline double frr_at(double threshold, std::span<const double> genuine_scores) {
  if (genuine_scores.empty()) {
    throw std::invalid_argument("frr_at: empty genuine score collection");
  }
  std::size_t rejected = 0;
  for (const double s : genuine_scores) {
    if (s < threshold) ++rejected;
  }
  return static_cast<double>(rejected) / static_cast<double>(genuine_scores.size());
}

struct OperatingPoint {
  std::string frs_id;
  double threshold = 0.0;  // +inf when above_max
  bool above_max = false;
  double achieved_far = 0.0;
  std::optional<double> achieved_frr;  // only when genuine scores exist
  int impostor_count = 0;
  // Fewer impostor scores than 1/target_far: FAR granularity is coarser than
  // the target.
  bool resolution_warning = false;
};

struct CalibrationResult {
  ThresholdTable table;
  std::vector<OperatingPoint> points;  // sorted by frs_id
};

inline CalibrationResult calibrate(const std::vector<CalibrationRecord>& records,
                                   double target_far) {
  if (!(target_far > 0.0 && target_far < 1.0)) {
    throw std::invalid_argument("calibrate: target FAR must lie in (0,1)");
  }
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_frs;
  for (const auto& r : records) {
    auto& bucket = by_frs[r.frs_id];
    (r.label == CalLabel::Genuine ? bucket.first : bucket.second).push_back(r.score);
  }
  if (by_frs.empty()) {
    throw SemanticError("calibration impossible: no records");
  }

  CalibrationResult result;
  result.table.target_far = target_far;
  for (auto& [frs, bucket] : by_frs) {
    auto& [genuine, impostor] = bucket;
    if (impostor.empty()) {
      throw SemanticError("calibration impossible for FRS '" + frs +
                          "': no impostor scores");
    }
    std::sort(impostor.begin(), impostor.end());

    OperatingPoint op;
    op.frs_id = frs;
    op.impostor_count = static_cast<int>(impostor.size());
    op.resolution_warning = static_cast<double>(op.impostor_count) < 1.0 / target_far;

    // Smallest observed score with FAR within target; ascending walk over
    // distinct values keeps it deterministic under any input order.
    std::optional<double> tau;
    for (std::size_t i = 0; i < impostor.size();) {
      const double candidate = impostor[i];
      const double far = static_cast<double>(impostor.size() - i) /
                         static_cast<double>(impostor.size());
      if (far <= target_far) {
        tau = candidate;
        op.achieved_far = far;
        break;
      }
      while (i < impostor.size() && impostor[i] == candidate) ++i;
    }
    if (tau.has_value()) {
      op.threshold = *tau;
    } else {
      op.threshold = std::numeric_limits<double>::infinity();
      op.above_max = true;
      op.achieved_far = 0.0;
    }
    if (!genuine.empty()) {
      op.achieved_frr = frr_at(op.threshold, genuine);
    }
    result.table.entries[frs] = op.threshold;
    result.points.push_back(std::move(op));
  }
  return result;
}

}  // namespace mapeval
