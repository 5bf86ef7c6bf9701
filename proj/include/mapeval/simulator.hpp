#pragma once

// Seeded synthetic world: identities uniform on the unit hypersphere, noisy
// renormalized probes, FRS models as cosine over random orthonormal
// projections, morphs built with lerp/slerp either on the raw identity
// embeddings or behind a fixed nonlinear encoder surrogate.
//
// Everything is a pure function of (config, seed); random streams are keyed
// by (seed, purpose, index) so outputs do not depend on evaluation order.
//
// Pair selection always ranks the raw identity embeddings by mean FRS score,
// mirroring enrollment-time similarity screening done by tools separate from
// the evaluated matchers; all scoring of a world then happens consistently
// within that world's space (raw or encoded).

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mapeval/calibration.hpp"
#include "mapeval/errors.hpp"
#include "mapeval/interp.hpp"
#include "mapeval/map_metric.hpp"
#include "mapeval/rng.hpp"
#include "mapeval/score_model.hpp"

namespace mapeval {

enum class InterpSpace { IdentityLevel, LatentLevel };
enum class AttackMode { Morph, UnrelatedIdentity };

inline const char* to_string(InterpSpace s) {
  return s == InterpSpace::IdentityLevel ? "identity" : "latent";
}

inline InterpSpace interp_space_from_string(const std::string& s) {
  if (s == "id" || s == "identity") return InterpSpace::IdentityLevel;
  if (s == "latent") return InterpSpace::LatentLevel;
  throw std::invalid_argument("unknown interpolation space '" + s + "' (expected id|latent)");
}

struct SimConfig {
  std::uint64_t seed = 42;
  int dim = 512;
  int n_identities = 60;
  int probes_per_identity = 10;
  double probe_noise_sigma = 0.05;
  int n_frs = 3;
  int frs_proj_dim = 64;
  double alpha = 0.5;
  InterpKind interp_kind = InterpKind::Slerp;
  InterpSpace interp_space = InterpSpace::IdentityLevel;
  int n_pairs = 30;
  // Degenerate encoder (identity map) collapses the latent/identity split.
  bool identity_surrogate = false;
  // UnrelatedIdentity swaps each morph for a third identity's embedding: the
  // no-attack baseline.
  AttackMode attack = AttackMode::Morph;

  void validate() const {
    if (dim < 2) throw std::invalid_argument("sim config: dim must be >= 2");
    if (n_identities < 2) throw std::invalid_argument("sim config: need >= 2 identities");
    if (probes_per_identity < 1) throw std::invalid_argument("sim config: need >= 1 probe");
    if (!(probe_noise_sigma > 0.0)) {
      throw std::invalid_argument("sim config: probe noise sigma must be > 0");
    }
    if (n_frs < 1) throw std::invalid_argument("sim config: need >= 1 FRS");
    if (frs_proj_dim < 2 || frs_proj_dim > dim) {
      throw std::invalid_argument("sim config: frs_proj_dim must lie in [2, dim]");
    }
    MorphingFactor{alpha};
    if (n_pairs < 1) throw std::invalid_argument("sim config: need >= 1 pair");
    const long long max_pairs =
        static_cast<long long>(n_identities) * (n_identities - 1) / 2;
    if (n_pairs > max_pairs) {
      throw std::invalid_argument("sim config: n_pairs exceeds available identity pairs (" +
                                  std::to_string(max_pairs) + ")");
    }
    if (attack == AttackMode::UnrelatedIdentity && n_identities < 3) {
      throw std::invalid_argument("sim config: unrelated-identity baseline needs >= 3 identities");
    }
  }
};

struct FrsModel {
  std::string frs_id;
  int rows = 0;
  int dim = 0;
  std::vector<double> projection;  // rows x dim, row-major, orthonormal rows
};

struct EncoderSurrogate {
  bool identity_map = false;
  int dim = 0;
  std::vector<double> weight;  // dim x dim, row-major, orthogonal rows scaled
  std::vector<double> bias;
  double gain = 1.0;

  EmbeddingVector apply(const EmbeddingVector& x) const {
    if (identity_map) return x;
    EmbeddingVector y(dim);
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      const double* row = weight.data() + static_cast<std::size_t>(i) * dim;
      for (int j = 0; j < dim; ++j) s += row[j] * x[j];
      y[i] = detmath::tanh(gain * (s + bias[i]));
    }
    return y;
  }
};

namespace detail {

inline int id_width(int count) {
  int w = 1;
  for (int v = count; v >= 10; v /= 10) ++w;
  return w;
}

inline std::string padded(const std::string& prefix, int index, int width) {
  std::string digits = std::to_string(index);
  std::string out = prefix;
  out.append(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))),
             '0');
  out += digits;
  return out;
}

// Modified Gram-Schmidt over fresh gaussian rows; a degenerate draw (norm
// below 1e-8 after projection) is discarded and redrawn.
inline std::vector<double> orthonormal_rows(rng::Stream& stream, int count, int dim) {
  std::vector<double> rows(static_cast<std::size_t>(count) * dim);
  std::vector<double> row(dim);
  for (int r = 0; r < count; ++r) {
    while (true) {
      for (int j = 0; j < dim; ++j) row[j] = stream.next_normal();
      for (int p = 0; p < r; ++p) {
        const double* q = rows.data() + static_cast<std::size_t>(p) * dim;
        double proj = 0.0;
        for (int j = 0; j < dim; ++j) proj += row[j] * q[j];
        for (int j = 0; j < dim; ++j) row[j] -= proj * q[j];
      }
      double n2 = 0.0;
      for (int j = 0; j < dim; ++j) n2 += row[j] * row[j];
      const double n = std::sqrt(n2);
      if (n >= 1e-8) {
        double* dst = rows.data() + static_cast<std::size_t>(r) * dim;
        for (int j = 0; j < dim; ++j) dst[j] = row[j] / n;
        break;
      }
    }
  }
  return rows;
}

}  // namespace detail

inline std::vector<EmbeddingVector> gen_identities(const SimConfig& cfg) {
  cfg.validate();
  std::vector<EmbeddingVector> out;
  out.reserve(cfg.n_identities);
  for (int i = 0; i < cfg.n_identities; ++i) {
    rng::Stream stream(cfg.seed, "identity", static_cast<std::uint64_t>(i));
    EmbeddingVector v;
    do {
      v = stream.normal_vector(cfg.dim);
    } while (l2_norm(v) == 0.0);
    out.push_back(normalized(v));
  }
  return out;
}

inline std::vector<EmbeddingVector> gen_probes(const EmbeddingVector& identity,
                                               int identity_index, const SimConfig& cfg) {
  rng::Stream stream(cfg.seed, "probe", static_cast<std::uint64_t>(identity_index));
  std::vector<EmbeddingVector> out;
  out.reserve(cfg.probes_per_identity);
  for (int k = 0; k < cfg.probes_per_identity; ++k) {
    EmbeddingVector v(identity.size());
    for (std::size_t j = 0; j < identity.size(); ++j) {
      v[j] = identity[j] + cfg.probe_noise_sigma * stream.next_normal();
    }
    out.push_back(normalized(v));
  }
  return out;
}

inline FrsModel make_frs_model(const SimConfig& cfg, int frs_index) {
  rng::Stream stream(cfg.seed, "frs", static_cast<std::uint64_t>(frs_index));
  FrsModel m;
  m.frs_id = detail::padded("frs", frs_index + 1, detail::id_width(cfg.n_frs));
  m.rows = cfg.frs_proj_dim;
  m.dim = cfg.dim;
  m.projection = detail::orthonormal_rows(stream, cfg.frs_proj_dim, cfg.dim);
  return m;
}

inline EncoderSurrogate make_encoder_surrogate(const SimConfig& cfg) {
  EncoderSurrogate enc;
  enc.dim = cfg.dim;
  if (cfg.identity_surrogate) {
    enc.identity_map = true;
    return enc;
  }
  rng::Stream stream(cfg.seed, "encoder", 0);
  enc.weight = detail::orthonormal_rows(stream, cfg.dim, cfg.dim);
  // Row scaling keeps the map invertible while breaking isotropy; the
  // sqrt(dim) gain pushes unit-vector components into tanh's curved region,
  // otherwise latent-level interpolation would be near-linear and the
  // ablation would not separate the spaces.
  for (int i = 0; i < cfg.dim; ++i) {
    const double scale = 0.7 + 0.6 * stream.next_unit();
    double* row = enc.weight.data() + static_cast<std::size_t>(i) * cfg.dim;
    for (int j = 0; j < cfg.dim; ++j) row[j] *= scale;
  }
  enc.bias.resize(cfg.dim);
  for (int i = 0; i < cfg.dim; ++i) enc.bias[i] = 0.05 * stream.next_normal();
  enc.gain = std::sqrt(static_cast<double>(cfg.dim));
  return enc;
}

namespace detail {

inline std::vector<double> project(const FrsModel& m, const EmbeddingVector& x) {
  std::vector<double> out(m.rows);
  for (int r = 0; r < m.rows; ++r) {
    const double* row = m.projection.data() + static_cast<std::size_t>(r) * m.dim;
    double s = 0.0;
    for (int j = 0; j < m.dim; ++j) s += row[j] * x[j];
    out[r] = s;
  }
  return out;
}

inline double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

inline double projected_cosine(const std::vector<double>& pa, double na,
                               const std::vector<double>& pb, double nb) {
  double d = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) d += pa[i] * pb[i];
  return d / (na * nb);
}

}  // namespace detail

inline double frs_score(const FrsModel& m, const EmbeddingVector& a, const EmbeddingVector& b) {
  if (static_cast<int>(a.size()) != m.dim || static_cast<int>(b.size()) != m.dim) {
    throw std::invalid_argument("frs_score: dimension mismatch with FRS projection");
  }
  const auto pa = detail::project(m, a);
  const auto pb = detail::project(m, b);
  const double na = detail::vec_norm(pa);
  const double nb = detail::vec_norm(pb);
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("frs_score: zero projected vector");
  }
  return detail::projected_cosine(pa, na, pb, nb);
}

inline EmbeddingVector make_morph(const EmbeddingVector& e_a, const EmbeddingVector& e_b,
                                  const SimConfig& cfg, const EncoderSurrogate& enc) {
  const MorphingFactor alpha{cfg.alpha};
  if (cfg.interp_space == InterpSpace::IdentityLevel) {
    return interpolate(e_a, e_b, alpha, cfg.interp_kind);
  }
  return interpolate(enc.apply(e_a), enc.apply(e_b), alpha, cfg.interp_kind);
}

inline EmbeddingVector make_morph(const EmbeddingVector& e_a, const EmbeddingVector& e_b,
                                  const SimConfig& cfg) {
  return make_morph(e_a, e_b, cfg, make_encoder_surrogate(cfg));
}

// Shared inputs for a family of runs: run_ablation reuses one world for all
// four (space, kind) rows.
struct SimWorld {
  std::vector<EmbeddingVector> identities;
  std::vector<std::vector<EmbeddingVector>> probes;  // [identity][k]
  std::vector<FrsModel> frs;
  EncoderSurrogate surrogate;
  std::vector<std::pair<int, int>> pairs;  // (accomplice, criminal), rank order
};

inline SimWorld build_world(const SimConfig& cfg, bool need_surrogate) {
  cfg.validate();
  SimWorld world;
  world.identities = gen_identities(cfg);
  world.probes.reserve(world.identities.size());
  for (int i = 0; i < cfg.n_identities; ++i) {
    world.probes.push_back(gen_probes(world.identities[i], i, cfg));
  }
  for (int f = 0; f < cfg.n_frs; ++f) {
    world.frs.push_back(make_frs_model(cfg, f));
  }
  if (need_surrogate || cfg.interp_space == InterpSpace::LatentLevel) {
    world.surrogate = make_encoder_surrogate(cfg);
  } else {
    world.surrogate.identity_map = true;
    world.surrogate.dim = cfg.dim;
  }

  // Most-similar pairs by mean FRS score over the raw embeddings.
  struct Ranked {
    int a;
    int b;
    double score;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(static_cast<std::size_t>(cfg.n_identities) * (cfg.n_identities - 1) / 2);
  for (int a = 0; a < cfg.n_identities; ++a) {
    for (int b = a + 1; b < cfg.n_identities; ++b) {
      double mean = 0.0;
      for (const auto& model : world.frs) {
        mean += frs_score(model, world.identities[a], world.identities[b]);
      }
      mean /= static_cast<double>(cfg.n_frs);
      ranked.push_back({a, b, mean});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  world.pairs.reserve(cfg.n_pairs);
  for (int i = 0; i < cfg.n_pairs; ++i) {
    world.pairs.emplace_back(ranked[i].a, ranked[i].b);
  }
  return world;
}

struct SimulationOutput {
  ScoreDataset scores;
  std::vector<CalibrationRecord> calibration;
  std::vector<std::pair<int, int>> pairs;
};

inline SimulationOutput run_simulation(const SimConfig& cfg, const SimWorld& world) {
  const bool latent = cfg.interp_space == InterpSpace::LatentLevel;
  const auto transform = [&](const EmbeddingVector& v) {
    return latent ? world.surrogate.apply(v) : v;
  };

  // Projected copies of every vector each FRS will compare.
  struct Projected {
    std::vector<double> v;
    double norm = 0.0;
  };
  const auto project = [&](const FrsModel& m, const EmbeddingVector& x) {
    Projected p;
    p.v = detail::project(m, x);
    p.norm = detail::vec_norm(p.v);
    if (p.norm == 0.0) throw std::invalid_argument("frs_score: zero projected vector");
    return p;
  };

  const int n_id = cfg.n_identities;
  const int n_probe = cfg.probes_per_identity;
  std::vector<std::vector<Projected>> proj_id(cfg.n_frs);     // [f][i]
  std::vector<std::vector<Projected>> proj_probe(cfg.n_frs);  // [f][i*n_probe + k]
  std::vector<EmbeddingVector> enrolled_id(n_id);
  for (int i = 0; i < n_id; ++i) enrolled_id[i] = transform(world.identities[i]);
  for (int f = 0; f < cfg.n_frs; ++f) {
    proj_id[f].reserve(n_id);
    proj_probe[f].reserve(static_cast<std::size_t>(n_id) * n_probe);
    for (int i = 0; i < n_id; ++i) {
      proj_id[f].push_back(project(world.frs[f], enrolled_id[i]));
      for (int k = 0; k < n_probe; ++k) {
        proj_probe[f].push_back(project(world.frs[f], transform(world.probes[i][k])));
      }
    }
  }

  // Attack enrollment vectors, one per selected pair.
  std::vector<EmbeddingVector> attacks;
  attacks.reserve(world.pairs.size());
  for (const auto& [a, b] : world.pairs) {
    if (cfg.attack == AttackMode::Morph) {
      attacks.push_back(make_morph(world.identities[a], world.identities[b], cfg,
                                   world.surrogate));
    } else {
      int c = (std::max(a, b) + 1) % n_id;
      while (c == a || c == b) c = (c + 1) % n_id;
      attacks.push_back(enrolled_id[c]);
    }
  }

  const int morph_width = detail::id_width(static_cast<int>(world.pairs.size()));
  const int id_w = detail::id_width(n_id > 0 ? n_id - 1 : 0);
  const int probe_w = detail::id_width(n_probe > 0 ? n_probe - 1 : 0);

  std::vector<ScoreRecord> records;
  records.reserve(world.pairs.size() * 2 * n_probe * cfg.n_frs);
  for (std::size_t m = 0; m < world.pairs.size(); ++m) {
    const std::string morph_id = detail::padded("m", static_cast<int>(m) + 1, morph_width);
    for (int f = 0; f < cfg.n_frs; ++f) {
      const auto pm = project(world.frs[f], attacks[m]);
      const auto subject = [&](SubjectRole role) {
        const int ident =
            role == SubjectRole::Accomplice ? world.pairs[m].first : world.pairs[m].second;
        const std::string id_tag = detail::padded("i", ident, id_w);
        for (int k = 0; k < n_probe; ++k) {
          const auto& pp = proj_probe[f][static_cast<std::size_t>(ident) * n_probe + k];
          ScoreRecord r;
          r.morph_id = morph_id;
          r.role = role;
          r.probe_id = id_tag + "_" + detail::padded("p", k, probe_w);
          r.frs_id = world.frs[f].frs_id;
          r.score = detail::projected_cosine(pm.v, pm.norm, pp.v, pp.norm);
          records.push_back(std::move(r));
        }
      };
      subject(SubjectRole::Accomplice);
      subject(SubjectRole::Criminal);
    }
  }

  std::vector<CalibrationRecord> calibration;
  calibration.reserve(static_cast<std::size_t>(cfg.n_frs) * n_id * n_probe * n_id);
  for (int f = 0; f < cfg.n_frs; ++f) {
    for (int i = 0; i < n_id; ++i) {
      for (int k = 0; k < n_probe; ++k) {
        const auto& pp = proj_probe[f][static_cast<std::size_t>(i) * n_probe + k];
        calibration.push_back({world.frs[f].frs_id, CalLabel::Genuine,
                               detail::projected_cosine(proj_id[f][i].v, proj_id[f][i].norm,
                                                        pp.v, pp.norm)});
      }
    }
    for (int i = 0; i < n_id; ++i) {
      for (int j = 0; j < n_id; ++j) {
        if (j == i) continue;
        for (int k = 0; k < n_probe; ++k) {
          const auto& pp = proj_probe[f][static_cast<std::size_t>(j) * n_probe + k];
          calibration.push_back({world.frs[f].frs_id, CalLabel::Impostor,
                                 detail::projected_cosine(proj_id[f][i].v, proj_id[f][i].norm,
                                                          pp.v, pp.norm)});
        }
      }
    }
  }

  SimulationOutput out{ScoreDataset::build(std::move(records)), std::move(calibration),
                       world.pairs};
  return out;
}

inline SimulationOutput run_simulation(const SimConfig& cfg) {
  cfg.validate();
  const SimWorld world = build_world(cfg, false);
  return run_simulation(cfg, world);
}

struct AblationRow {
  InterpSpace space;
  InterpKind kind;
  MapMatrix matrix;
  double map_avg_value = 0.0;
};

// The four (space, kind) combinations over one shared world; identity-space
// rows share thresholds, latent-space rows share thresholds.
inline std::vector<AblationRow> run_ablation(const SimConfig& base, double target_far) {
  base.validate();
  const SimWorld world = build_world(base, true);
  std::vector<AblationRow> rows;
  for (const InterpSpace space : {InterpSpace::IdentityLevel, InterpSpace::LatentLevel}) {
    for (const InterpKind kind : {InterpKind::Lerp, InterpKind::Slerp}) {
      SimConfig cfg = base;
      cfg.interp_space = space;
      cfg.interp_kind = kind;
      const SimulationOutput out = run_simulation(cfg, world);
      const CalibrationResult cal = calibrate(out.calibration, target_far);
      MapMatrix matrix = map_matrix(out.scores, cal.table);
      const double avg = map_avg(matrix);
      rows.push_back({space, kind, std::move(matrix), avg});
    }
  }
  return rows;
}

inline constexpr std::string_view kAblationCsvHeader = "space,kind,map_avg";

inline void write_ablation_csv(const std::vector<AblationRow>& rows, std::ostream& out) {
  out << kAblationCsvHeader << '\n';
  for (const auto& row : rows) {
    out << to_string(row.space) << ',' << to_string(row.kind) << ','
        << fmt_g17(row.map_avg_value) << '\n';
  }
  if (!out) throw IoError("failed to write ablation CSV");
}

}  // namespace mapeval
