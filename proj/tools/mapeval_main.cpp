// mapeval — morphing attack potential evaluation over match-score datasets.
//
// Subcommands: calibrate, map, curves, compare, simulate, ablate, interp.
// Exit codes: 0 success, 1 input error (parse/integrity/IO), 2 semantic error
// (threshold coverage, calibration impossible, shape mismatch).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapeval/calibration.hpp"
#include "mapeval/errors.hpp"
#include "mapeval/interp.hpp"
#include "mapeval/map_metric.hpp"
#include "mapeval/report.hpp"
#include "mapeval/score_model.hpp"
#include "mapeval/simulator.hpp"
#include "mapeval/version.hpp"

namespace fs = std::filesystem;
using namespace mapeval;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
  if (!out) throw IoError("failed to write '" + path.string() + "'");
}

struct GlobalFlags {
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string format;  // "", csv, json, md
  bool ragged = false;
  bool pooled_frs = false;
};

int cmd_calibrate(const std::string& scores_path, double target_far,
                  const std::string& out_path) {
  auto in = open_input(scores_path);
  const CalibrationData data = parse_calibration_csv(in);
  for (const auto& frs : data.frs_without_impostors()) {
    std::cerr << "warning: FRS '" << frs << "' has no impostor records\n";
  }
  const CalibrationResult result = calibrate(data.records, target_far);
  {
    auto out = open_output(out_path);
    write_threshold_json(result.table, out);
  }
  for (const auto& op : result.points) {
    std::cout << op.frs_id << ": threshold="
              << (op.above_max ? std::string("AboveMax") : fmt_g17(op.threshold))
              << " achieved_far=" << fmt_g17(op.achieved_far);
    if (op.achieved_frr.has_value()) {
      std::cout << " achieved_frr=" << fmt_g17(*op.achieved_frr);
    }
    std::cout << " impostors=" << op.impostor_count << '\n';
    if (op.resolution_warning) {
      std::cerr << "warning: FRS '" << op.frs_id << "' has only " << op.impostor_count
                << " impostor scores; FAR granularity exceeds the target "
                << fmt_g17(target_far) << '\n';
    }
  }
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

ReportBundle bundle_from_files(const std::string& scores_path,
                               const std::string& thresholds_path, const std::string& label,
                               const GlobalFlags& g) {
  auto scores_in = open_input(scores_path);
  const ScoreDataset ds =
      parse_score_csv(scores_in, g.ragged ? ProbePolicy::Ragged : ProbePolicy::Uniform);
  auto th_in = open_input(thresholds_path);
  const ThresholdTable table = read_threshold_json(th_in);
  const MapMatrix matrix = map_matrix(
      ds, table, g.pooled_frs ? FrsCountingMode::PooledFrs : FrsCountingMode::JointFrs);
  BundleMeta meta;
  meta.label = label.empty() ? fs::path(scores_path).stem().string() : label;
  meta.dataset = scores_path;
  meta.thresholds = thresholds_path;
  return make_report_bundle(matrix, std::move(meta));
}

int cmd_map(const std::string& scores_path, const std::string& thresholds_path,
            const std::string& label, const GlobalFlags& g) {
  const ReportBundle bundle = bundle_from_files(scores_path, thresholds_path, label, g);
  const fs::path out_dir(g.out_dir);

  {
    auto out = open_output(out_dir / "map_matrix.csv");
    write_matrix_csv(bundle.matrix, out);
  }
  {
    auto out = open_output(out_dir / "map_curves.csv");
    write_curves_csv(bundle.curves, out);
  }
  {
    auto out = open_output(out_dir / "map_summary.json");
    write_summary_json(bundle, out);
  }

  if (g.format == "md") {
    std::cout << render_matrix_markdown(bundle.matrix);
  } else if (g.format == "csv") {
    std::ostringstream os;
    write_matrix_csv(bundle.matrix, os);
    std::cout << os.str();
  } else if (g.format == "json") {
    std::ostringstream os;
    write_summary_json(bundle, os);
    std::cout << os.str() << '\n';
  } else {
    std::cout << render_matrix_text(bundle.matrix);
  }
  std::cout << "MAP_Avg = " << fmt_fixed(bundle.map_avg, 4) << '\n';
  return 0;
}

int cmd_curves(const std::vector<std::string>& summary_paths, const GlobalFlags& g) {
  std::vector<ReportBundle> bundles;
  bundles.reserve(summary_paths.size());
  for (const auto& path : summary_paths) {
    auto in = open_input(path);
    bundles.push_back(read_summary_json(in));
  }
  const fs::path out_dir(g.out_dir);
  write_file(out_dir / "robustness.svg", render_robustness_svg(bundles));
  write_file(out_dir / "generality.svg", render_generality_svg(bundles));
  std::cout << "wrote " << (out_dir / "robustness.svg").string() << " and "
            << (out_dir / "generality.svg").string() << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string>& summary_paths) {
  std::vector<ReportBundle> bundles;
  bundles.reserve(summary_paths.size());
  for (const auto& path : summary_paths) {
    auto in = open_input(path);
    bundles.push_back(read_summary_json(in));
  }
  std::cout << render_compare_markdown(bundles);
  return 0;
}

int cmd_simulate(const SimConfig& cfg, const std::string& out_scores,
                 const std::string& out_cal) {
  const SimulationOutput out = run_simulation(cfg);
  {
    auto os = open_output(out_scores);
    write_score_csv(out.scores, os);
  }
  {
    auto os = open_output(out_cal);
    write_calibration_csv(out.calibration, os);
  }
  std::cout << "simulated " << out.scores.morph_count() << " morphs, "
            << out.scores.records().size() << " score records, "
            << out.calibration.size() << " calibration records\n";
  std::cout << "wrote " << out_scores << " and " << out_cal << '\n';
  return 0;
}

int cmd_ablate(const SimConfig& cfg, double target_far, const std::string& out_path) {
  const std::vector<AblationRow> rows = run_ablation(cfg, target_far);
  {
    auto os = open_output(out_path);
    write_ablation_csv(rows, os);
  }
  for (const auto& row : rows) {
    std::cout << to_string(row.space) << '/' << to_string(row.kind)
              << ": MAP_Avg = " << fmt_fixed(row.map_avg_value, 4) << '\n';
  }
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int cmd_interp(const std::string& file, double alpha, const std::string& kind,
               const std::string& out_path) {
  auto in = open_input(file);
  std::vector<EmbeddingVector> vectors;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    EmbeddingVector v;
    std::string token;
    while (ls >> token) {
      double x = 0.0;
      if (!parse_double_strict(token, x)) {
        throw ParseError("vector file line " + std::to_string(line_no) +
                         ": non-numeric component '" + token + "'");
      }
      v.push_back(x);
    }
    if (!v.empty()) vectors.push_back(std::move(v));
  }
  if (vectors.size() != 2) {
    throw ParseError("vector file must contain exactly two vectors, got " +
                     std::to_string(vectors.size()));
  }
  const EmbeddingVector result = interpolate(vectors[0], vectors[1], MorphingFactor{alpha},
                                             interp_kind_from_string(kind));
  std::ostringstream os;
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (i > 0) os << ' ';
    os << fmt_g17(result[i]);
  }
  os << '\n';
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    write_file(out_path, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphing attack potential evaluation toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "RNG seed for simulation commands");
  app.add_option("--out-dir", g.out_dir, "directory for generated files");
  app.add_option("--format", g.format, "stdout format for tables")
      ->check(CLI::IsMember({"csv", "json", "md"}));
  app.add_flag("--ragged", g.ragged,
               "allow uneven probe counts; r_max becomes the minimum count");
  app.add_flag("--pooled-frs", g.pooled_frs,
               "count FRSs separately per subject instead of jointly");

  // calibrate
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "derive per-FRS thresholds at a target FAR");
  calibrate_cmd->fallthrough();
  std::string cal_scores;
  double cal_far = 0.001;
  std::string cal_out = "thresholds.json";
  calibrate_cmd->add_option("--scores", cal_scores, "calibration CSV")->required();
  calibrate_cmd->add_option("--far", cal_far, "target false acceptance rate")->required();
  calibrate_cmd->add_option("--out", cal_out, "output threshold JSON");

  // map
  auto* map_cmd = app.add_subcommand("map", "compute the MAP matrix, curves and MAP_Avg");
  map_cmd->fallthrough();
  std::string map_scores;
  std::string map_thresholds;
  std::string map_label;
  map_cmd->add_option("--scores", map_scores, "score CSV")->required();
  map_cmd->add_option("--thresholds", map_thresholds, "threshold JSON")->required();
  map_cmd->add_option("--label", map_label, "algorithm label for reports");

  // curves
  auto* curves_cmd = app.add_subcommand("curves", "render robustness/generality SVG charts");
  curves_cmd->fallthrough();
  std::vector<std::string> curves_inputs;
  curves_cmd->add_option("summaries", curves_inputs, "summary JSON files")
      ->required()
      ->expected(-1);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "merge summaries into one table");
  compare_cmd->fallthrough();
  std::vector<std::string> compare_inputs;
  compare_cmd->add_option("summaries", compare_inputs, "summary JSON files (>= 2)")
      ->required()
      ->expected(-1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic score dataset");
  sim_cmd->fallthrough();
  SimConfig sim;
  std::string sim_kind = "slerp";
  std::string sim_space = "id";
  std::string sim_out_scores = "sim_scores.csv";
  std::string sim_out_cal = "sim_calibration.csv";
  bool sim_identity_surrogate = false;
  bool sim_baseline = false;
  sim_cmd->add_option("--identities", sim.n_identities, "identity count");
  sim_cmd->add_option("--probes", sim.probes_per_identity, "probes per identity");
  sim_cmd->add_option("--frs", sim.n_frs, "number of FRS models");
  sim_cmd->add_option("--alpha", sim.alpha, "morphing factor in [0,1]");
  sim_cmd->add_option("--kind", sim_kind, "interpolation kind")
      ->check(CLI::IsMember({"lerp", "slerp"}));
  sim_cmd->add_option("--space", sim_space, "interpolation space")
      ->check(CLI::IsMember({"id", "latent"}));
  sim_cmd->add_option("--pairs", sim.n_pairs, "number of morph pairs");
  sim_cmd->add_option("--sigma", sim.probe_noise_sigma, "probe noise sigma");
  sim_cmd->add_option("--dim", sim.dim, "embedding dimension");
  sim_cmd->add_option("--proj-dim", sim.frs_proj_dim, "FRS projection dimension");
  sim_cmd->add_flag("--identity-surrogate", sim_identity_surrogate,
                    "use the identity map as the encoder surrogate");
  sim_cmd->add_flag("--baseline-unrelated", sim_baseline,
                    "replace morphs with unrelated third identities");
  sim_cmd->add_option("--out-scores", sim_out_scores, "output score CSV");
  sim_cmd->add_option("--out-cal", sim_out_cal, "output calibration CSV");

  // ablate
  auto* ablate_cmd =
      app.add_subcommand("ablate", "run the 4-way space x kind interpolation ablation");
  ablate_cmd->fallthrough();
  SimConfig abl;
  double abl_far = 0.001;
  std::string abl_out = "ablation.csv";
  bool abl_identity_surrogate = false;
  ablate_cmd->add_option("--identities", abl.n_identities, "identity count");
  ablate_cmd->add_option("--probes", abl.probes_per_identity, "probes per identity");
  ablate_cmd->add_option("--frs", abl.n_frs, "number of FRS models");
  ablate_cmd->add_option("--alpha", abl.alpha, "morphing factor in [0,1]");
  ablate_cmd->add_option("--pairs", abl.n_pairs, "number of morph pairs");
  ablate_cmd->add_option("--sigma", abl.probe_noise_sigma, "probe noise sigma");
  ablate_cmd->add_option("--dim", abl.dim, "embedding dimension");
  ablate_cmd->add_option("--proj-dim", abl.frs_proj_dim, "FRS projection dimension");
  ablate_cmd->add_option("--far", abl_far, "target false acceptance rate");
  ablate_cmd->add_flag("--identity-surrogate", abl_identity_surrogate,
                       "use the identity map as the encoder surrogate");
  ablate_cmd->add_option("--out", abl_out, "output CSV (space,kind,map_avg)");

  // interp
  auto* interp_cmd = app.add_subcommand("interp", "interpolate two vectors from a file");
  interp_cmd->fallthrough();
  std::string interp_file;
  double interp_alpha = 0.5;
  std::string interp_kind = "slerp";
  std::string interp_out;
  interp_cmd->add_option("--file", interp_file,
                         "text file, one whitespace-separated vector per line")
      ->required();
  interp_cmd->add_option("--alpha", interp_alpha, "morphing factor in [0,1]")->required();
  interp_cmd->add_option("--kind", interp_kind, "interpolation kind")
      ->check(CLI::IsMember({"lerp", "slerp"}));
  interp_cmd->add_option("--out", interp_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*calibrate_cmd) return cmd_calibrate(cal_scores, cal_far, cal_out);
    if (*map_cmd) return cmd_map(map_scores, map_thresholds, map_label, g);
    if (*curves_cmd) return cmd_curves(curves_inputs, g);
    if (*compare_cmd) return cmd_compare(compare_inputs);
    if (*sim_cmd) {
      sim.seed = g.seed;
      sim.interp_kind = interp_kind_from_string(sim_kind);
      sim.interp_space = interp_space_from_string(sim_space);
      sim.identity_surrogate = sim_identity_surrogate;
      sim.attack = sim_baseline ? AttackMode::UnrelatedIdentity : AttackMode::Morph;
      return cmd_simulate(sim, sim_out_scores, sim_out_cal);
    }
    if (*ablate_cmd) {
      abl.seed = g.seed;
      abl.identity_surrogate = abl_identity_surrogate;
      return cmd_ablate(abl, abl_far, abl_out);
    }
    if (*interp_cmd) return cmd_interp(interp_file, interp_alpha, interp_kind, interp_out);
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
