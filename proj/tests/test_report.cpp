#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "mapeval/report.hpp"

using namespace mapeval;

namespace {

ReportBundle bundle_1x3(const std::string& label, std::vector<double> row,
                        int morph_count = 1000) {
  MapMatrix m;
  m.r_max = 1;
  m.c_max = static_cast<int>(row.size());
  m.morph_count = morph_count;
  m.values = std::move(row);
  BundleMeta meta;
  meta.label = label;
  return make_report_bundle(std::move(m), std::move(meta));
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("bundle derives curves and MAP_Avg from the matrix") {
  MapMatrix m;
  m.r_max = 2;
  m.c_max = 2;
  m.morph_count = 5;
  m.values = {100.0, 80.0, 60.0, 20.0};
  const auto b = make_report_bundle(m, BundleMeta{});
  REQUIRE(b.curves.robustness.size() == 2);
  REQUIRE(b.map_avg == map_avg(m));
  REQUIRE(b.curves.robustness[0] == curves(m).robustness[0]);
}

TEST_CASE("summary JSON round-trips through read_summary_json") {
  const auto b = bundle_1x3("algo", {97.9, 91.7, 74.0});
  std::ostringstream os;
  write_summary_json(b, os);
  std::istringstream in(os.str());
  const auto b2 = read_summary_json(in);
  REQUIRE(b2.meta.label == "algo");
  REQUIRE(b2.matrix.values == b.matrix.values);
  REQUIRE(b2.matrix.morph_count == 1000);
  REQUIRE(b2.map_avg == b.map_avg);
  REQUIRE(b2.curves.robustness == b.curves.robustness);

  std::ostringstream os2;
  write_summary_json(b2, os2);
  REQUIRE(os2.str() == os.str());
}

TEST_CASE("summary JSON rejects malformed documents") {
  for (const std::string bad : {
           "junk",
           R"({"label":"x"})",
           R"({"label":"x","r_max":1,"c_max":2,"morph_count":3,"matrix":[[1]]})",
           R"({"label":"x","r_max":1,"c_max":1,"morph_count":3,"matrix":[[101]]})",
           R"({"label":"x","r_max":0,"c_max":1,"morph_count":3,"matrix":[]})",
       }) {
    std::istringstream in(bad);
    REQUIRE_THROWS_AS(read_summary_json(in), ParseError);
  }
}

TEST_CASE("matrix tables print one decimal") {
  MapMatrix m;
  m.r_max = 1;
  m.c_max = 1;
  m.morph_count = 1;
  m.values = {100.0};
  const std::string text = render_matrix_text(m);
  REQUIRE(text.find("100.0") != std::string::npos);
  const std::string md = render_matrix_markdown(m);
  REQUIRE(md.find("| 100.0 |") != std::string::npos);
}

TEST_CASE("compare marks the dominating algorithm in every column") {
  const auto a = bundle_1x3("C01", {97.9, 91.7, 74.0});
  const auto b = bundle_1x3("Arc2Morph", {99.9, 99.7, 98.7});
  const std::string table = render_compare_markdown({a, b});
  REQUIRE(table.find("| C01 | 97.9 | 91.7 | 74.0 |") != std::string::npos);
  REQUIRE(table.find("**99.9**") != std::string::npos);
  REQUIRE(table.find("**99.7**") != std::string::npos);
  REQUIRE(table.find("**98.7**") != std::string::npos);
  REQUIRE(count_occurrences(table, "**") == 8);  // 3 columns + MAP_Avg, open+close
}

TEST_CASE("compare marks all holders on ties") {
  const auto a = bundle_1x3("one", {50.0, 40.0});
  const auto b = bundle_1x3("two", {50.0, 40.0});
  const std::string table = render_compare_markdown({a, b});
  REQUIRE(count_occurrences(table, "**50.0**") == 2);
  REQUIRE(count_occurrences(table, "**40.0**") == 2);
}

TEST_CASE("compare rejects mismatched shapes, naming both") {
  const auto a = bundle_1x3("one", {50.0, 40.0});
  const auto b = bundle_1x3("two", {50.0, 40.0, 30.0});
  try {
    render_compare_markdown({a, b});
    FAIL("expected SemanticError");
  } catch (const SemanticError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("two") != std::string::npos);
    REQUIRE(msg.find("1x3") != std::string::npos);
    REQUIRE(msg.find("1x2") != std::string::npos);
  }
  REQUIRE_THROWS_AS(render_compare_markdown({a}), SemanticError);
}

TEST_CASE("1x1 bundle renders exactly one point marker per chart") {
  const auto b = bundle_1x3("solo", {75.0});
  const std::string svg = render_robustness_svg({b});
  REQUIRE(count_occurrences(svg, "<circle") == 1);
  REQUIRE(count_occurrences(svg, "<polyline") == 0);
  REQUIRE(svg.find("Robustness") != std::string::npos);
  REQUIRE(svg.find("MAP (%)") != std::string::npos);
}

TEST_CASE("two bundles render two polylines with legend in input order") {
  MapMatrix m;
  m.r_max = 3;
  m.c_max = 2;
  m.morph_count = 4;
  m.values = {100.0, 75.0, 75.0, 50.0, 50.0, 25.0};
  BundleMeta meta_a;
  meta_a.label = "first";
  BundleMeta meta_b;
  meta_b.label = "second";
  const auto a = make_report_bundle(m, meta_a);
  const auto b = make_report_bundle(m, meta_b);
  const std::string svg = render_robustness_svg({a, b});
  REQUIRE(count_occurrences(svg, "<polyline") == 2);
  REQUIRE(svg.find(">first<") != std::string::npos);
  REQUIRE(svg.find(">second<") != std::string::npos);
  REQUIRE(svg.find(">first<") < svg.find(">second<"));

  // deterministic output bytes
  REQUIRE(render_robustness_svg({a, b}) == svg);
  REQUIRE(render_generality_svg({a, b}) != svg);
}
