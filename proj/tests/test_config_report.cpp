#include "acx/config.hpp"
#include "acx/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace acx;

namespace {

ordered_json base() {
  return ordered_json::parse(R"({"dimension": 2, "structure": {"family": "radial_h", "epsilon": 0.1, "rho0": 0.3, "delta": 0.2},
                                 "grid": {"radii": 32, "angles": 0, "degree": 24}, "seed": 3})");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, ParsesAndNormalizes) {
  const RunConfig c = parse_config(base());
  EXPECT_EQ(c.structure.family, Family::radial_h);
  EXPECT_EQ(c.grid.degree, 24);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_DOUBLE_EQ(c.tolerances.interior, 1e-5);
  const RunConfig again = parse_config(to_json(c));
  EXPECT_EQ(dump_fixed(to_json(again)), dump_fixed(to_json(c)));
}

TEST(Config, RejectsBadValues) {
  const auto bad = [](const char* path, const ordered_json& v) {
    ordered_json j = base();
    j[ordered_json::json_pointer(path)] = v;
    return j;
  };
  EXPECT_THROW(parse_config(bad("/dimension", 3)), ConfigError);
  EXPECT_THROW(parse_config(bad("/structure/family", "hyperbolic")), ConfigError);
  EXPECT_THROW(parse_config(bad("/structure/rho0", 0.9)), ConfigError);
  EXPECT_THROW(parse_config(bad("/structure/epsilon", "large")), ConfigError);
  EXPECT_THROW(parse_config(bad("/grid/degree", 4)), ConfigError);
  EXPECT_THROW(parse_config(bad("/grid/angles", 20)), ConfigError);
  EXPECT_THROW(parse_config(bad("/grid/radii", 3)), ConfigError);
  EXPECT_THROW(parse_config(bad("/tolerances", ordered_json{{"psh", -1.0}})), ConfigError);
  EXPECT_THROW(parse_config(bad("/probes", ordered_json{{"rho_max", 1.0}})), ConfigError);
  EXPECT_THROW(parse_config(bad("/grid", 5)), ConfigError);
  EXPECT_THROW(parse_config(ordered_json::array()), ConfigError);
  EXPECT_THROW(parse_config(bad("/structure", ordered_json{{"family", "custom"}})), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, CustomGridFromSamples) {
  const RunConfig c = load_config(std::filesystem::path(ACX_SAMPLES_DIR) / "custom.json");
  ASSERT_EQ(c.structure.family, Family::custom);
  const DeformationTensor phi = make_deformation(c);
  const DeformationTensor ref = DeformationTensor::bump();
  // The grid samples the bump coefficient, so the interpolant tracks it.
  for (const Vec4& x : probe_points(1, 20, 0.2, 0.8)) {
    const auto a = phi.coefficients<double>({x(0), x(1), x(2), x(3)});
    const auto b = ref.coefficients<double>({x(0), x(1), x(2), x(3)});
    EXPECT_NEAR(a.c.re, b.c.re, 5e-3);
    EXPECT_NEAR(a.c.im, b.c.im, 5e-3);
  }
}

TEST(Config, CoefficientFileErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "acx_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "short.json") << R"({"n": 4, "c": [1, 2, 3]})";
  std::ofstream(dir / "tiny.json") << R"({"n": 2})";
  std::ofstream(dir / "text.json") << "not json";
  EXPECT_THROW(load_coefficient_grid(dir / "short.json"), ConfigError);
  EXPECT_THROW(load_coefficient_grid(dir / "tiny.json"), ConfigError);
  EXPECT_THROW(load_coefficient_grid(dir / "text.json"), ConfigError);
}

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1"), cd(1.0, 0.0));
  EXPECT_EQ(parse_complex("2i"), cd(0.0, 2.0));
  EXPECT_EQ(parse_complex("-i"), cd(0.0, -1.0));
  EXPECT_EQ(parse_complex("0.6+0.2i"), cd(0.6, 0.2));
  EXPECT_EQ(parse_complex("1e-3-4.5e-2i"), cd(1e-3, -4.5e-2));
  EXPECT_EQ(parse_complex(" 0.5 - i "), cd(0.5, -1.0));
  EXPECT_THROW(parse_complex("abc"), ConfigError);
  EXPECT_THROW(parse_complex(""), ConfigError);
  EXPECT_EQ(parse_complex_vector("0,1"), CVec2(0.0, 1.0));
  EXPECT_THROW(parse_complex_vector("1,2,3"), ConfigError);
}

TEST(Report, HashIsDeterministicAndSensitive) {
  const RunConfig a = parse_config(base());
  EXPECT_EQ(config_hash(a), config_hash(parse_config(base())));
  RunConfig b = a;
  b.seed = 4;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).rfind("fnv1a64:", 0), 0u);
}

TEST(Report, DumpsAreByteIdentical) {
  const RunConfig c = parse_config(base());
  const auto make = [&] {
    Report r("check-structure", c);
    r.check("a", "tag", 1e-12, 1e-10);
    r.check_at_least("b", "tag", 0.5, 1.0);
    r.info("c", "tag", std::nan(""));
    r.row(Vec4(0.1, 0.2, 0.3, 0.4), "q", 1.0 / 3.0, 1e-3, true);
    r.data()["k"] = ordered_json::array({1, 2, 3});
    return r;
  };
  const Report r1 = make(), r2 = make();
  EXPECT_EQ(dump_fixed(r1.to_json()), dump_fixed(r2.to_json()));
  EXPECT_FALSE(r1.all_pass());
  EXPECT_EQ(r1.to_json()["status"], "fail");
  EXPECT_NE(dump_fixed(r1.to_json()).find("null"), std::string::npos);
  const std::string csv = r1.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x1,y1,x2,y2,quantity,value,tolerance,pass");
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "acx_report_test";
  r1.write(dir / "one");
  r2.write(dir / "two");
  EXPECT_EQ(slurp(dir / "one" / "check-structure.json"), slurp(dir / "two" / "check-structure.json"));
  EXPECT_EQ(slurp(dir / "one" / "check-structure.csv"), slurp(dir / "two" / "check-structure.csv"));
}

TEST(Report, ErrorStatus) {
  Report r("solve-stationary", ordered_json(nullptr));
  r.error("config", "bad");
  EXPECT_EQ(r.to_json()["status"], "error");
  EXPECT_TRUE(r.to_json()["config_hash"].is_null());
  EXPECT_FALSE(r.all_pass());
}

TEST(Threads, HintIsClamped) {
  setenv("ACX_THREADS", "500", 1);
  EXPECT_EQ(thread_hint(), 64);
  setenv("ACX_THREADS", "x", 1);
  EXPECT_EQ(thread_hint(), 1);
  setenv("ACX_THREADS", "3", 1);
  EXPECT_EQ(thread_hint(), 3);
  unsetenv("ACX_THREADS");
  EXPECT_EQ(thread_hint(), 1);
}
