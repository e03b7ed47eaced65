#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fracspec/experiment.hpp"
#include "fracspec/special.hpp"

using namespace fracspec;

namespace {

ExperimentConfig base(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.alphas = {0.5};
  c.degrees = {4, 8};
  c.h_exponent = 3;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("kind names round-trip") {
  for (ExperimentKind k :
       {ExperimentKind::ode, ExperimentKind::example51,
        ExperimentKind::example52, ExperimentKind::example53,
        ExperimentKind::ml_eval, ExperimentKind::besov_report})
    CHECK(parse_kind(kind_name(k)) == k);
  CHECK_THROWS_AS((void)parse_kind("example54"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_kind(""), std::invalid_argument);
}

TEST_CASE("configuration windows are enforced") {
  // Alpha list shape applies to every kind.
  auto c = base(ExperimentKind::ode);
  c.alphas.clear();
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.alphas = {1.0};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.alphas = {0.5, -0.1};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  // Degree list: ascending, >= 1, clear of the reference.
  c = base(ExperimentKind::ode);
  c.degrees = {8, 8, 16};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.degrees = {};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.degrees = {0, 4};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.degrees = {8, 191};  // exact-kernel comparison projects into degree 200
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.degrees = {8, 190};
  CHECK_NOTHROW(validate(c));
  c.lambda = -1.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  // Spatial studies: mesh window, reference name, tighter degree ceiling.
  c = base(ExperimentKind::example52);
  c.h_exponent = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.h_exponent = 15;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = base(ExperimentKind::example52);
  c.reference = "exact";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = base(ExperimentKind::example52);
  c.degrees = {8, 141};  // numerical reference solves at degree 150
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.degrees = {8, 140};
  CHECK_NOTHROW(validate(c));

  // Manufactured solution: beta window, no exact kernel available.
  c = base(ExperimentKind::example51);
  c.beta = -0.25;  // needs beta > (alpha-1)/2 strictly
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.beta = -0.2;
  CHECK_NOTHROW(validate(c));
  c.reference = "ml-exact";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  // Initial-data study: mix weight and gamma window.
  c = base(ExperimentKind::example52);
  c.theta = -0.1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.theta = 1.1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.theta = 1.0;
  c.gamma = 2.5;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.gamma = -0.7;  // fine at alpha = 0.5 (bound -1), out at 0.6 (bound -2/3)
  CHECK_NOTHROW(validate(c));
  c.alphas = {0.6};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  // Source study: open gamma interval.
  c = base(ExperimentKind::example53);
  c.gamma = 1.5;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.gamma = -0.5;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.gamma = 1.4;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("predicted exponents follow the data windows") {
  auto c = base(ExperimentKind::ode);
  RatePrediction r = predicted_rates(c, 0.5);
  CHECK(r.e1.value() == doctest::Approx(-2.0));
  CHECK(r.e2.value() == doctest::Approx(-1.5));

  c = base(ExperimentKind::example51);
  c.beta = 0.75;
  r = predicted_rates(c, 0.3);
  CHECK(r.e1.value() == doctest::Approx(-2.5));
  CHECK(r.e2.value() == doctest::Approx(-2.2));

  c = base(ExperimentKind::example52);
  c.theta = 0.0;
  r = predicted_rates(c, 0.4);
  CHECK(r.e1.value() == doctest::Approx(-1.8));
  CHECK(r.e2.value() == doctest::Approx(-1.4));

  // Singular data: E2 statement stops at gamma = 2, E1 carries on.
  c.theta = 1.0;
  c.gamma = 2.2;
  r = predicted_rates(c, 0.5);
  CHECK(r.e1.value() == doctest::Approx(-1.6));
  CHECK(!r.e2);

  // ... and below gamma = -0.1 only E1 is pinned down.
  c.gamma = -0.3;
  r = predicted_rates(c, 0.5);
  CHECK(r.e1.value() == doctest::Approx(-0.35));
  CHECK(!r.e2);

  // A mix decays like its slower component.
  c.theta = 0.5;
  c.gamma = 0.5;
  r = predicted_rates(c, 0.5);
  CHECK(r.e1.value() == doctest::Approx(-0.75));
  CHECK(r.e2.value() == doctest::Approx(-0.75));

  // Source study saturates at gamma = 1 (E1) and gamma = 0 (E2).
  c = base(ExperimentKind::example53);
  c.gamma = 1.2;
  r = predicted_rates(c, 0.5);
  CHECK(r.e1.value() == doctest::Approx(-2.0));
  CHECK(r.e2.value() == doctest::Approx(-1.5));
  c.gamma = -0.2;
  r = predicted_rates(c, 0.5);
  CHECK(r.e1.value() == doctest::Approx(-1.4));
  CHECK(r.e2.value() == doctest::Approx(-1.4));

  r = predicted_rates(base(ExperimentKind::besov_report), 0.7);
  CHECK(r.e1.value() == doctest::Approx(-3.4));
  CHECK(!r.e2);

  r = predicted_rates(base(ExperimentKind::ml_eval), 0.5);
  CHECK(!r.e1);
  CHECK(!r.e2);
}

TEST_CASE("scalar study reproduces the sharp rate") {
  auto c = base(ExperimentKind::ode);
  c.degrees = {8, 12, 16, 24, 32, 48, 64};
  const ExperimentResult res = run(c);
  REQUIRE(res.series.size() == 1);
  const SeriesResult& s = res.series[0];
  CHECK(s.label == "ode_alpha0.5_lambda1");
  REQUIRE(s.rows.size() == c.degrees.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(s.rows[i].h == 0.0);  // no spatial grid in the scalar study
    if (i > 0) CHECK(s.rows[i].e1 < s.rows[i - 1].e1);
  }
  REQUIRE(s.fit_e1.has_value());
  CHECK(s.assert_e1);
  CHECK(!s.assert_e2);  // the L2(0,T) criterion is the asserted one
  CHECK(std::fabs(s.fit_e1->slope - (-2.0)) < 0.25);
  CHECK(res.pass(0.25));
  CHECK(res.files.empty());
  CHECK(res.summary.find("ode_alpha0.5") != std::string::npos);
}

TEST_CASE("written files are byte-identical across runs") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path();
  const fs::path dir_a = root / "fracspec_exp_a";
  const fs::path dir_b = root / "fracspec_exp_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  auto c = base(ExperimentKind::ode);
  c.degrees = {8, 12, 16, 24};
  c.out_dir = dir_a.string();
  const ExperimentResult first = run(c);
  c.out_dir = dir_b.string();
  const ExperimentResult second = run(c);

  REQUIRE(first.files.size() == 3);  // series .csv + .dat, then summary.txt
  REQUIRE(second.files.size() == first.files.size());
  for (std::size_t i = 0; i < first.files.size(); ++i) {
    const std::string a = slurp(first.files[i]);
    CHECK(a == slurp(second.files[i]));
    CHECK(!a.empty());
  }

  const std::string csv = slurp(dir_a / "ode_alpha0.5_lambda1.csv");
  CHECK(csv.rfind("M,h,alpha,param,E1,E2\n", 0) == 0);
  // Header plus one row per degree.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4);
  const std::string dat = slurp(dir_a / "ode_alpha0.5_lambda1.dat");
  CHECK(dat.rfind("# M h alpha param E1 E2\n", 0) == 0);

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("spatial study smoke run") {
  auto c = base(ExperimentKind::example53);
  c.gamma = 0.5;
  c.h_exponent = 4;
  c.degrees = {16, 24, 32, 48, 64, 96};
  const ExperimentResult res = run(c);
  REQUIRE(res.series.size() == 1);
  const SeriesResult& s = res.series[0];
  REQUIRE(s.rows.size() == c.degrees.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(s.rows[i].h == doctest::Approx(1.0 / 16.0));
    CHECK(s.rows[i].param == doctest::Approx(0.5));
    if (i > 0) CHECK(s.rows[i].e1 < s.rows[i - 1].e1);
  }
  // Against the shared-mesh reference the temporal rate shows even on a
  // coarse mesh; -(1 + 3*alpha/2) = -1.75 for gamma = 1/2.  The onset is
  // slow, so the window starts at 16.
  REQUIRE(s.fit_e1.has_value());
  CHECK(std::fabs(s.fit_e1->slope - (-1.75)) < 0.35);
}

TEST_CASE("kernel tabulation matches the evaluator") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fracspec_exp_ml";
  fs::remove_all(dir);

  auto c = base(ExperimentKind::ml_eval);
  c.alphas = {0.4, 0.8};
  c.times = {0.5, 2.0, 75.0};  // one argument per evaluation path
  c.ml_index = 0.75;
  c.out_dir = dir.string();
  const ExperimentResult res = run(c);

  char line[160];
  for (double alpha : c.alphas)
    for (double t : c.times) {
      std::snprintf(line, sizeof line, "E_{%g,%g}(-%g) = %.15g", alpha,
                    c.ml_index, t, mittag_leffler(alpha, c.ml_index, t));
      CHECK(res.summary.find(line) != std::string::npos);
    }
  REQUIRE(res.files.size() == 1);
  const std::string csv = slurp(res.files[0]);
  CHECK(csv.rfind("alpha,beta,t,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6);

  fs::remove_all(dir);
}

TEST_CASE("coefficient decay report") {
  auto c = base(ExperimentKind::besov_report);
  const ExperimentResult res = run(c);
  REQUIRE(res.series.size() == 1);
  const SeriesResult& s = res.series[0];
  CHECK(s.rows.size() >= 61);  // covers the fitted window k in [10, 60]
  CHECK(s.rows[0].degree == 0);
  REQUIRE(s.fit_e1.has_value());
  CHECK(s.assert_e1);
  CHECK(std::fabs(s.fit_e1->slope - (-3.0)) < 0.25);
  CHECK(res.pass(0.25));
}

TEST_CASE("projection tails of the model kernels") {
  const std::vector<int> degrees = {8, 12, 16, 24, 32};

  // Pure power t^(3/4): only the weighted-L2 tail has a sharp slope here.
  TailTable pw = projection_tails(0.5, 1.0, 0.75, nullptr, degrees, 128);
  REQUIRE(pw.degrees == degrees);
  REQUIRE(pw.l2w.size() == degrees.size());
  std::vector<double> m(degrees.begin(), degrees.end());
  CHECK(std::fabs(rate_fit(m, pw.l2w).slope - (-2.5)) < 0.3);

  // Relaxation kernel at lambda = 1: tails decay at the solution rates.
  auto kernel = [](double t) {
    return mittag_leffler(0.5, 1.0, std::sqrt(t));
  };
  TailTable hom = projection_tails(0.5, 1.0, 0.0, kernel, degrees, 128);
  CHECK(std::fabs(rate_fit(m, hom.l2w).slope - (-2.0)) < 0.3);
  CHECK(std::fabs(rate_fit(m, hom.seminorm).slope - (-1.5)) < 0.3);
  for (std::size_t i = 0; i < degrees.size(); ++i)
    CHECK(hom.seminorm[i] > hom.l2w[i]);  // seminorm tail decays slower

  CHECK_THROWS_AS((void)projection_tails(1.0, 1.0, 0.0, nullptr, degrees, 128),
                  std::domain_error);
  CHECK_THROWS_AS((void)projection_tails(0.5, 0.0, 0.0, nullptr, degrees, 128),
                  std::domain_error);
  CHECK_THROWS_AS((void)projection_tails(0.5, 1.0, -0.5, nullptr, degrees, 128),
                  std::domain_error);
  CHECK_THROWS_AS((void)projection_tails(0.5, 1.0, 0.0, nullptr, degrees, 63),
                  std::domain_error);
  CHECK_THROWS_AS((void)projection_tails(0.5, 1.0, 0.0, nullptr, {8, 8}, 128),
                  std::domain_error);
  CHECK_THROWS_AS((void)projection_tails(0.5, 1.0, 0.0, nullptr, {}, 128),
                  std::domain_error);
}

TEST_CASE("pass reflects the asserted fits only") {
  ExperimentResult res;
  SeriesResult s;
  s.assert_e1 = true;
  s.predicted_e1 = -2.0;
  RateFit fit;
  fit.slope = -2.1;
  s.fit_e1 = fit;
  res.series.push_back(s);
  CHECK(res.pass(0.15));
  CHECK(!res.pass(0.05));

  // A missing fit fails an asserted series outright.
  res.series[0].fit_e1 = std::nullopt;
  CHECK(!res.pass(0.15));

  // Unasserted or unpredicted slopes never gate the result.
  res.series[0].assert_e1 = false;
  CHECK(res.pass(0.15));
  res.series[0].assert_e1 = true;
  res.series[0].fit_e1 = fit;
  res.series[0].predicted_e1 = std::nullopt;
  CHECK(res.pass(0.0));
}
