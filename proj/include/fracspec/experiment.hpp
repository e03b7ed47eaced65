#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/norms.hpp"
#include "fracspec/spacetime.hpp"

namespace fracspec {

// The convergence studies and diagnostics the command line exposes.
//   ode:          scalar relaxation, error against the exact kernel
//   example51:    manufactured solution t^beta sin(pi x)
//   example52:    pure initial data, smooth (theta = 0) or boundary-singular
//                 x (1-x)^{gamma - 1/2} (theta = 1), or any mix
//   example53:    constant-in-time source x^{gamma - 1/2} (1 - x)
//   ml_eval:      tabulate the relaxation kernel E_{alpha,beta}(-t)
//   besov_report: coefficient-pairing decay of E_{alpha,1}(-t^alpha)
enum class ExperimentKind { ode, example51, example52, example53, ml_eval, besov_report };

std::string kind_name(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ode;
  std::vector<double> alphas = {0.3, 0.5, 0.7};
  double beta = 0.75;    // solution exponent (example51)
  double gamma = 0.5;    // data exponent (example52 with theta > 0, example53)
  double theta = 0.0;    // initial-data mix (example52)
  double lambda = 1.0;   // decay coefficient (ode)
  double y0 = 1.0;       // initial value (ode)
  std::vector<int> degrees = {8, 12, 16, 24, 32, 48, 64};
  int h_exponent = 10;   // 2^h_exponent cells on (0,1); spatial kinds only
  std::string reference = "numerical";  // "numerical" or "ml-exact"
  std::vector<double> times = {1.0};    // evaluation points (ml_eval)
  double ml_index = 1.0;                // second kernel index (ml_eval)
  std::string out_dir;   // empty: compute only, write nothing
};

// Usage-level checks: parameter windows of the studies, list shape, the
// reference staying clear of the swept degrees.  Throws
// std::invalid_argument; exit code 2 territory in the CLI.
void validate(const ExperimentConfig& config);

// Sharp rate exponents the theory predicts for one (alpha, parameters)
// series; unset where no sharp statement applies (outside the observed
// windows, or mixed data).  E2 of the ode kind is reported but not
// asserted: the L2 criterion is the one its figure pins down.
struct RatePrediction {
  std::optional<double> e1, e2;
};

RatePrediction predicted_rates(const ExperimentConfig& config, double alpha);

// The discrete problem a spatial study solves at one alpha: initial data
// and forcing of the configured example on (0,1) x (0,1].  Exposed so a
// single solve (CLI pde-solve) poses exactly the problem the sweeps do.
// Scalar and diagnostic kinds have no spatial problem.
ProblemSpec example_problem(const ExperimentConfig& config, double alpha);

struct ErrorRow {
  int degree = 0;      // spectral degree M (coefficient index k for besov)
  double h = 0.0;      // mesh width; 0 where no spatial grid is involved
  double alpha = 0.0;
  double param = 0.0;  // beta / gamma / lambda, per kind
  double e1 = 0.0;
  double e2 = 0.0;
};

struct SeriesResult {
  std::string label;  // file stem, e.g. "example52_alpha0.4_gamma0.5_theta1"
  double alpha = 0.0;
  double param = 0.0;
  std::vector<ErrorRow> rows;
  std::optional<RateFit> fit_e1, fit_e2;
  std::optional<double> predicted_e1, predicted_e2;
  bool assert_e1 = false, assert_e2 = false;
};

struct ExperimentResult {
  std::vector<SeriesResult> series;
  std::vector<std::string> files;  // paths written, in emission order
  std::string summary;             // fitted vs predicted table

  // True when every asserted fit lands within tol of its prediction.
  bool pass(double tol) const;
};

ExperimentResult run(const ExperimentConfig& config);

// Projection tails of y(t) = t^sigma g(t) under the (-alpha, 0) weight on
// (0, T): the weighted-L2 and temporal-seminorm sizes of y minus its
// degree-M weighted projection, for each M in degrees.  Everything comes
// from the dual coefficient pairing tables up to k_max, so k_max should
// sit a few multiples above max(degrees); null g means 1.
struct TailTable {
  std::vector<int> degrees;
  std::vector<double> l2w;       // ||(I - P_M) y||_{L2, (T-t)^{-alpha}}
  std::vector<double> seminorm;  // |(I - P_M) y|_{H^{alpha/2}(0,T)}
};

TailTable projection_tails(double alpha, double T, double sigma,
                           const std::function<double(double)>& g,
                           const std::vector<int>& degrees, int k_max = 256);

}  // namespace fracspec
