#pragma once
#include <memory>
#include <stdexcept>
#include <vector>

#include "fracspec/jacobi.hpp"
#include "fracspec/spacetime.hpp"

namespace fracspec {

// Raised when a least-squares fit has too few usable points.
struct fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-mode Legendre coefficient table of a modal solution: the common
// currency of the error norms.  Initial offsets are folded into coeff 0,
// so subtracting two tables entrywise subtracts the full states.
struct ModalPolynomials {
  std::shared_ptr<const ModalBasis> basis;
  double T = 1.0;
  std::vector<std::vector<double>> leg;
};

ModalPolynomials modal_polynomials(const SpaceTimeSolution& sol);

// ML-exact semidiscrete reference projected mode-by-mode into P_degree so
// the exact polynomial norm machinery applies to it too.
ModalPolynomials modal_polynomials(const SemidiscreteSolution& sol,
                                   int degree = 200);

// sum_n int_0^T (dy_n)^2 dt, exact through Legendre coefficient sums.
double modal_l2_sq(const ModalPolynomials& a, const ModalPolynomials& b);

// Temporal seminorm part: sec(alpha pi/2) sum_n <D^{a/2} dy_n, D^{a/2} dy_n>
// via the diagonal pairing identity; exact for polynomials.
double frac_seminorm_sq(const ModalPolynomials& a, const ModalPolynomials& b,
                        double alpha);

// E1 = ||.||_{L2(0,T; H1_0)} = sqrt(sum_n lam_n int (dy_n)^2)
double err_l2h1(const ModalPolynomials& a, const ModalPolynomials& b);

// E2 = ||.||_{H^{a/2}(0,T; L2)} as (L2 norm^2 + seminorm^2)^{1/2}.
double err_halpha_l2(const ModalPolynomials& a, const ModalPolynomials& b,
                     double alpha);

// Graph norm of the well-posedness space: (E1^2 + seminorm^2)^{1/2}.
double xnorm_err(const ModalPolynomials& a, const ModalPolynomials& b,
                 double alpha);

// sqrt(sum_k (1 + k^{2 gamma}) xi_k v_k^2) for an expansion under its own
// weight; gamma >= 0.
double besov_norm(const Expansion& e, double gamma);

// Least-squares slope of log|v_k| against log k over k_min..k_max,
// skipping zero entries; k_min >= 1.
double decay_fit(const std::vector<double>& coeff, int k_min, int k_max);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // in log space
  double residual = 0.0;   // rms log-space misfit
  int used = 0;            // points above the error floor
};

// Log-log fit of error against M; points at or below the floor are
// treated as reference-solution contamination and excluded.
RateFit rate_fit(const std::vector<double>& m, const std::vector<double>& err,
                 double floor = 1e-11);

}  // namespace fracspec
