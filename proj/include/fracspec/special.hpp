#pragma once

#include <stdexcept>

namespace fracspec {

// Thrown when an iterative evaluation cannot reach its accuracy target
// (series cancellation, quadrature refinement stall).
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gamma machinery.  Lanczos g = 607/128 with the Numerical Recipes 3rd-ed
// coefficient table; reflection below zero.  gamma_fn returns +inf past the
// double overflow line (z ~ 171.62) and throws at the poles z = 0, -1, ...
double gamma_fn(double z);
double log_gamma(double z);   // z > 0
double recip_gamma(double z); // entire 1/Gamma; exactly 0 at the poles

// sin(pi x), cos(pi x) with exact integer/half-integer reduction, so that
// e.g. sin_pi(k) == 0 exactly.  Needed wherever a factor sin((a-b)pi)
// multiplies large arguments and must vanish identically for integer a-b.
double sin_pi(double x);
double cos_pi(double x);

// Mittag-Leffler E_{alpha,beta}(-t) for t >= 0, alpha in (0,1].
//
// mittag_leffler_series sums the defining power series; it reports its own
// rounding-cancellation estimate via accuracy_error when the alternating
// terms grow too large for the working precision (happens for t
// substantially above 1; the dispatcher never sends such arguments here).
//
// mittag_leffler_integral evaluates the global integral representation
// (Gorenflo-Loutchko-Luchko form) valid for beta < 1, t > 0, via the
// substitution s = r^(1/alpha) and composite singularity-aware quadrature.
//
// mittag_leffler_asymptotic sums the reciprocal-power expansion
// sum_{k>=1} (-1)^(k+1) t^(-k) / Gamma(beta - alpha k); on the negative
// axis with alpha <= 1 the omitted remainder is O(t exp(-t^(1/alpha))),
// below working precision for t >= t_asymptotic.
//
// mittag_leffler dispatches: series below t_switch, reciprocal-power
// expansion above t_asymptotic, integral in between, with beta >= 1 first
// reduced by the shift identity E_{a,b}(z) = 1/Gamma(b) + z E_{a,b+a}(z).
inline constexpr double ml_t_switch = 1.0;
inline constexpr double ml_t_asymptotic = 50.0;

struct MlSeriesDetail {
    double value;
    double max_term;   // largest |term| encountered (cancellation measure)
    int terms;
};

MlSeriesDetail mittag_leffler_series_detail(double alpha, double beta,
                                            double t, double tol = 1e-15);
double mittag_leffler_series(double alpha, double beta, double t,
                             double tol = 1e-15);
double mittag_leffler_integral(double alpha, double beta, double t);
double mittag_leffler_asymptotic(double alpha, double beta, double t);
double mittag_leffler(double alpha, double beta, double t);

// Scalar fractional relaxation problem
//   D^alpha_{0+}(y - y0) + lambda y = g on (0,T).
struct ScalarOdeData {
    double alpha;   // (0,1); 1 accepted as the classical limit
    double lambda;  // >= 0
    double y0;
    double T;       // > 0
};

// g = 0:      y(t) = y0 E_{alpha,1}(-lambda t^alpha)
double exact_homogeneous(const ScalarOdeData& d, double t);
// y0 = 0, g = 1:  y(t) = t^alpha E_{alpha,alpha+1}(-lambda t^alpha)
double exact_constant_forcing(const ScalarOdeData& d, double t);
// k-th derivative of the homogeneous solution, t > 0, k >= 1:
//   y^(k)(t) = -lambda y0 t^(alpha-k) E_{alpha,alpha+1-k}(-lambda t^alpha)
double exact_homogeneous_deriv(int k, const ScalarOdeData& d, double t);

}  // namespace fracspec
