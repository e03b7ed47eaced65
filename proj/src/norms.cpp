#include "fracspec/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracspec/frac_ode.hpp"
#include "fracspec/special.hpp"

namespace fracspec {

namespace {

void check_compatible(const ModalPolynomials& a, const ModalPolynomials& b) {
  if (!a.basis || !b.basis) throw std::domain_error("norms: null basis");
  if (a.T != b.T) throw std::domain_error("norms: time horizons differ");
  if (a.leg.size() != b.leg.size())
    throw std::domain_error("norms: mode counts differ");
  if (a.basis != b.basis && a.basis->mesh.node != b.basis->mesh.node)
    throw std::domain_error("norms: solutions live on different meshes");
}

// Legendre L2 norm^2 of the coefficient difference of one mode.
double mode_l2_sq(const std::vector<double>& p, const std::vector<double>& q,
                  double T) {
  const std::size_t n = std::max(p.size(), q.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = (k < p.size() ? p[k] : 0.0) - (k < q.size() ? q[k] : 0.0);
    acc += d * d * T / (2.0 * static_cast<double>(k) + 1.0);
  }
  return acc;
}

std::vector<double> mode_diff(const std::vector<double>& p,
                              const std::vector<double>& q) {
  std::vector<double> d(std::max(p.size(), q.size()), 0.0);
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = (k < p.size() ? p[k] : 0.0) - (k < q.size() ? q[k] : 0.0);
  return d;
}

}  // namespace

ModalPolynomials modal_polynomials(const SpaceTimeSolution& sol) {
  ModalPolynomials table;
  table.basis = sol.basis;
  table.T = sol.T;
  table.leg.reserve(sol.modes.size());
  for (const ScalarSpectralSolution& mode : sol.modes)
    table.leg.push_back(mode.poly.coeff);
  return table;
}

ModalPolynomials modal_polynomials(const SemidiscreteSolution& sol,
                                   int degree) {
  if (degree < 0) throw std::domain_error("modal_polynomials: degree < 0");
  ModalPolynomials table;
  table.basis = sol.basis;
  table.T = sol.T;
  const JacobiWeight legendre{0.0, 0.0, sol.T};
  table.leg.reserve(sol.basis->n_modes());
  for (int n = 0; n < sol.basis->n_modes(); ++n) {
    auto y = [&sol, n](double t) { return sol.mode_value(n, t); };
    std::vector<double> a = weighted_pairings(y, 0.0, 0.0, legendre, degree);
    for (int k = 0; k <= degree; ++k)
      a[k] /= jacobi_norm_sq(k, legendre);
    table.leg.push_back(std::move(a));
  }
  return table;
}

double modal_l2_sq(const ModalPolynomials& a, const ModalPolynomials& b) {
  check_compatible(a, b);
  double acc = 0.0;
  for (std::size_t n = 0; n < a.leg.size(); ++n)
    acc += mode_l2_sq(a.leg[n], b.leg[n], a.T);
  return acc;
}

double frac_seminorm_sq(const ModalPolynomials& a, const ModalPolynomials& b,
                        double alpha) {
  check_compatible(a, b);
  int degree = 0;
  for (std::size_t n = 0; n < a.leg.size(); ++n)
    degree = std::max(degree,
                      static_cast<int>(std::max(a.leg[n].size(),
                                                b.leg[n].size())) -
                          1);
  const auto fp = shared_frac_pairing(alpha, a.T, degree);
  const double sec = 1.0 / std::cos(alpha * std::numbers::pi / 2.0);
  double acc = 0.0;
  for (std::size_t n = 0; n < a.leg.size(); ++n) {
    const std::vector<double> d = mode_diff(a.leg[n], b.leg[n]);
    acc += sec * fp->pair(d, d);
  }
  return acc;
}

double err_l2h1(const ModalPolynomials& a, const ModalPolynomials& b) {
  check_compatible(a, b);
  double acc = 0.0;
  for (std::size_t n = 0; n < a.leg.size(); ++n)
    acc += a.basis->values[static_cast<int>(n)] *
           mode_l2_sq(a.leg[n], b.leg[n], a.T);
  return std::sqrt(acc);
}

double err_halpha_l2(const ModalPolynomials& a, const ModalPolynomials& b,
                     double alpha) {
  return std::sqrt(modal_l2_sq(a, b) + frac_seminorm_sq(a, b, alpha));
}

double xnorm_err(const ModalPolynomials& a, const ModalPolynomials& b,
                 double alpha) {
  const double e1 = err_l2h1(a, b);
  return std::sqrt(e1 * e1 + frac_seminorm_sq(a, b, alpha));
}

double besov_norm(const Expansion& e, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("besov_norm: gamma < 0");
  double acc = 0.0;
  for (std::size_t k = 0; k < e.coeff.size(); ++k) {
    const double xi = jacobi_norm_sq(static_cast<int>(k), e.w);
    const double weight =
        1.0 + std::pow(static_cast<double>(k), 2.0 * gamma);
    acc += weight * xi * e.coeff[k] * e.coeff[k];
  }
  return std::sqrt(acc);
}

double decay_fit(const std::vector<double>& coeff, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min + 8 ||
      k_max >= static_cast<int>(coeff.size()))
    throw std::domain_error("decay_fit: bad index window");
  std::vector<double> ks, vs;
  for (int k = k_min; k <= k_max; ++k)
    if (coeff[k] != 0.0) {
      ks.push_back(static_cast<double>(k));
      vs.push_back(std::fabs(coeff[k]));
    }
  if (ks.size() < 5) throw fit_error("decay_fit: too few nonzero entries");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double lx = std::log(ks[i]), ly = std::log(vs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(ks.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RateFit rate_fit(const std::vector<double>& m, const std::vector<double>& err,
                 double floor) {
  if (m.size() != err.size())
    throw std::domain_error("rate_fit: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0)) throw std::domain_error("rate_fit: nonpositive M");
    if (!std::isfinite(err[i]) || err[i] <= floor) continue;
    lx.push_back(std::log(m[i]));
    ly.push_back(std::log(err[i]));
  }
  if (lx.size() < 4) throw fit_error("rate_fit: fewer than 4 usable points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  fit.used = static_cast<int>(lx.size());
  return fit;
}

}  // namespace fracspec
