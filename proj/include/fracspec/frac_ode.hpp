#pragma once
#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "fracspec/jacobi.hpp"

namespace fracspec {

// One forcing contribution  scale * t^sigma * factor(t)  with smooth factor;
// a null factor means the constant 1.  sigma > -1.
struct ForcingTerm {
  double sigma = 0.0;
  double scale = 1.0;
  std::function<double(double)> factor;
};

struct Forcing {
  std::vector<ForcingTerm> terms;
};

// D^alpha (y - y0) + lambda y = g  on (0,T),  y(0) = y0.
struct ScalarProblem {
  double alpha = 0.5;
  double lambda = 0.0;
  double y0 = 0.0;
  double T = 1.0;
  Forcing g;
};

struct ScalarSpectralSolution {
  double y0 = 0.0;
  Expansion poly;  // Legendre expansion of the full state y_M

  double eval(double t) const { return poly.eval(t); }
  int degree() const { return poly.degree(); }
};

// Process-wide cache of pairing tables keyed by (alpha, T).  A request
// larger than the cached degree rebuilds; smaller requests reuse the table,
// which is safe because leading blocks are degree independent.
std::shared_ptr<const FracPairing> shared_frac_pairing(double alpha, double T,
                                                       int degree);

// Galerkin matrix F + lambda * diag(T/(2i+1)) of size (m+1)^2.
Eigen::MatrixXd assemble(const FracPairing& fp, double lambda, int m);

// b_i = <g, L_i> - lambda*y0*T*delta_{i0}
Eigen::VectorXd rhs_vector(const ScalarProblem& p, int m);

// relative residual |A c - b|_inf / (1 + |b|_inf)
double residual_check(const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& b);

ScalarSpectralSolution solve(const ScalarProblem& p, int degree);

}  // namespace fracspec
