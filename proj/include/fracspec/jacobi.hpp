#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fracspec/quadrature.hpp"

namespace fracspec {

// Weight (T-t)^a t^b on (0,T), a,b > -1.  The associated orthogonal basis
// S_k is the Jacobi polynomial P_k^(a,b) pulled back from [-1,1] by
// x = 2t/T - 1, so S_k is orthogonal under this weight without any
// renormalisation.
struct JacobiWeight {
  double a = 0.0;
  double b = 0.0;
  double T = 1.0;
};

void check_weight(const JacobiWeight& w);

double jacobi_eval(int k, const JacobiWeight& w, double t);

// S_0(t) .. S_kmax(t) by the degree recurrence; one pass, stable for
// a,b > -1.
std::vector<double> jacobi_eval_all(int k_max, const JacobiWeight& w, double t);

// ||S_k||^2 under the weight.
double jacobi_norm_sq(int k, const JacobiWeight& w);

// integral of the bare weight; equals jacobi_norm_sq(0, w)
double weight_mass(const JacobiWeight& w);

// n-point Gauss rule for the weight, exact through degree 2n-1.
QuadGrid gauss_jacobi(int n, const JacobiWeight& w);

struct Expansion {
  JacobiWeight w;
  std::vector<double> coeff;  // coeff[k] multiplies S_k

  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  double eval(double t) const;
};

// Orthogonal projection of f onto polynomials of the given degree under w.
// rule_points = -1 picks degree + 40 Gauss points, enough for smooth f;
// non-smooth f should be handled via weighted_pairings instead.
Expansion project(const std::function<double(double)>& f, int degree,
                  const JacobiWeight& w, int rule_points = -1);

// C(k,j) expresses S_j^{from} = sum_k C(k,j) S_k^{to}; upper triangular.
// Both weights must share T.
Eigen::MatrixXd connection_matrix(int degree, const JacobiWeight& from,
                                  const JacobiWeight& to);

// <y, S_k>_w for k = 0..k_max where y(t) = t^s0 (T-t)^s1 g(t) with smooth g.
// The algebraic factors of y and of the weight are folded into the rule, so
// endpoint singularities cost nothing in accuracy.
std::vector<double> weighted_pairings(const std::function<double(double)>& g,
                                      double s0, double s1,
                                      const JacobiWeight& w, int k_max);

// Image of a polynomial under a one-sided fractional derivative or
// integral: an algebraic endpoint factor times another Jacobi expansion.
struct WeightedFracImage {
  bool factor_at_origin = true;  // factor t^p, else (T-t)^p
  double p = 0.0;
  Expansion poly;

  double eval(double t) const;
};

// Left derivative needs u in a basis S^{a,0}; right derivative needs
// S^{0,b}.  Same for the integrals, which additionally need a - theta > -1
// (resp. b - theta > -1) so the image basis stays admissible.
WeightedFracImage frac_deriv_map(const Expansion& u, double theta,
                                 bool from_left);
WeightedFracImage frac_integral_map(const Expansion& u, double theta,
                                    bool from_left);

// Evaluates <D^{alpha/2}_{0+} p, D^{alpha/2}_{T-} q> for polynomials given
// by Legendre coefficients on (0,T).  The two connection matrices and the
// diagonal are built once at a fixed maximal degree; leading blocks are
// consistent across degrees, so one cached instance serves all smaller
// problems.
class FracPairing {
 public:
  FracPairing(double alpha, double T, int degree);

  double alpha() const { return alpha_; }
  double time_horizon() const { return T_; }
  int degree() const { return degree_; }

  double pair(const std::vector<double>& p_leg,
              const std::vector<double>& q_leg) const;

  // Galerkin block: matrix(m)(i,j) = pair(e_j, e_i), sizes (m+1)^2
  Eigen::MatrixXd matrix(int m) const;
  const Eigen::MatrixXd& matrix() const { return F_; }

 private:
  double alpha_;
  double T_;
  int degree_;
  Eigen::MatrixXd F_;
};

}  // namespace fracspec
