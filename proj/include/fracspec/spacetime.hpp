#pragma once
#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fracspec/fem1d.hpp"
#include "fracspec/frac_ode.hpp"

namespace fracspec {

// Spatial profile x^{s0} (1-x)^{s1} g(x) with smooth g (null g means 1).
// Covers every data shape in the experiment suite; plain smooth data is
// s0 = s1 = 0.
struct SpaceProfile {
  double s0 = 0.0;
  double s1 = 0.0;
  std::function<double(double)> g;

  double eval(double x) const;
};

// One separable source contribution  profile(x) * scale * t^sigma * factor(t).
struct SeparableTerm {
  SpaceProfile space;
  ForcingTerm time;
};

// D^alpha_{0+}(u - u0) - Lap u = f on (0,1) x (0,T), u = 0 on the boundary.
struct ProblemSpec {
  double alpha = 0.5;
  double T = 1.0;
  std::optional<SpaceProfile> u0;  // absent = zero initial data
  std::vector<SeparableTerm> forcing;
};

// Modal loads Phi^T <profile, hat_.>: the coefficients of the L2-projected
// profile in the mass-orthonormal eigenbasis.
Eigen::VectorXd modal_load(const ModalBasis& basis, const SpaceProfile& p);

// Fully discrete solution: one spectral time polynomial per eigenmode,
// ascending eigenvalue order.  U(x,t) = sum_n y_n(t) phi_n(x).
struct SpaceTimeSolution {
  std::shared_ptr<const ModalBasis> basis;
  std::vector<ScalarSpectralSolution> modes;
  double alpha = 0.5;
  double T = 1.0;

  int degree() const;
  Eigen::VectorXd modal_at(double t) const;
};

// The modal route: project data, solve one scalar problem per eigenmode
// with lambda = lambda_n.  Algebraically identical to the coupled
// space-time Galerkin system because the basis diagonalizes both spatial
// forms; the tests check that identity against a directly assembled
// Kronecker system.
SpaceTimeSolution solve(const ProblemSpec& spec, int degree,
                        std::shared_ptr<const ModalBasis> basis);
SpaceTimeSolution solve(const ProblemSpec& spec, int degree,
                        const Mesh1D& mesh);

// Exact solution of the semidiscrete problem (discrete in space, exact in
// time), valid when every forcing term is constant in time:
//   y_n(t) = y0_n E_{a,1}(-lam_n t^a) + f_n t^a E_{a,a+1}(-lam_n t^a).
// Serves as the temporal-error oracle against SpaceTimeSolution on the
// same mesh.
struct SemidiscreteSolution {
  std::shared_ptr<const ModalBasis> basis;
  Eigen::VectorXd y0_modal;
  Eigen::VectorXd f_modal;
  double alpha = 0.5;
  double T = 1.0;

  double mode_value(int n, double t) const;
  Eigen::VectorXd modal_at(double t) const;
};

SemidiscreteSolution semidiscrete_exact(const ProblemSpec& spec,
                                        std::shared_ptr<const ModalBasis> basis);
SemidiscreteSolution semidiscrete_exact(const ProblemSpec& spec,
                                        const Mesh1D& mesh);

double evaluate(const SpaceTimeSolution& sol, double x, double t);
double evaluate(const SemidiscreteSolution& sol, double x, double t);

}  // namespace fracspec
