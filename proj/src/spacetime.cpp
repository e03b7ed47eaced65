#include "fracspec/spacetime.hpp"

#include <cmath>
#include <stdexcept>

#include "fracspec/special.hpp"

namespace fracspec {

namespace {

void check_spec(const ProblemSpec& spec) {
  if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0))
    throw std::domain_error("ProblemSpec: alpha must lie in (0,1)");
  if (!(spec.T > 0.0)) throw std::domain_error("ProblemSpec: T must be > 0");
}

Eigen::VectorXd initial_modal(const ProblemSpec& spec,
                              const ModalBasis& basis) {
  if (!spec.u0) return Eigen::VectorXd::Zero(basis.n_modes());
  const Eigen::VectorXd nodal =
      l2_project(basis.mesh, spec.u0->g, spec.u0->s0, spec.u0->s1);
  return modal_coeffs(basis, nodal);
}

bool constant_in_time(const ForcingTerm& term) {
  return term.sigma == 0.0 && !term.factor;
}

}  // namespace

double SpaceProfile::eval(double x) const {
  double v = g ? g(x) : 1.0;
  if (s0 != 0.0) v *= std::pow(x, s0);
  if (s1 != 0.0) v *= std::pow(1.0 - x, s1);
  return v;
}

Eigen::VectorXd modal_load(const ModalBasis& basis, const SpaceProfile& p) {
  return basis.vectors.transpose() *
         load_vector(basis.mesh, p.g, p.s0, p.s1);
}

int SpaceTimeSolution::degree() const {
  return modes.empty() ? -1 : modes.front().degree();
}

Eigen::VectorXd SpaceTimeSolution::modal_at(double t) const {
  Eigen::VectorXd y(static_cast<int>(modes.size()));
  for (std::size_t n = 0; n < modes.size(); ++n)
    y[static_cast<int>(n)] = modes[n].eval(t);
  return y;
}

SpaceTimeSolution solve(const ProblemSpec& spec, int degree,
                        std::shared_ptr<const ModalBasis> basis) {
  check_spec(spec);
  if (!basis) throw std::domain_error("solve: null basis");
  const int n_modes = basis->n_modes();

  const Eigen::VectorXd y0 = initial_modal(spec, *basis);
  std::vector<Eigen::VectorXd> loads;
  loads.reserve(spec.forcing.size());
  for (const SeparableTerm& term : spec.forcing)
    loads.push_back(modal_load(*basis, term.space));

  // Warm the pairing cache once so per-mode solves share one table.
  shared_frac_pairing(spec.alpha, spec.T, degree);

  SpaceTimeSolution sol;
  sol.basis = basis;
  sol.alpha = spec.alpha;
  sol.T = spec.T;
  sol.modes.reserve(n_modes);
  for (int n = 0; n < n_modes; ++n) {
    ScalarProblem mode;
    mode.alpha = spec.alpha;
    mode.lambda = basis->values[n];
    mode.y0 = y0[n];
    mode.T = spec.T;
    for (std::size_t k = 0; k < spec.forcing.size(); ++k) {
      ForcingTerm t = spec.forcing[k].time;
      t.scale *= loads[k][n];
      mode.g.terms.push_back(std::move(t));
    }
    sol.modes.push_back(fracspec::solve(mode, degree));
  }
  return sol;
}

SpaceTimeSolution solve(const ProblemSpec& spec, int degree,
                        const Mesh1D& mesh) {
  return solve(spec, degree, std::make_shared<const ModalBasis>(eig(mesh)));
}

double SemidiscreteSolution::mode_value(int n, double t) const {
  ScalarOdeData d{alpha, basis->values[n], y0_modal[n], T};
  double v = exact_homogeneous(d, t);
  if (f_modal[n] != 0.0) {
    d.y0 = 0.0;
    v += f_modal[n] * exact_constant_forcing(d, t);
  }
  return v;
}

Eigen::VectorXd SemidiscreteSolution::modal_at(double t) const {
  Eigen::VectorXd y(basis->n_modes());
  for (int n = 0; n < basis->n_modes(); ++n) y[n] = mode_value(n, t);
  return y;
}

SemidiscreteSolution semidiscrete_exact(
    const ProblemSpec& spec, std::shared_ptr<const ModalBasis> basis) {
  check_spec(spec);
  if (!basis) throw std::domain_error("semidiscrete_exact: null basis");
  SemidiscreteSolution sol;
  sol.basis = basis;
  sol.alpha = spec.alpha;
  sol.T = spec.T;
  sol.y0_modal = initial_modal(spec, *basis);
  sol.f_modal = Eigen::VectorXd::Zero(basis->n_modes());
  for (const SeparableTerm& term : spec.forcing) {
    if (!constant_in_time(term.time))
      throw std::domain_error(
          "semidiscrete_exact: forcing must be constant in time");
    sol.f_modal += term.time.scale * modal_load(*basis, term.space);
  }
  return sol;
}

SemidiscreteSolution semidiscrete_exact(const ProblemSpec& spec,
                                        const Mesh1D& mesh) {
  return semidiscrete_exact(spec,
                            std::make_shared<const ModalBasis>(eig(mesh)));
}

namespace {

double evaluate_modal(const ModalBasis& basis, const Eigen::VectorXd& modal,
                      double x) {
  return hat_eval(basis.mesh, nodal_values(basis, modal), x);
}

void check_point(double x, double t, double T) {
  if (!(x >= 0.0) || !(x <= 1.0) || !(t >= 0.0) || !(t <= T))
    throw std::domain_error("evaluate: point outside [0,1] x [0,T]");
}

}  // namespace

double evaluate(const SpaceTimeSolution& sol, double x, double t) {
  check_point(x, t, sol.T);
  return evaluate_modal(*sol.basis, sol.modal_at(t), x);
}

double evaluate(const SemidiscreteSolution& sol, double x, double t) {
  check_point(x, t, sol.T);
  return evaluate_modal(*sol.basis, sol.modal_at(t), x);
}

}  // namespace fracspec
