#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fracspec {

// Partition 0 = x_0 < ... < x_N = 1 of the unit interval.  Homogeneous
// Dirichlet conditions everywhere in this module, so the N-1 interior
// nodes carry the degrees of freedom.
struct Mesh1D {
  std::vector<double> node;

  static Mesh1D uniform(int n_cells);

  int n_cells() const { return static_cast<int>(node.size()) - 1; }
  int n_interior() const { return n_cells() - 1; }
  double h_max() const;
};

void check_mesh(const Mesh1D& mesh);

// Symmetric tridiagonal matrix; off[i] couples dofs i and i+1.
struct TridiagonalMatrix {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;

  int size() const { return static_cast<int>(diag.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;  // SPD only
  Eigen::MatrixXd dense() const;
};

struct P1Matrices {
  TridiagonalMatrix mass;
  TridiagonalMatrix stiffness;
};

// Interior-dof mass and stiffness of continuous piecewise linears.
P1Matrices assemble_matrices(const Mesh1D& mesh);

// Generalized eigenpairs K phi = lambda M phi with Phi^T M Phi = I,
// eigenvalues ascending.  Column signs are fixed by making the
// largest-magnitude entry positive, so results are reproducible.
struct ModalBasis {
  Mesh1D mesh;
  P1Matrices mats;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  int n_modes() const { return static_cast<int>(values.size()); }
};

ModalBasis eig(const Mesh1D& mesh);

// Same pencil on the uniform mesh, by the closed form: eigenvalues
// (6/h^2)(1-cos k pi h)/(2+cos k pi h) with discrete sine vectors, already
// ascending and M-orthonormal.  Mode signs may differ from eig(); a basis
// is only ever used against itself, so that is immaterial.
ModalBasis uniform_modal_basis(int n_cells);

// Loads b_p = <f, hat_p> over interior hats.  The plain overload uses
// per-cell Gauss plus geometric refinement toward the boundary on the two
// end cells; it is meant for data whose endpoint blow-up is milder than
// x^{-1/2}.  The weighted overload takes f = x^{s0} (1-x)^{s1} g with
// smooth g (null g means 1) and folds the algebraic factors into the end
// cell rules exactly, so any s0, s1 > -1 is fine.
Eigen::VectorXd load_vector(const Mesh1D& mesh,
                            const std::function<double(double)>& f);
Eigen::VectorXd load_vector(const Mesh1D& mesh,
                            const std::function<double(double)>& g, double s0,
                            double s1);

// L2 projection onto the Dirichlet P1 space: solves M c = load.
Eigen::VectorXd l2_project(const Mesh1D& mesh,
                           const std::function<double(double)>& f);
Eigen::VectorXd l2_project(const Mesh1D& mesh,
                           const std::function<double(double)>& g, double s0,
                           double s1);

// Modal coefficients Phi^T M v of a nodal vector, and the inverse map.
Eigen::VectorXd modal_coeffs(const ModalBasis& basis,
                             const Eigen::VectorXd& nodal);
Eigen::VectorXd nodal_values(const ModalBasis& basis,
                             const Eigen::VectorXd& modal);

// Piecewise-linear evaluation of interior nodal values; zero at the ends.
double hat_eval(const Mesh1D& mesh, const Eigen::VectorXd& nodal, double x);

}  // namespace fracspec
