#include "fracspec/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracspec/jacobi.hpp"
#include "fracspec/quadrature.hpp"
#include "fracspec/special.hpp"

namespace fracspec {

namespace {

// Gauss-Legendre rule on (0,1); shared by all smooth per-cell integrals.
const QuadGrid& unit_rule() {
  static const QuadGrid rule = gauss_jacobi(12, JacobiWeight{0.0, 0.0, 1.0});
  return rule;
}

double smooth_or_one(const std::function<double(double)>& g, double x) {
  return g ? g(x) : 1.0;
}

// Rise and fall ramp integrals of f over one cell:
//   rise = int f(x) (x-a)/(b-a) dx,   fall = int f(x) (b-x)/(b-a) dx.
// rise feeds the hat centred at b, fall the one centred at a.
struct CellLoads {
  double rise = 0.0;
  double fall = 0.0;
};

CellLoads cell_loads_smooth(const std::function<double(double)>& f, double a,
                            double b) {
  const QuadGrid& rule = unit_rule();
  const double h = b - a;
  CellLoads out;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    const double fx = f(a + h * u) * h * rule.weights[q];
    out.rise += fx * u;
    out.fall += fx * (1.0 - u);
  }
  return out;
}

// End cell with possibly unbounded f at the boundary endpoint: geometric
// subdivision toward it, stopping once the ramp integrals stabilise.
// Converges when the blow-up is weaker than the ramp decay can absorb,
// i.e. integrable f; practical accuracy degrades as the exponent nears -1,
// which is why callers with known algebraic factors use the weighted path.
CellLoads cell_loads_refined(const std::function<double(double)>& f, double a,
                             double b, bool singular_at_left) {
  const double h = b - a;
  CellLoads acc;
  double lo = 0.0, hi = 1.0;  // relative coordinates, singular end at 0
  int quiet = 0;
  for (int level = 0; level < 220 && quiet < 2; ++level) {
    lo = hi * 0.5;
    const double sa = singular_at_left ? a + lo * h : b - hi * h;
    const double sb = singular_at_left ? a + hi * h : b - lo * h;
    const QuadGrid& rule = unit_rule();
    CellLoads inc;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = sa + (sb - sa) * rule.nodes[q];
      const double fx = f(x) * (sb - sa) * rule.weights[q];
      const double u = (x - a) / h;
      inc.rise += fx * u;
      inc.fall += fx * (1.0 - u);
    }
    acc.rise += inc.rise;
    acc.fall += inc.fall;
    const double scale = 1.0 + std::fabs(acc.rise) + std::fabs(acc.fall);
    if (std::fabs(inc.rise) + std::fabs(inc.fall) <= 1e-14 * scale)
      ++quiet;
    else
      quiet = 0;
    hi = lo;
  }
  return acc;
}

// End cell whose integrand is x^{s0} (1-x)^{s1} g(x) times the ramps; the
// local algebraic factor is folded into the rule, the opposite-end factor
// stays in the integrand where it is smooth.
CellLoads cell_loads_weighted(const std::function<double(double)>& g,
                              double s0, double s1, double a, double b,
                              bool left_cell) {
  const double h = b - a;
  const QuadGrid grid = left_cell ? weighted_grid(a, b, s0, 0.0)
                                  : weighted_grid(a, b, 0.0, s1);
  CellLoads out;
  for (std::size_t q = 0; q < grid.nodes.size(); ++q) {
    const double x = grid.nodes[q];
    const double other = left_cell ? std::pow(1.0 - x, s1) : std::pow(x, s0);
    const double fx = smooth_or_one(g, x) * other * grid.weights[q];
    const double u = (x - a) / h;
    out.rise += fx * u;
    out.fall += fx * (1.0 - u);
  }
  return out;
}

void scatter(Eigen::VectorXd& load, int cell, int n_cells,
             const CellLoads& c) {
  if (cell > 0) load[cell - 1] += c.fall;          // hat centred at x_cell
  if (cell < n_cells - 1) load[cell] += c.rise;    // hat centred at x_{cell+1}
}

}  // namespace

Mesh1D Mesh1D::uniform(int n_cells) {
  if (n_cells < 2) throw std::domain_error("Mesh1D: need at least 2 cells");
  Mesh1D mesh;
  mesh.node.resize(n_cells + 1);
  for (int j = 0; j <= n_cells; ++j)
    mesh.node[j] = static_cast<double>(j) / n_cells;
  mesh.node.back() = 1.0;
  return mesh;
}

double Mesh1D::h_max() const {
  double h = 0.0;
  for (std::size_t j = 1; j < node.size(); ++j)
    h = std::max(h, node[j] - node[j - 1]);
  return h;
}

void check_mesh(const Mesh1D& mesh) {
  if (mesh.node.size() < 3)
    throw std::domain_error("Mesh1D: need at least 2 cells");
  if (mesh.node.front() != 0.0 || mesh.node.back() != 1.0)
    throw std::domain_error("Mesh1D: domain is (0,1)");
  for (std::size_t j = 1; j < mesh.node.size(); ++j)
    if (!(mesh.node[j] > mesh.node[j - 1]))
      throw std::domain_error("Mesh1D: nodes must increase strictly");
}

Eigen::VectorXd TridiagonalMatrix::apply(const Eigen::VectorXd& x) const {
  const int n = size();
  Eigen::VectorXd y = diag.cwiseProduct(x);
  for (int i = 0; i + 1 < n; ++i) {
    y[i] += off[i] * x[i + 1];
    y[i + 1] += off[i] * x[i];
  }
  return y;
}

Eigen::VectorXd TridiagonalMatrix::solve(const Eigen::VectorXd& rhs) const {
  const int n = size();
  // LDL^T without pivoting; valid because every matrix here is SPD.
  Eigen::VectorXd d(n), l(std::max(n - 1, 0)), y(n);
  d[0] = diag[0];
  for (int i = 1; i < n; ++i) {
    l[i - 1] = off[i - 1] / d[i - 1];
    d[i] = diag[i] - l[i - 1] * off[i - 1];
  }
  y[0] = rhs[0];
  for (int i = 1; i < n; ++i) y[i] = rhs[i] - l[i - 1] * y[i - 1];
  Eigen::VectorXd x(n);
  x[n - 1] = y[n - 1] / d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = y[i] / d[i] - l[i] * x[i + 1];
  return x;
}

Eigen::MatrixXd TridiagonalMatrix::dense() const {
  const int n = size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = off[i];
  return a;
}

P1Matrices assemble_matrices(const Mesh1D& mesh) {
  check_mesh(mesh);
  const int n = mesh.n_interior();
  P1Matrices out;
  out.mass.diag = Eigen::VectorXd::Zero(n);
  out.mass.off = Eigen::VectorXd::Zero(std::max(n - 1, 0));
  out.stiffness.diag = Eigen::VectorXd::Zero(n);
  out.stiffness.off = Eigen::VectorXd::Zero(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) {
    const double hl = mesh.node[i + 1] - mesh.node[i];
    const double hr = mesh.node[i + 2] - mesh.node[i + 1];
    out.mass.diag[i] = (hl + hr) / 3.0;
    out.stiffness.diag[i] = 1.0 / hl + 1.0 / hr;
    if (i + 1 < n) {
      out.mass.off[i] = hr / 6.0;
      out.stiffness.off[i] = -1.0 / hr;
    }
  }
  return out;
}

ModalBasis eig(const Mesh1D& mesh) {
  ModalBasis basis;
  basis.mesh = mesh;
  basis.mats = assemble_matrices(mesh);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      basis.mats.stiffness.dense(), basis.mats.mass.dense(),
      Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw accuracy_error("eig: generalized eigensolver failed");
  basis.values = solver.eigenvalues();
  basis.vectors = solver.eigenvectors();
  for (int k = 0; k < basis.vectors.cols(); ++k) {
    int at = 0;
    basis.vectors.col(k).cwiseAbs().maxCoeff(&at);
    if (basis.vectors(at, k) < 0.0) basis.vectors.col(k) = -basis.vectors.col(k);
  }
  return basis;
}

ModalBasis uniform_modal_basis(int n_cells) {
  ModalBasis basis;
  basis.mesh = Mesh1D::uniform(n_cells);
  basis.mats = assemble_matrices(basis.mesh);
  const int n = basis.mesh.n_interior();
  const double h = 1.0 / n_cells;
  basis.values.resize(n);
  basis.vectors.resize(n, n);
  for (int k = 1; k <= n; ++k) {
    const double c = std::cos(k * std::numbers::pi * h);
    basis.values[k - 1] = (6.0 / (h * h)) * (1.0 - c) / (2.0 + c);
    // <sin_k, sin_k>_M = (2 + cos(k pi h)) / 6 on the unit interval
    const double scale = 1.0 / std::sqrt((2.0 + c) / 6.0);
    for (int j = 1; j <= n; ++j)
      basis.vectors(j - 1, k - 1) =
          scale * std::sin(k * std::numbers::pi * j * h);
  }
  return basis;
}

Eigen::VectorXd load_vector(const Mesh1D& mesh,
                            const std::function<double(double)>& f) {
  check_mesh(mesh);
  if (!f) throw std::domain_error("load_vector: null integrand");
  const int n_cells = mesh.n_cells();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.n_interior());
  for (int c = 0; c < n_cells; ++c) {
    const double a = mesh.node[c], b = mesh.node[c + 1];
    CellLoads part;
    if (c == 0)
      part = cell_loads_refined(f, a, b, true);
    else if (c == n_cells - 1)
      part = cell_loads_refined(f, a, b, false);
    else
      part = cell_loads_smooth(f, a, b);
    scatter(load, c, n_cells, part);
  }
  return load;
}

Eigen::VectorXd load_vector(const Mesh1D& mesh,
                            const std::function<double(double)>& g, double s0,
                            double s1) {
  check_mesh(mesh);
  if (!(s0 > -1.0) || !(s1 > -1.0))
    throw std::domain_error("load_vector: endpoint exponents must be > -1");
  const int n_cells = mesh.n_cells();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.n_interior());
  for (int c = 0; c < n_cells; ++c) {
    const double a = mesh.node[c], b = mesh.node[c + 1];
    CellLoads part;
    if (c == 0 || c == n_cells - 1) {
      part = cell_loads_weighted(g, s0, s1, a, b, c == 0);
    } else {
      auto f = [&](double x) {
        return std::pow(x, s0) * std::pow(1.0 - x, s1) * smooth_or_one(g, x);
      };
      part = cell_loads_smooth(f, a, b);
    }
    scatter(load, c, n_cells, part);
  }
  return load;
}

Eigen::VectorXd l2_project(const Mesh1D& mesh,
                           const std::function<double(double)>& f) {
  return assemble_matrices(mesh).mass.solve(load_vector(mesh, f));
}

Eigen::VectorXd l2_project(const Mesh1D& mesh,
                           const std::function<double(double)>& g, double s0,
                           double s1) {
  return assemble_matrices(mesh).mass.solve(load_vector(mesh, g, s0, s1));
}

Eigen::VectorXd modal_coeffs(const ModalBasis& basis,
                             const Eigen::VectorXd& nodal) {
  return basis.vectors.transpose() * basis.mats.mass.apply(nodal);
}

Eigen::VectorXd nodal_values(const ModalBasis& basis,
                             const Eigen::VectorXd& modal) {
  return basis.vectors * modal;
}

double hat_eval(const Mesh1D& mesh, const Eigen::VectorXd& nodal, double x) {
  if (!(x >= 0.0) || !(x <= 1.0))
    throw std::domain_error("hat_eval: x outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  const auto it = std::upper_bound(mesh.node.begin(), mesh.node.end(), x);
  const int cell = static_cast<int>(it - mesh.node.begin()) - 1;
  const double a = mesh.node[cell], b = mesh.node[cell + 1];
  const double u = (x - a) / (b - a);
  const double va = cell > 0 ? nodal[cell - 1] : 0.0;
  const double vb = cell + 1 < mesh.n_cells() ? nodal[cell] : 0.0;
  return va * (1.0 - u) + vb * u;
}

}  // namespace fracspec
