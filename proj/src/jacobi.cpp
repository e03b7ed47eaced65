#include "fracspec/jacobi.hpp"

#include <cmath>
#include <stdexcept>

#include "fracspec/special.hpp"

namespace fracspec {

void check_weight(const JacobiWeight& w) {
    if (!(w.a > -1.0) || !(w.b > -1.0))
        throw std::domain_error("jacobi: weight exponents must be > -1");
    if (!(w.T > 0.0)) throw std::domain_error("jacobi: T > 0");
}

std::vector<double> jacobi_eval_all(int k_max, const JacobiWeight& w, double t) {
    check_weight(w);
    if (k_max < 0) throw std::domain_error("jacobi_eval_all: k_max >= 0");
    const double a = w.a, b = w.b;
    const double x = 2.0 * t / w.T - 1.0;
    std::vector<double> p(k_max + 1);
    p[0] = 1.0;
    if (k_max == 0) return p;
    p[1] = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    for (int n = 2; n <= k_max; ++n) {
        double s = 2.0 * n + a + b;
        double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
        double c2 = (s - 1.0) * (a * a - b * b);
        double c3 = (s - 1.0) * s * (s - 2.0);
        double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        p[n] = ((c2 + c3 * x) * p[n - 1] - c4 * p[n - 2]) / c1;
    }
    return p;
}

double jacobi_eval(int k, const JacobiWeight& w, double t) {
    return jacobi_eval_all(k, w, t)[k];
}

double weight_mass(const JacobiWeight& w) {
    check_weight(w);
    return std::pow(w.T, w.a + w.b + 1.0) *
           std::exp(log_gamma(w.a + 1.0) + log_gamma(w.b + 1.0) -
                    log_gamma(w.a + w.b + 2.0));
}

double jacobi_norm_sq(int k, const JacobiWeight& w) {
    check_weight(w);
    if (k < 0) throw std::domain_error("jacobi_norm_sq: k >= 0");
    if (k == 0) return weight_mass(w);
    // stays clear of the a+b+1 = 0 pole of the generic formula at k = 0
    const double a = w.a, b = w.b;
    return std::pow(w.T, a + b + 1.0) / (2.0 * k + a + b + 1.0) *
           std::exp(log_gamma(k + a + 1.0) + log_gamma(k + b + 1.0) -
                    log_gamma(k + 1.0) - log_gamma(k + a + b + 1.0));
}

QuadGrid gauss_jacobi(int n, const JacobiWeight& w) {
    check_weight(w);
    if (n < 1) throw std::domain_error("gauss_jacobi: n >= 1");
    const double a = w.a, b = w.b;
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    diag[0] = (b - a) / (a + b + 2.0);
    for (int m = 1; m < n; ++m) {
        double s = 2.0 * m + a + b;
        diag[m] = (b * b - a * a) / (s * (s + 2.0));
        double beta;
        if (m == 1)
            beta = 4.0 * (a + 1.0) * (b + 1.0) /
                   ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
        else
            beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) /
                   (s * s * (s + 1.0) * (s - 1.0));
        sub[m - 1] = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_jacobi: eigen solve failed");

    const double mu0 = std::pow(2.0, a + b + 1.0) *
                       std::exp(log_gamma(a + 1.0) + log_gamma(b + 1.0) -
                                log_gamma(a + b + 2.0));
    const double scale = mu0 * std::pow(0.5 * w.T, a + b + 1.0);
    QuadGrid g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()[i];
        double v = es.eigenvectors()(0, i);
        g.nodes[i] = 0.5 * w.T * (1.0 + x);
        g.weights[i] = scale * v * v;
    }
    return g;
}

double Expansion::eval(double t) const {
    if (coeff.empty()) return 0.0;
    auto s = jacobi_eval_all(degree(), w, t);
    double acc = 0.0;
    for (int k = 0; k <= degree(); ++k) acc += coeff[k] * s[k];
    return acc;
}

Expansion project(const std::function<double(double)>& f, int degree,
                  const JacobiWeight& w, int rule_points) {
    check_weight(w);
    if (degree < 0) throw std::domain_error("project: degree >= 0");
    int n = rule_points > 0 ? rule_points : degree + 40;
    if (n <= degree) throw std::domain_error("project: rule too small");
    auto rule = gauss_jacobi(n, w);
    std::vector<double> num(degree + 1, 0.0), comp(degree + 1, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double fv = rule.weights[i] * f(rule.nodes[i]);
        auto s = jacobi_eval_all(degree, w, rule.nodes[i]);
        for (int k = 0; k <= degree; ++k) {
            double term = fv * s[k];
            double t2 = num[k] + term;
            comp[k] += (std::abs(num[k]) >= std::abs(term)) ? (num[k] - t2) + term
                                                            : (term - t2) + num[k];
            num[k] = t2;
        }
    }
    Expansion e{w, std::vector<double>(degree + 1)};
    for (int k = 0; k <= degree; ++k)
        e.coeff[k] = (num[k] + comp[k]) / jacobi_norm_sq(k, w);
    return e;
}

Eigen::MatrixXd connection_matrix(int degree, const JacobiWeight& from,
                                  const JacobiWeight& to) {
    check_weight(from);
    check_weight(to);
    if (from.T != to.T)
        throw std::domain_error("connection_matrix: mismatched intervals");
    if (degree < 0) throw std::domain_error("connection_matrix: degree >= 0");
    auto rule = gauss_jacobi(degree + 2, to);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        auto sf = jacobi_eval_all(degree, from, rule.nodes[i]);
        auto st = jacobi_eval_all(degree, to, rule.nodes[i]);
        for (int k = 0; k <= degree; ++k) {
            double wk = rule.weights[i] * st[k];
            for (int j = k; j <= degree; ++j) M(k, j) += wk * sf[j];
        }
    }
    for (int k = 0; k <= degree; ++k) {
        double inv = 1.0 / jacobi_norm_sq(k, to);
        for (int j = 0; j <= degree; ++j) M(k, j) = j < k ? 0.0 : M(k, j) * inv;
    }
    return M;
}

std::vector<double> weighted_pairings(const std::function<double(double)>& g,
                                      double s0, double s1,
                                      const JacobiWeight& w, int k_max) {
    check_weight(w);
    if (k_max < 0) throw std::domain_error("weighted_pairings: k_max >= 0");
    auto grid = weighted_grid(0.0, w.T, w.b + s0, w.a + s1, k_max + 8);
    std::vector<double> num(k_max + 1, 0.0), comp(k_max + 1, 0.0);
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        double gv = grid.weights[i] * g(grid.nodes[i]);
        auto s = jacobi_eval_all(k_max, w, grid.nodes[i]);
        for (int k = 0; k <= k_max; ++k) {
            double term = gv * s[k];
            double t2 = num[k] + term;
            comp[k] += (std::abs(num[k]) >= std::abs(term)) ? (num[k] - t2) + term
                                                            : (term - t2) + num[k];
            num[k] = t2;
        }
    }
    for (int k = 0; k <= k_max; ++k) num[k] += comp[k];
    return num;
}

double WeightedFracImage::eval(double t) const {
    double base = factor_at_origin ? t : poly.w.T - t;
    return std::pow(base, p) * poly.eval(t);
}

WeightedFracImage frac_deriv_map(const Expansion& u, double theta,
                                 bool from_left) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::domain_error("frac_deriv_map: theta in (0,1)");
    if (from_left ? u.w.b != 0.0 : u.w.a != 0.0)
        throw std::domain_error(
            "frac_deriv_map: source basis must be unweighted on the "
            "differentiation side");
    WeightedFracImage img;
    img.factor_at_origin = from_left;
    img.p = -theta;
    img.poly.w = from_left ? JacobiWeight{u.w.a + theta, -theta, u.w.T}
                           : JacobiWeight{-theta, u.w.b + theta, u.w.T};
    img.poly.coeff.resize(u.coeff.size());
    for (std::size_t k = 0; k < u.coeff.size(); ++k)
        img.poly.coeff[k] =
            u.coeff[k] *
            std::exp(log_gamma(double(k) + 1.0) - log_gamma(double(k) + 1.0 - theta));
    return img;
}

WeightedFracImage frac_integral_map(const Expansion& u, double theta,
                                    bool from_left) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::domain_error("frac_integral_map: theta in (0,1)");
    if (from_left ? u.w.b != 0.0 : u.w.a != 0.0)
        throw std::domain_error(
            "frac_integral_map: source basis must be unweighted on the "
            "integration side");
    double shifted = (from_left ? u.w.a : u.w.b) - theta;
    if (!(shifted > -1.0))
        throw std::domain_error("frac_integral_map: image weight leaves (-1,inf)");
    WeightedFracImage img;
    img.factor_at_origin = from_left;
    img.p = theta;
    img.poly.w = from_left ? JacobiWeight{shifted, theta, u.w.T}
                           : JacobiWeight{theta, shifted, u.w.T};
    img.poly.coeff.resize(u.coeff.size());
    for (std::size_t k = 0; k < u.coeff.size(); ++k)
        img.poly.coeff[k] =
            u.coeff[k] *
            std::exp(log_gamma(double(k) + 1.0) - log_gamma(double(k) + 1.0 + theta));
    return img;
}

FracPairing::FracPairing(double alpha, double T, int degree)
    : alpha_(alpha), T_(T), degree_(degree) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("FracPairing: alpha in (0,1)");
    if (!(T > 0.0)) throw std::domain_error("FracPairing: T > 0");
    if (degree < 0) throw std::domain_error("FracPairing: degree >= 0");
    JacobiWeight leg{0.0, 0.0, T};
    Eigen::MatrixXd c1 = connection_matrix(degree, leg, {-alpha, 0.0, T});
    Eigen::MatrixXd c2 = connection_matrix(degree, leg, {0.0, -alpha, T});
    Eigen::VectorXd d(degree + 1);
    for (int k = 0; k <= degree; ++k)
        d[k] = std::pow(T, 1.0 - alpha) / (2.0 * k + 1.0 - alpha) *
               std::exp(log_gamma(k + 1.0) - log_gamma(k + 1.0 - alpha));
    F_ = c2.transpose() * d.asDiagonal() * c1;
}

double FracPairing::pair(const std::vector<double>& p_leg,
                         const std::vector<double>& q_leg) const {
    const int n = degree_ + 1;
    if (static_cast<int>(p_leg.size()) > n || static_cast<int>(q_leg.size()) > n)
        throw std::domain_error("FracPairing::pair: degree exceeds table");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n), q = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < p_leg.size(); ++i) p[i] = p_leg[i];
    for (std::size_t i = 0; i < q_leg.size(); ++i) q[i] = q_leg[i];
    return q.dot(F_ * p);
}

Eigen::MatrixXd FracPairing::matrix(int m) const {
    if (m < 0 || m > degree_)
        throw std::domain_error("FracPairing::matrix: block out of range");
    return F_.topLeftCorner(m + 1, m + 1);
}

}  // namespace fracspec
