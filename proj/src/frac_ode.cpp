#include "fracspec/frac_ode.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fracspec/special.hpp"

namespace fracspec {

namespace {

void check_problem(const ScalarProblem& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw std::domain_error("ScalarProblem: alpha in (0,1)");
    if (!(p.lambda >= 0.0)) throw std::domain_error("ScalarProblem: lambda >= 0");
    if (!(p.T > 0.0)) throw std::domain_error("ScalarProblem: T > 0");
    for (const auto& term : p.g.terms)
        if (!(term.sigma > -1.0))
            throw std::domain_error("ScalarProblem: forcing exponent <= -1");
}

}  // namespace

std::shared_ptr<const FracPairing> shared_frac_pairing(double alpha, double T,
                                                       int degree) {
    static std::mutex mu;
    static std::map<std::pair<double, double>,
                    std::shared_ptr<const FracPairing>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(alpha, T);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->degree() >= degree) return it->second;
    auto fp = std::make_shared<const FracPairing>(alpha, T,
                                                  std::max(degree, 16));
    cache[key] = fp;
    return fp;
}

Eigen::MatrixXd assemble(const FracPairing& fp, double lambda, int m) {
    Eigen::MatrixXd A = fp.matrix(m);
    for (int i = 0; i <= m; ++i)
        A(i, i) += lambda * fp.time_horizon() / (2.0 * i + 1.0);
    return A;
}

Eigen::VectorXd rhs_vector(const ScalarProblem& p, int m) {
    check_problem(p);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
    JacobiWeight leg{0.0, 0.0, p.T};
    for (const auto& term : p.g.terms) {
        auto pairings =
            term.factor
                ? weighted_pairings(term.factor, term.sigma, 0.0, leg, m)
                : weighted_pairings([](double) { return 1.0; }, term.sigma,
                                    0.0, leg, m);
        for (int i = 0; i <= m; ++i) b[i] += term.scale * pairings[i];
    }
    b[0] -= p.lambda * p.y0 * p.T;
    return b;
}

double residual_check(const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& b) {
    return (A * c - b).lpNorm<Eigen::Infinity>() /
           (1.0 + b.lpNorm<Eigen::Infinity>());
}

ScalarSpectralSolution solve(const ScalarProblem& p, int degree) {
    check_problem(p);
    if (degree < 0) throw std::domain_error("solve: degree >= 0");
    auto fp = shared_frac_pairing(p.alpha, p.T, degree);
    Eigen::MatrixXd A = assemble(*fp, p.lambda, degree);
    Eigen::VectorXd b = rhs_vector(p, degree);
    Eigen::VectorXd c = A.partialPivLu().solve(b);
    double res = residual_check(A, c, b);
    if (!(res < 1e-8))
        throw accuracy_error("spectral solve: residual " + std::to_string(res));
    ScalarSpectralSolution sol;
    sol.y0 = p.y0;
    sol.poly.w = JacobiWeight{0.0, 0.0, p.T};
    sol.poly.coeff.assign(c.data(), c.data() + degree + 1);
    sol.poly.coeff[0] += p.y0;
    return sol;
}

}  // namespace fracspec
