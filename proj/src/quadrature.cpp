#include "fracspec/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracspec {

namespace {

constexpr double pi = std::numbers::pi;

// 16-point Gauss-Legendre rule on (-1,1), built once by Newton iteration on
// the Legendre recurrence.
struct GL16 {
    double x[16];
    double w[16];
    GL16() {
        const int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

const GL16& gl16() {
    static const GL16 rule;
    return rule;
}

struct EndpointWeights {
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    bool fold = false;
};

double folded_factor(const EndpointWeights& ew, double dist_a, double dist_b) {
    if (!ew.fold) return 1.0;
    double f = 1.0;
    if (ew.sigma_a != 0.0) f *= std::pow(dist_a, ew.sigma_a);
    if (ew.sigma_b != 0.0) f *= std::pow(dist_b, ew.sigma_b);
    return f;
}

void append_gl_cell(QuadGrid& g, double a, double b, double lo, double hi,
                    const EndpointWeights& ew) {
    const GL16& r = gl16();
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < 16; ++i) {
        double t = mid + half * r.x[i];
        double wt = half * r.w[i] * folded_factor(ew, t - a, b - t);
        g.nodes.push_back(t);
        g.weights.push_back(wt);
    }
}

// tanh-sinh panel of width `width` attached to one endpoint of (a,b).
// left=true covers [a, a+width], left=false covers [b-width, b].  The
// transform phi(u) = 1/(1+exp(-pi sinh u)) maps u -> distance/width with
// doubly exponential clustering at the attached endpoint (u -> -inf), which
// absorbs any integrable algebraic behaviour there.
void append_de_panel(QuadGrid& g, double a, double b, double width, bool left,
                     const EndpointWeights& ew) {
    const double h = 1.0 / 48.0;
    const int k_lo = -static_cast<int>(std::ceil(6.7 / h));
    const int k_hi = static_cast<int>(std::ceil(3.5 / h));
    const double end = left ? a : b;
    const double dir = left ? 1.0 : -1.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        double u = k * h;
        double sh = pi * std::sinh(u);
        double phi = 1.0 / (1.0 + std::exp(-sh));     // in (0,1)
        double phic = 1.0 / (1.0 + std::exp(sh));     // 1 - phi, stable
        double dist = width * phi;
        if (dist < 1e-280) continue;  // residual tail < any integrable mass
        double t = end + dir * dist;
        double wt = width * pi * std::cosh(u) * phi * phic * h;
        if (ew.fold) {
            // weight factors use the exact distance, so nodes may sit within
            // one ulp of the end; the remaining cofactor is smooth there
            if (t <= a) t = std::nextafter(a, b);
            if (t >= b) t = std::nextafter(b, a);
            double da = left ? dist : (b - a) - dist;
            double db = left ? (b - a) - dist : dist;
            wt *= folded_factor(ew, da, db);
        } else if (t == end || t <= a || t >= b) {
            // without folding the integrand itself may be singular at the
            // end; mass closer than one ulp of |end| is unreachable
            continue;
        }
        if (wt == 0.0) continue;
        g.nodes.push_back(t);
        g.weights.push_back(wt);
    }
}

QuadGrid build_grid(double a, double b, int osc_degree,
                    const EndpointWeights& ew) {
    if (!(b > a)) throw std::invalid_argument("quadrature: empty interval");
    if (ew.fold && (ew.sigma_a <= -1.0 || ew.sigma_b <= -1.0))
        throw std::invalid_argument("quadrature: non-integrable weight");
    if (osc_degree < 0) osc_degree = 0;

    int n = std::max(8, static_cast<int>(std::ceil(0.62 * (osc_degree + 1))) + 6);
    QuadGrid g;
    g.nodes.reserve(16 * n + 1000);
    g.weights.reserve(16 * n + 1000);

    auto bp = [&](int i) {
        return a + (b - a) * 0.5 * (1.0 - std::cos(pi * i / n));
    };
    append_de_panel(g, a, b, bp(1) - a, true, ew);
    for (int i = 1; i < n - 1; ++i) append_gl_cell(g, a, b, bp(i), bp(i + 1), ew);
    append_de_panel(g, a, b, b - bp(n - 1), false, ew);
    return g;
}

}  // namespace

double QuadGrid::apply(const std::function<double(double)>& f) const {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double term = weights[i] * f(nodes[i]);
        double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

QuadGrid singular_grid(double a, double b, int osc_degree) {
    return build_grid(a, b, osc_degree, EndpointWeights{});
}

QuadGrid weighted_grid(double a, double b, double sigma_a, double sigma_b,
                       int osc_degree) {
    return build_grid(a, b, osc_degree, EndpointWeights{sigma_a, sigma_b, true});
}

double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, int osc_degree) {
    return singular_grid(a, b, osc_degree).apply(f);
}

}  // namespace fracspec
