#pragma once

#include <functional>
#include <vector>

namespace fracspec {

// Composite quadrature grid for integrals over a finite interval whose
// integrand may combine
//   * integrable algebraic singularities at either endpoint, and
//   * a polynomial factor of known degree (hence known oscillation budget)
//     in the interior.
//
// The interval is partitioned along the Chebyshev map
// t_i = a + (b-a)(1 - cos(pi i/n))/2, which spaces breakpoints evenly in the
// angular variable where Jacobi-type oscillations are evenly spaced and
// grades quadratically into both endpoints.  The two end cells are handled
// by tanh-sinh panels (robust for any integrable endpoint behaviour), the
// interior cells by 16-point Gauss-Legendre.
struct QuadGrid {
    std::vector<double> nodes;    // strictly inside (a,b)
    std::vector<double> weights;  // include folded endpoint factors, if any

    // Compensated (Neumaier) weighted sum of f over the grid.
    double apply(const std::function<double(double)>& f) const;
};

// Grid whose weights are plain quadrature weights.  Endpoint singularities
// of the integrand itself are tolerated as long as they are integrable.
QuadGrid singular_grid(double a, double b, int osc_degree = 0);

// Grid with the algebraic weight (t-a)^sigma_a (b-t)^sigma_b folded into the
// quadrature weights; exponents must be > -1.  apply() then receives only
// the smooth cofactor.  Nodes never coincide with a or b, and the distances
// entering the folded factors are computed directly in the tanh-sinh
// variable, so cofactors are evaluated safely arbitrarily close to the ends.
QuadGrid weighted_grid(double a, double b, double sigma_a, double sigma_b,
                       int osc_degree = 0);

double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, int osc_degree = 0);

}  // namespace fracspec
