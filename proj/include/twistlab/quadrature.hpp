#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace twistlab {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n; accurate to
// double precision for the orders used here (<= 64).
GaussRule gauss_legendre(int order);

double integrate_gauss(const GaussRule& rule, double lo, double hi,
                       const std::function<double(double)>& f);

// Adaptive Simpson with absolute tolerance and bounded depth.  min_depth
// forces initial subdivisions so a symmetric oscillation cannot fake
// convergence on a coarse panel.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double abs_tol, int max_depth = 28, int min_depth = 0);

} // namespace twistlab
