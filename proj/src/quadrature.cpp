#include "twistlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twistlab {

GaussRule gauss_legendre(int order) {
    if (order < 1 || order > 64) throw std::invalid_argument("gauss_legendre: order must be in [1,64]");
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p0 = 0, p1 = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        double dp = n * (x * p0 - p1) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double integrate_gauss(const GaussRule& rule, double lo, double hi,
                       const std::function<double(double)>& f) {
    const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(c + h * rule.nodes[i]);
    return acc * h;
}

namespace {

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth, int force) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (depth <= 0 || (force <= 0 && std::abs(delta) <= 15.0 * tol)) return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double abs_tol, int max_depth, int min_depth) {
    if (!(hi >= lo)) throw std::invalid_argument("integrate_adaptive: bad interval");
    if (hi == lo) return 0.0;
    double m = 0.5 * (lo + hi);
    double fa = f(lo), fm = f(m), fb = f(hi);
    double whole = simpson(fa, fm, fb, hi - lo);
    return adaptive_step(f, lo, hi, fa, fm, fb, whole, abs_tol, max_depth, min_depth);
}

} // namespace twistlab
