#ifndef METROKIT_OPTIM_HPP
#define METROKIT_OPTIM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "metrokit/errors.hpp"

namespace metrokit {

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search for the maximum of f on [a, b], run until the bracket
// shrinks below rel_tol * |bracket center|.
inline ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                        double rel_tol = 1e-6, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a + b) / 2.0); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    double xm = (a + b) / 2.0;
    double fm = f(xm);
    ScalarOptimum best{xm, fm};
    if (f1 > best.value) best = {x1, f1};
    if (f2 > best.value) best = {x2, f2};
    return best;
}

struct SimplexOptions {
    int max_iter = 400;
    double ftol = 1e-10;
    double step = 0.5;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

// Nelder-Mead downhill simplex, maximizing f.
inline SimplexResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x0, const SimplexOptions& opts = {}) {
    const std::size_t n = x0.size();
    if (n == 0) throw Error("simplex needs at least one coordinate");
    auto cost = [&](const std::vector<double>& x) { return -f(x); };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fx(n + 1);
    int evals = 0;
    for (std::size_t i = 1; i <= n; ++i) simplex[i][i - 1] += opts.step;
    for (std::size_t i = 0; i <= n; ++i) {
        fx[i] = cost(simplex[i]);
        ++evals;
    }

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        std::size_t lo = 0, hi = 0, nh = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            if (fx[i] < fx[lo]) lo = i;
            if (fx[i] > fx[hi]) hi = i;
        }
        for (std::size_t i = 0; i <= n; ++i)
            if (i != hi && fx[i] > fx[nh]) nh = i;
        if (std::abs(fx[hi] - fx[lo]) <= opts.ftol * (std::abs(fx[hi]) + std::abs(fx[lo]) + 1e-30))
            break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != hi)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / double(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + t * (simplex[hi][d] - centroid[d]);
            return p;
        };

        auto reflected = blend(-1.0);
        double fr = cost(reflected);
        ++evals;
        if (fr < fx[lo]) {
            auto expanded = blend(-2.0);
            double fe = cost(expanded);
            ++evals;
            if (fe < fr) {
                simplex[hi] = expanded;
                fx[hi] = fe;
            } else {
                simplex[hi] = reflected;
                fx[hi] = fr;
            }
        } else if (fr < fx[nh]) {
            simplex[hi] = reflected;
            fx[hi] = fr;
        } else {
            auto contracted = blend(0.5);
            double fc = cost(contracted);
            ++evals;
            if (fc < fx[hi]) {
                simplex[hi] = contracted;
                fx[hi] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {  // shrink toward the best vertex
                    if (i == lo) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[lo][d] + 0.5 * (simplex[i][d] - simplex[lo][d]);
                    fx[i] = cost(simplex[i]);
                    ++evals;
                }
            }
        }
    }

    std::size_t lo = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fx[i] < fx[lo]) lo = i;
    return {simplex[lo], -fx[lo], evals};
}

} // namespace metrokit

#endif
