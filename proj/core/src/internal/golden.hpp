#pragma once

#include <utility>

namespace sparsespec::internal {

/// Golden-section minimization of a unimodal f on [lo, hi] to absolute
/// tolerance `tol` in x. Returns the best evaluated (x, f(x)).
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double ratio = 0.61803398874989484820; // (sqrt(5)-1)/2
    double a = lo, b = hi;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    double best_x = f1 <= f2 ? x1 : x2;
    double best_f = f1 <= f2 ? f1 : f2;
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
            if (f1 < best_f) { best_f = f1; best_x = x1; }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
            if (f2 < best_f) { best_f = f2; best_x = x2; }
        }
    }
    return {best_x, best_f};
}

} // namespace sparsespec::internal
