#pragma once

#include <cmath>
#include <functional>
#include <sstream>

#include "cogarq/errors.hpp"

namespace cogarq {

struct Root {
    double x = 0.0;
    double value = 0.0;  // f(x)
    int iterations = 0;
};

/// Bisection for a monotone f on [lo, hi] with f(lo), f(hi) of opposite sign
/// (either endpoint may already be within tol of zero).
/// Stops when |f(x)| <= tol, when the bracket is narrower than 1e-14, or
/// after 200 halvings. Throws BracketError if zero is not bracketed.
inline Root bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr int kMaxIterations = 200;
    constexpr double kMinWidth = 1e-14;

    double flo = f(lo);
    if (std::abs(flo) <= tol) return {lo, flo, 0};
    double fhi = f(hi);
    if (std::abs(fhi) <= tol) return {hi, fhi, 0};
    if ((flo < 0.0) == (fhi < 0.0)) {
        std::ostringstream err;
        err << "bisect_root: no sign change on [" << lo << ", " << hi << "] (f=" << flo << ", " << fhi << ")";
        throw BracketError(err.str());
    }

    Root best{lo, flo, 0};
    for (int it = 1; it <= kMaxIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        best = {mid, fm, it};
        if (std::abs(fm) <= tol) break;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= kMinWidth) break;
    }
    return best;
}

}  // namespace cogarq
