#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pf {

struct BracketError : std::runtime_error {
    double lo, hi, f_lo, f_hi;

    BracketError(const std::string& what, double lo_, double hi_, double flo, double fhi)
        : std::runtime_error(describe(what, lo_, hi_, flo, fhi)), lo(lo_), hi(hi_),
          f_lo(flo), f_hi(fhi)
    {
    }

    static std::string describe(const std::string& what, double lo, double hi, double flo,
                                double fhi)
    {
        std::ostringstream os;
        os.precision(12);
        os << what << ": f(" << lo << ") = " << flo << ", f(" << hi << ") = " << fhi;
        return os.str();
    }
};

struct Root {
    double x = 0;
    double lo = 0, hi = 0;
    double residual = 0;
    int iterations = 0;
};

// Bisection on [lo, hi] for a sign change of f. Stops when the bracket is
// narrower than xtol * max(1, |x|) or f vanishes.
template <class F>
Root bisect(F&& f, double lo, double hi, double xtol = 1e-13, int max_iter = 200,
            const char* what = "no sign change")
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0)
        return {lo, lo, lo, 0, 0};
    if (fhi == 0)
        return {hi, hi, hi, 0, 0};
    if ((flo < 0) == (fhi < 0) || std::isnan(flo) || std::isnan(fhi))
        throw BracketError(what, lo, hi, flo, fhi);
    Root r;
    int it = 0;
    while (it < max_iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = f(mid);
        ++it;
        if (fm == 0) {
            lo = hi = mid;
            flo = fhi = 0;
            break;
        }
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if (hi - lo <= xtol * std::max(1.0, std::abs(mid)))
            break;
    }
    r.lo = lo;
    r.hi = hi;
    r.x = std::abs(flo) <= std::abs(fhi) ? lo : hi;
    r.residual = std::min(std::abs(flo), std::abs(fhi));
    r.iterations = it;
    return r;
}

}
