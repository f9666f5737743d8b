#pragma once

#include <cmath>
#include <utility>

namespace contam::detail {

// Golden-section minimization of f on [lo, hi]; stops once the bracket is no
// wider than stop(lo, hi) says. Returns (argmin, min). The evaluation schedule
// depends only on the inputs, so results are reproducible.
template <class F, class Stop>
std::pair<double, double> golden_section(F&& f, double lo, double hi, Stop&& stop,
                                         int max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && !stop(a, b); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

} // namespace contam::detail
