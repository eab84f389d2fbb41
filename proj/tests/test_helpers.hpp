#ifndef EGLAB_TEST_HELPERS_HPP
#define EGLAB_TEST_HELPERS_HPP

#include "symbol.hpp"

#include <cmath>

namespace eglab::testing {

// C4 flat-top window: identically 1 on [-r0, r0], smooth roll-off to 0 at r1.
inline double flat_window(double u, double r0, double r1) {
    double a = std::abs(u);
    if (a <= r0) return 1.0;
    if (a >= r1) return 0.0;
    double s = (a - r0) / (r1 - r0);
    double s5 = s * s * s * s * s;
    double step = s5 * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
    return 1.0 - step;
}

inline Symbol windowed_symbol(const PhaseGrid& g, double hbar,
                              const std::function<double(double, double)>& core, double r0,
                              double r1) {
    Symbol b = make_symbol(g, hbar, [&](double x, double xi) {
        return cdouble(core(x, xi) * flat_window(x, r0, r1) * flat_window(xi, r0, r1));
    });
    b.real_observable = true;
    b.decaying = true;
    return b;
}

// Maximum of |a - b| over nodes where both coordinates are within radius r.
inline double interior_max_diff(const Symbol& a, const Symbol& b, double r) {
    double worst = 0;
    const int m = a.grid.m;
    for (int ix = 0; ix < m; ++ix) {
        if (std::abs(a.grid.coord(ix)) > r) continue;
        for (int ixi = 0; ixi < m; ++ixi) {
            if (std::abs(a.grid.coord(ixi)) > r) continue;
            worst = std::max(worst, std::abs(a.at(ix, ixi) - b.at(ix, ixi)));
        }
    }
    return worst;
}

} // namespace eglab::testing

#endif
