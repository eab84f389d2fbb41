#include "analytic.hpp"

#include <doctest.h>

using namespace eglab;

namespace {

// b(z) = exp(-z1^2 - z2^2): widths 1/sqrt(2) in both variables.
AnalyticSymbol unit_gaussian() {
    AnalyticSymbol a;
    a.width_x = a.width_xi = 1.0 / std::sqrt(2.0);
    return a;
}

} // namespace

TEST_CASE("strip norm of the zero symbol and the real-slice Gaussian") {
    AnalyticSymbol z = unit_gaussian();
    z.amp = 0;
    CHECK(strip_norm(z, 1.0, 1.0).value == 0.0);

    AnalyticSymbol g = unit_gaussian();
    StripNorm s = strip_norm(g, 0.0, 0.0);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("strip norm closed form: |e^{-z1^2-z2^2}|_{1,1} = e^{5/2}") {
    // Exponent optimization: the imaginary box contributes e^{2 sigma^2} at a
    // corner, each real factor sup e^{-x^2 + rho|x|} = e^{rho^2/4}.
    const double expect = std::exp(2.5);
    StripNorm s = strip_norm(unit_gaussian(), 1.0, 1.0);
    CHECK(s.value == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("strip norm is monotone in sigma and rho and dominates the real slice") {
    AnalyticSymbol a = unit_gaussian();
    a.modulated = true;
    a.freq_x = 1.0;
    double prev = 0;
    for (double sigma : {0.0, 0.3, 0.6, 0.9}) {
        double v = strip_norm(a, sigma, 0.5).value;
        CHECK(v >= prev - 1e-9 * std::max(1.0, prev));
        prev = v;
    }
    prev = 0;
    for (double rho : {0.0, 0.4, 0.8, 1.2}) {
        double v = strip_norm(a, 0.5, rho).value;
        CHECK(v >= prev - 1e-9 * std::max(1.0, prev));
        prev = v;
    }
    // value >= sup over the real slice of |b| e^{rho |x|_1}
    double real_slice = strip_norm(a, 0.0, 0.5).value;
    CHECK(strip_norm(a, 0.5, 0.5).value >= real_slice * (1 - 1e-9));
}

TEST_CASE("strip norm rejections") {
    AnalyticSymbol a = unit_gaussian();
    a.has_complex_extension = false;
    CHECK_THROWS_AS(strip_norm(a, 0.5, 0.5), DomainError);
    AnalyticSymbol b = unit_gaussian();
    b.analyticity_radius = 0.25;
    CHECK_THROWS_AS(strip_norm(b, 0.5, 0.5), DomainError);
}

TEST_CASE("Fourier-norm lemma on the unit Gaussian: measured side and printed bound") {
    PhaseGrid g{1, 256, 8.0};
    AnalyticSymbol a = unit_gaussian();
    Symbol b = sample(a, g, 0.1);
    FourierSymbol bh = forward_transform(b);
    const double sigma = 1.0, rho = 1.0, delta = 0.5;
    double measured = fourier_strip_norm(bh, sigma, rho, delta);
    const double lhs_bound = (2.0 / pi) * (1.0 / (delta * delta)) * std::exp(2.5);
    CHECK(measured <= lhs_bound); // = (2/pi) delta^{-2} |b|_{1,1} ~ 31.02
    CHECK(measured > 0);
    // closed form of the measured side: bhat = e^{-|k|^2/4}/2 (supremum over
    // the shifted contour at the corner, per-axis exponent max at k = 2)
    const double closed = 0.5 * std::exp(2.0 + 0.125);
    CHECK(measured == doctest::Approx(closed).epsilon(0.02));
}

TEST_CASE("Fourier-norm lemma rejections and the zero symbol") {
    PhaseGrid g{1, 64, 6.0};
    AnalyticSymbol a = unit_gaussian();
    a.amp = 0;
    FourierSymbol zh = forward_transform(sample(a, g, 0.1));
    CHECK(fourier_strip_norm(zh, 0.5, 1.0, 0.25) == 0.0);
    CHECK_THROWS_AS(fourier_strip_norm(zh, 0.5, 1.0, 1.0), DomainError);  // delta >= rho
    CHECK_THROWS_AS(fourier_strip_norm(zh, 0.5, 1.0, -0.1), DomainError); // delta <= 0
}

TEST_CASE("Fourier-norm inequality across a small symbol family") {
    PhaseGrid g{1, 256, 9.0};
    std::vector<AnalyticSymbol> family;
    family.push_back(unit_gaussian());
    AnalyticSymbol narrow = unit_gaussian();
    narrow.width_x = narrow.width_xi = 0.2;
    family.push_back(narrow);
    AnalyticSymbol shifted = unit_gaussian();
    shifted.center_x = 1.2;
    family.push_back(shifted);
    AnalyticSymbol mod = unit_gaussian();
    mod.modulated = true;
    mod.freq_xi = 2.0;
    family.push_back(mod);
    for (const auto& a : family) {
        Symbol b = sample(a, g, 0.1);
        FourierSymbol bh = forward_transform(b);
        for (double sigma : {0.25, 0.5}) {
            for (double rho : {0.4, 0.8}) {
                for (double delta : {rho / 4, rho / 2}) {
                    double lhs = fourier_strip_norm(bh, sigma, rho, delta);
                    double rhs = (2.0 / pi) / (delta * delta) * strip_norm(a, sigma, rho).value;
                    CHECK(lhs <= rhs * (1 + 1e-9));
                }
            }
        }
    }
}

TEST_CASE("grid strip norm agrees with the analytic sampler on a Gaussian") {
    PhaseGrid g{1, 256, 8.0};
    AnalyticSymbol a = unit_gaussian();
    Symbol b = sample(a, g, 0.1);
    double from_grid = grid_strip_norm(b, 0.3, 0.3);
    double from_spec = strip_norm(a, 0.3, 0.3).value;
    CHECK(from_grid == doctest::Approx(from_spec).epsilon(0.02));
}
