#include "analytic.hpp"
#include "fft.hpp"

#include <doctest.h>

#include <cstdio>
#include <sstream>

using namespace eglab;

TEST_CASE("grid invariants and dual round trip") {
    PhaseGrid g{1, 64, 6.0};
    g.validate();
    CHECK(g.spacing() * g.m == doctest::Approx(2 * g.extent).epsilon(1e-15));
    CHECK(g.dual_spacing() == doctest::Approx(pi / g.extent));
    CHECK(g.nyquist() == doctest::Approx(pi * g.m / (2 * g.extent)));
    // dual grid of the dual grid: spacing pi / nyquist-extent recovers h
    double dual_extent = g.nyquist();
    CHECK(pi / dual_extent == doctest::Approx(g.spacing()).epsilon(1e-14));

    CHECK_THROWS_AS((PhaseGrid{1, 48, 6.0}).validate(), DomainError); // not a power of two
    CHECK_THROWS_AS((PhaseGrid{1, 4, 6.0}).validate(), DomainError);  // M < 8
    CHECK_THROWS_AS((PhaseGrid{2, 64, 6.0}).validate(), DomainError); // n != 1
}

TEST_CASE("constant symbol transforms to a single dual coefficient") {
    PhaseGrid g{1, 32, 5.0};
    Symbol one = make_symbol(g, 0.1, [](double, double) { return cdouble(1.0); });
    FourierSymbol oh = forward_transform(one);
    const double weight = sqr(2 * g.extent) / (2 * pi); // grid measure under the convention
    const int c = g.m / 2;
    CHECK(std::abs(oh.values[oh.idx(c, c)] - weight) <= 1e-12 * weight);
    double off = 0;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            if (i != c || j != c) off = std::max(off, std::abs(oh.values[oh.idx(i, j)]));
    CHECK(off <= 1e-12 * weight);
}

TEST_CASE("centered Gaussian is self-dual under the unitary-angular convention") {
    PhaseGrid g{1, 128, 8.0};
    Symbol b = make_symbol(g, 0.1, [](double x, double xi) {
        return cdouble(std::exp(-(x * x + xi * xi) / 2));
    });
    FourierSymbol bh = forward_transform(b);
    double worst = 0;
    for (int i = 0; i < g.m; ++i) {
        double kx = g.dual_coord(i);
        for (int j = 0; j < g.m; ++j) {
            double kxi = g.dual_coord(j);
            double expect = std::exp(-(kx * kx + kxi * kxi) / 2);
            worst = std::max(worst, std::abs(bh.values[bh.idx(i, j)] - expect));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("cos(x) transforms to two dual deltas at k = +-1") {
    // L = 4pi makes the frequency 1 a grid mode (mode number 4).
    PhaseGrid g{1, 64, 4 * pi};
    Symbol b = make_symbol(g, 0.1, [](double x, double) { return cdouble(std::cos(x)); });
    FourierSymbol bh = forward_transform(b);
    const double expect = sqr(2 * g.extent) / (2 * pi) / 2.0;
    const int c = g.m / 2;
    const int mode = 4;
    CHECK(std::abs(bh.values[bh.idx(c + mode, c)] - expect) <= 1e-10 * expect);
    CHECK(std::abs(bh.values[bh.idx(c - mode, c)] - expect) <= 1e-10 * expect);
    double rest = 0;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            if (!(j == c && (i == c + mode || i == c - mode)))
                rest = std::max(rest, std::abs(bh.values[bh.idx(i, j)]));
    CHECK(rest <= 1e-10 * expect);
}

TEST_CASE("round trip, Plancherel and Hermitian symmetry") {
    PhaseGrid g{1, 128, 7.0};
    AnalyticSymbol a;
    a.width_x = 0.6;
    a.width_xi = 0.9;
    a.center_x = 0.8;
    a.center_xi = -0.4;
    a.modulated = true;
    a.freq_x = 2.0;
    Symbol b = sample(a, g, 0.05);
    FourierSymbol bh = forward_transform(b);
    Symbol rt = inverse_transform(bh);
    CHECK(max_abs_diff(b, rt) <= 1e-12 * max_abs(b));
    CHECK(std::abs(l2_grid_norm(b) - l2_grid_norm(bh)) <= 1e-10 * l2_grid_norm(b));
    // real symbol: bhat(-k) = conj(bhat(k))
    double herm = 0;
    for (int i = 1; i < g.m; ++i)
        for (int j = 1; j < g.m; ++j) {
            cdouble v = bh.values[bh.idx(i, j)];
            cdouble w = bh.values[bh.idx(g.m - i, g.m - j)];
            herm = std::max(herm, std::abs(v - std::conj(w)));
        }
    CHECK(herm <= 1e-12 * max_abs(b));
}

TEST_CASE("spectral upsampling reproduces the trigonometric interpolant") {
    PhaseGrid g{1, 64, 6.0};
    Symbol b = make_symbol(g, 0.1, [](double x, double xi) {
        return std::exp(-(x * x + xi * xi) / 2) * std::cos(1.5 * x - 0.7 * xi);
    });
    auto fine = upsample2x(b.values, g.m);
    // coarse nodes map to even fine indices
    double worst = 0;
    for (int ix = 0; ix < g.m; ++ix)
        for (int ixi = 0; ixi < g.m; ++ixi)
            worst = std::max(worst, std::abs(fine[(2 * ix) * (2 * g.m) + 2 * ixi] -
                                             b.values[b.idx(ix, ixi)]));
    CHECK(worst <= 1e-12);
    // half-step values match the closed form (decay keeps periodization tiny)
    double h2 = g.spacing() / 2;
    double worst_half = 0;
    for (int p = 31; p < 97; p += 3) {
        for (int q = 31; q < 97; q += 3) {
            double x = -g.extent + p * h2, xi = -g.extent + q * h2;
            cdouble expect = std::exp(-(x * x + xi * xi) / 2) * std::cos(1.5 * x - 0.7 * xi);
            worst_half = std::max(worst_half, std::abs(fine[p * 2 * g.m + q] - expect));
        }
    }
    CHECK(worst_half <= 1e-10);
}

TEST_CASE("symbol container round trip and CSV shape") {
    PhaseGrid g{1, 16, 3.0};
    Symbol b = make_symbol(g, 0.2, [](double x, double xi) { return cdouble(x, xi); });
    std::string path = "/tmp/eglab_symbol_test.bin";
    save_symbol(b, path);
    Symbol r = load_symbol(path);
    CHECK(r.grid == b.grid);
    CHECK(r.hbar == b.hbar);
    CHECK(max_abs_diff(b, r) == 0.0);
    std::remove(path.c_str());

    std::ostringstream os;
    write_symbol_csv(b, os);
    std::string head = os.str().substr(0, 11);
    CHECK(head == "x,xi,re,im\n");
}
