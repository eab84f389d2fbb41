#include "quantum.hpp"

#include "fft.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace eglab {

std::shared_ptr<const Eigensystem> QuantumOperator::eigensystem() const {
    std::lock_guard<std::mutex> g(*eig_mtx);
    if (!eig_cache) {
        if (!hermitian) throw DomainError("eigensystem: operator is not Hermitian");
        eig_cache = std::make_shared<const Eigensystem>(eigh(mat));
    }
    return eig_cache;
}

namespace {

// Dirichlet kernel of the symmetric mode set [-M/2, M/2):
// (1/M) sum_r e^{i r phi} = e^{-i phi/2} sin(M phi/2) / (M sin(phi/2)).
// For even M the kernel is 2pi-periodic; reduce first, then evaluate.
cdouble dirichlet(double phi, int m) {
    double q = std::floor(phi / (2 * pi) + 0.5);
    double eps = phi - 2 * pi * q;
    double den = m * std::sin(0.5 * eps);
    double r = std::abs(den) < 1e-300 ? 1.0 : std::sin(0.5 * m * eps) / den;
    return std::polar(1.0, -0.5 * eps) * r;
}

Matrix quantize_quadratic(const QuadraticForm& q, const PositionGrid& pg) {
    const int m = pg.m;
    Matrix B(m);
    // momentum multiplier part g_xi * p + a_xixi * p^2 / 2 as a circulant
    std::vector<cdouble> mult(m);
    for (int r = 0; r < m; ++r) {
        double p = pg.hbar * pg.wavenumber(r);
        mult[r] = q.gxi * p + 0.5 * q.axixi * p * p;
    }
    // circulant row via inverse DFT over the symmetric mode set
    std::vector<cdouble> dftord(m);
    for (int r = 0; r < m; ++r) {
        int mode = r - m / 2;
        int jr = mode < 0 ? mode + m : mode;
        dftord[jr] = mult[r];
    }
    dft_1d(dftord.data(), m, +1);
    for (auto& v : dftord) v /= static_cast<double>(m);
    // e^{i kappa_r (x_i - x_j)} = e^{2pi i mode (i-j)/M}: circulant in (i-j) mod M
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int dd = ((i - j) % m + m) % m;
            B(i, j) += dftord[dd];
        }
    for (int i = 0; i < m; ++i) {
        double x = pg.coord(i);
        B(i, i) += q.c0 + q.gx * x + 0.5 * q.axx * x * x;
    }
    if (q.axxi != 0) {
        // (X P + P X)/2 with P the spectral momentum circulant
        std::vector<cdouble> pord(m);
        for (int r = 0; r < m; ++r) {
            int mode = r - m / 2;
            int jr = mode < 0 ? mode + m : mode;
            pord[jr] = pg.hbar * pg.wavenumber(r);
        }
        dft_1d(pord.data(), m, +1);
        for (auto& v : pord) v /= static_cast<double>(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                int dd = ((i - j) % m + m) % m;
                B(i, j) += 0.5 * q.axxi * (pg.coord(i) + pg.coord(j)) * pord[dd];
            }
    }
    hermitize(B);
    return B;
}

Matrix quantize_generic(const Symbol& b, const PositionGrid& pg, double threshold) {
    const int m = pg.m;
    const double dk = b.grid.dual_spacing();
    const double hbar = pg.hbar;
    FourierSymbol bh = forward_transform(b);
    double gmax = 0;
    for (const auto& v : bh.values) gmax = std::max(gmax, std::abs(v));
    const double cut = threshold * gmax;

    std::vector<int> rows; // significant mxi modes
    for (int imxi = 0; imxi < m; ++imxi) {
        double rmax = 0;
        for (int imx = 0; imx < m; ++imx)
            rmax = std::max(rmax, std::abs(bh.values[bh.idx(imx, imxi)]));
        if (rmax > cut) rows.push_back(imxi);
    }

    // G(mxi, i) = sum_mx bhat(mx,mxi) e^{i hbar dk^2 mx mxi / 2} e^{i mx dk x_i}
    const std::size_t nr = rows.size();
    std::vector<cdouble> G(nr * m);
    for (std::size_t rr = 0; rr < nr; ++rr) {
        int imxi = rows[rr];
        int mxi = imxi - m / 2;
        std::vector<cdouble> dftord(m, cdouble(0));
        for (int imx = 0; imx < m; ++imx) {
            int mx = imx - m / 2;
            cdouble c = bh.values[bh.idx(imx, imxi)];
            if (std::abs(c) <= cut) continue;
            c *= std::polar(1.0, 0.5 * hbar * dk * dk * mx * mxi);
            if (mx & 1) c = -c; // e^{i mx dk x_i} = (-1)^mx e^{2pi i mx i / M}
            int j = mx < 0 ? mx + m : mx;
            dftord[j] = c;
        }
        dft_1d(dftord.data(), m, +1);
        std::memcpy(&G[rr * m], dftord.data(), m * sizeof(cdouble));
    }

    // Shift kernels W(mxi, d) = dirichlet(dkappa*(d h + hbar k_xi)), d = i - j.
    std::vector<cdouble> W(nr * (2 * m - 1));
    const double h = pg.spacing();
    const double dkappa = pi / pg.extent;
    for (std::size_t rr = 0; rr < nr; ++rr) {
        double kxi = (rows[rr] - m / 2) * dk;
        for (int d = -(m - 1); d <= m - 1; ++d)
            W[rr * (2 * m - 1) + (d + m - 1)] = dirichlet(dkappa * (d * h + hbar * kxi), m);
    }

    Matrix B(m);
    const double scale = dk * dk / (2 * pi);
    parallel_for(m, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (int j = 0; j < m; ++j) {
                cdouble acc = 0;
                int d = static_cast<int>(i) - j;
                for (std::size_t rr = 0; rr < nr; ++rr)
                    acc += G[rr * m + i] * W[rr * (2 * m - 1) + (d + m - 1)];
                B(static_cast<int>(i), j) = scale * acc;
            }
        }
    });
    if (b.real_observable) hermitize(B);
    return B;
}

} // namespace

double min_admissible_hbar(const Symbol& b, double support_level) {
    // xi-support radius at relative level `support_level`
    const int m = b.grid.m;
    double gmax = max_abs(b);
    if (gmax == 0) return 0;
    double xi_sig = 0;
    for (int ixi = 0; ixi < m; ++ixi) {
        double cmax = 0;
        for (int ix = 0; ix < m; ++ix) cmax = std::max(cmax, std::abs(b.at(ix, ixi)));
        if (cmax > support_level * gmax)
            xi_sig = std::max(xi_sig, std::abs(b.grid.coord(ixi)));
    }
    return xi_sig * 2.0 * b.grid.extent / (pi * b.grid.m);
}

QuantumOperator weyl_quantize(const Symbol& b) {
    b.validate();
    PositionGrid pg = position_grid(b.grid, b.hbar);
    QuantumOperator op;
    op.grid = pg;
    if (b.quad) {
        op.mat = quantize_quadratic(*b.quad, pg);
        op.hermitian = true;
        return op;
    }
    double hmin = min_admissible_hbar(b);
    if (b.hbar < hmin)
        throw DomainError(
            "weyl_quantize: hbar too small for the grid; the momentum band does not cover the "
            "symbol (minimum admissible hbar = " +
            format_g17(hmin) + ")");
    op.mat = quantize_generic(b, pg, 1e-17);
    op.hermitian = b.real_observable;
    return op;
}

QuantumOperator quantize_model(const HamiltonianModel& h, const PositionGrid& g, double threshold) {
    QuantumOperator op;
    op.grid = g;
    op.mat = quantize_quadratic(h.quad, g);
    if (!h.w_is_zero()) {
        PhaseGrid pg{1, g.m, g.extent};
        Symbol w = h.w_symbol(pg, g.hbar);
        Matrix wm = quantize_generic(w, g, threshold);
        op.mat = add(op.mat, wm);
    }
    hermitize(op.mat);
    op.hermitian = true;
    return op;
}

QuantumOperator propagator(const QuantumOperator& H, double t) {
    auto eig = H.eigensystem();
    const int n = H.mat.n;
    Matrix scaled_v = eig->v;
    for (int j = 0; j < n; ++j) {
        cdouble ph = std::polar(1.0, eig->w[j] * t / H.grid.hbar);
        for (int i = 0; i < n; ++i) scaled_v(i, j) *= ph;
    }
    QuantumOperator U;
    U.grid = H.grid;
    U.mat = gemm(scaled_v, adjoint(eig->v));
    U.hermitian = false;
    return U;
}

HeisenbergEvolver::HeisenbergEvolver(const QuantumOperator& B, const QuantumOperator& H) {
    if (!(B.grid == H.grid)) throw GridMismatch("heisenberg: operators on different grids");
    grid_ = H.grid;
    eig_ = H.eigensystem();
    btilde_ = gemm_adjoint_left(eig_->v, gemm(B.mat, eig_->v));
    hermitian_ = B.hermitian;
}

QuantumOperator HeisenbergEvolver::evolve(double t) const {
    const int n = btilde_.n;
    Matrix phased = btilde_;
    const double s = t / grid_.hbar;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            phased(i, j) *= std::polar(1.0, (eig_->w[i] - eig_->w[j]) * s);
    QuantumOperator out;
    out.grid = grid_;
    out.mat = gemm(eig_->v, gemm(phased, adjoint(eig_->v)));
    out.hermitian = hermitian_;
    if (hermitian_) hermitize(out.mat);
    return out;
}

QuantumOperator heisenberg_evolve(const QuantumOperator& B, const QuantumOperator& H, double t) {
    return HeisenbergEvolver(B, H).evolve(t);
}

double operator_norm(const Matrix& A, double rel_tol) {
    auto res = power_iteration_norm(A, rel_tol);
    if (!res.converged)
        throw NumericError("operator_norm: power iteration did not converge in " +
                           std::to_string(res.iterations) + " iterations");
    return res.sigma;
}

double operator_norm(const QuantumOperator& A, double rel_tol) {
    return operator_norm(A.mat, rel_tol);
}

double l1_fourier_norm_bound(const Symbol& r) {
    FourierSymbol rh = forward_transform(r);
    double s = 0;
    for (const auto& v : rh.values) s += std::abs(v);
    const double dk = r.grid.dual_spacing();
    return s * dk * dk / (2 * pi);
}

Symbol weyl_symbol_of(const QuantumOperator& A, const PhaseGrid& g) {
    if (g.m != A.grid.m || g.extent != A.grid.extent)
        throw GridMismatch("weyl_symbol_of: grid mismatch");
    const int m = g.m;
    const double h = g.spacing();
    const double hbar = A.grid.hbar;
    Symbol b;
    b.grid = g;
    b.hbar = hbar;
    b.values.assign(g.size(), cdouble(0));
    parallel_for(m, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t ix = lo; ix < hi; ++ix) {
            int i = static_cast<int>(ix);
            int kmax = std::min(i, m - 1 - i);
            for (int ixi = 0; ixi < m; ++ixi) {
                double xi = g.coord(ixi);
                cdouble acc = A.mat(i, i);
                for (int k = 1; k <= kmax; ++k) {
                    double ph = -2.0 * k * h * xi / hbar;
                    acc += A.mat(i + k, i - k) * std::polar(1.0, ph) +
                           A.mat(i - k, i + k) * std::polar(1.0, -ph);
                }
                b.values[ix * m + ixi] = acc;
            }
        }
    });
    b.real_observable = A.hermitian;
    if (A.hermitian)
        for (auto& v : b.values) v = cdouble(v.real(), 0.0);
    return b;
}

QuantumOperator operator_add(const QuantumOperator& A, const QuantumOperator& B, cdouble beta) {
    if (!(A.grid == B.grid)) throw GridMismatch("operator_add: grid mismatch");
    QuantumOperator out;
    out.grid = A.grid;
    out.mat = add(A.mat, B.mat, beta);
    out.hermitian = A.hermitian && B.hermitian && beta.imag() == 0;
    return out;
}

namespace {
constexpr std::uint32_t kOpMagic = 0x45474f50; // "EGOP"
}

void save_operator(const QuantumOperator& A, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw NumericError("cannot open " + path + " for writing");
    std::uint32_t head[2] = {kOpMagic, static_cast<std::uint32_t>(A.grid.m)};
    double meta[2] = {A.grid.extent, A.grid.hbar};
    std::uint8_t herm = A.hermitian ? 1 : 0;
    os.write(reinterpret_cast<const char*>(head), sizeof head);
    os.write(reinterpret_cast<const char*>(meta), sizeof meta);
    os.write(reinterpret_cast<const char*>(&herm), 1);
    os.write(reinterpret_cast<const char*>(A.mat.a.data()),
             static_cast<std::streamsize>(A.mat.a.size() * sizeof(cdouble)));
    if (!os) throw NumericError("short write to " + path);
}

QuantumOperator load_operator(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw NumericError("cannot open " + path);
    std::uint32_t head[2];
    double meta[2];
    std::uint8_t herm;
    is.read(reinterpret_cast<char*>(head), sizeof head);
    is.read(reinterpret_cast<char*>(meta), sizeof meta);
    is.read(reinterpret_cast<char*>(&herm), 1);
    if (!is || head[0] != kOpMagic) throw NumericError("bad operator container: " + path);
    QuantumOperator A;
    A.grid = PositionGrid{static_cast<int>(head[1]), meta[0], meta[1]};
    A.grid.validate();
    A.mat = Matrix(A.grid.m);
    A.hermitian = herm != 0;
    is.read(reinterpret_cast<char*>(A.mat.a.data()),
            static_cast<std::streamsize>(A.mat.a.size() * sizeof(cdouble)));
    if (!is) throw NumericError("truncated operator container: " + path);
    return A;
}

} // namespace eglab
