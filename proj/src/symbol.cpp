#include "symbol.hpp"

#include "fft.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

namespace eglab {

void Symbol::validate() const {
    grid.validate();
    if (!(hbar > 0)) throw DomainError("Symbol: hbar must be positive");
    if (values.size() != grid.size()) throw DomainError("Symbol: value count != M^2");
    if (real_observable) {
        double mi = max_imag(*this), ma = max_abs(*this);
        if (mi > 1e-12 * (ma > 0 ? ma : 1.0))
            throw DomainError("Symbol: real-observable tag violated by imaginary part");
    }
}

Symbol make_symbol(const PhaseGrid& g, double hbar,
                   const std::function<cdouble(double, double)>& f) {
    g.validate();
    Symbol b;
    b.grid = g;
    b.hbar = hbar;
    b.values.resize(g.size());
    const int m = g.m;
    parallel_for(m, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t ix = lo; ix < hi; ++ix) {
            double x = g.coord(static_cast<int>(ix));
            for (int ixi = 0; ixi < m; ++ixi)
                b.values[ix * m + ixi] = f(x, g.coord(ixi));
        }
    });
    return b;
}

Symbol make_quadratic_symbol(const PhaseGrid& g, double hbar, const QuadraticForm& q) {
    Symbol b = make_symbol(g, hbar, [&](double x, double xi) { return cdouble(q.eval(x, xi)); });
    b.quad = q;
    b.real_observable = true;
    b.decaying = false;
    return b;
}

Symbol make_constant_symbol(const PhaseGrid& g, double hbar, double c) {
    QuadraticForm q;
    q.c0 = c;
    return make_quadratic_symbol(g, hbar, q);
}

FourierSymbol forward_transform(const Symbol& b) {
    const int m = b.grid.m;
    FourierSymbol out;
    out.grid = b.grid;
    out.hbar = b.hbar;
    out.values = b.values;
    dft_2d(out.values.data(), m, m, -1);
    // bhat(mode) = (2pi)^{-1} h^2 (-1)^{mx+mxi} DFT[b](mode mod M); rearrange to math order.
    const double h = b.grid.spacing();
    const double scale = h * h / (2 * pi);
    std::vector<cdouble> math(out.values.size());
    for (int imx = 0; imx < m; ++imx) {
        int mx = imx - m / 2;
        int sx = mx & 1;
        int jx = mx < 0 ? mx + m : mx;
        for (int imxi = 0; imxi < m; ++imxi) {
            int mxi = imxi - m / 2;
            int jxi = mxi < 0 ? mxi + m : mxi;
            double sgn = ((sx + (mxi & 1)) & 1) ? -1.0 : 1.0;
            math[static_cast<std::size_t>(imx) * m + imxi] =
                scale * sgn * out.values[static_cast<std::size_t>(jx) * m + jxi];
        }
    }
    out.values.swap(math);
    return out;
}

Symbol inverse_transform(const FourierSymbol& bh) {
    const int m = bh.grid.m;
    Symbol out;
    out.grid = bh.grid;
    out.hbar = bh.hbar;
    // b(z_j) = (2pi)^{-1} dk^2 sum_m bhat(m) e^{+i k_m z_j}; the (-1)^m factors
    // fold the math-order data back into DFT order.
    std::vector<cdouble> dftord(bh.values.size());
    for (int imx = 0; imx < m; ++imx) {
        int mx = imx - m / 2;
        int jx = mx < 0 ? mx + m : mx;
        for (int imxi = 0; imxi < m; ++imxi) {
            int mxi = imxi - m / 2;
            int jxi = mxi < 0 ? mxi + m : mxi;
            double sgn = (((mx & 1) + (mxi & 1)) & 1) ? -1.0 : 1.0;
            dftord[static_cast<std::size_t>(jx) * m + jxi] =
                sgn * bh.values[static_cast<std::size_t>(imx) * m + imxi];
        }
    }
    dft_2d(dftord.data(), m, m, +1);
    const double dk = bh.grid.dual_spacing();
    const double scale = dk * dk / (2 * pi);
    for (auto& v : dftord) v *= scale;
    out.values.swap(dftord);
    return out;
}

double max_abs(const Symbol& b) {
    double r = 0;
    for (const auto& v : b.values) r = std::max(r, std::abs(v));
    return r;
}

double max_abs_diff(const Symbol& a, const Symbol& b) {
    require_compatible(a, b);
    double r = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        r = std::max(r, std::abs(a.values[i] - b.values[i]));
    return r;
}

double max_imag(const Symbol& b) {
    double r = 0;
    for (const auto& v : b.values) r = std::max(r, std::abs(v.imag()));
    return r;
}

double l2_grid_norm(const Symbol& b) {
    double s = 0;
    for (const auto& v : b.values) s += std::norm(v);
    return std::sqrt(s) * b.grid.spacing();
}

double l2_grid_norm(const FourierSymbol& b) {
    double s = 0;
    for (const auto& v : b.values) s += std::norm(v);
    return std::sqrt(s) * b.grid.dual_spacing();
}

Symbol axpy(cdouble alpha, const Symbol& x, const Symbol& y) {
    require_compatible(x, y);
    Symbol out = y;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += alpha * x.values[i];
    out.real_observable = x.real_observable && y.real_observable && alpha.imag() == 0;
    out.decaying = x.decaying && y.decaying;
    out.quad.reset();
    return out;
}

Symbol scaled(const Symbol& x, cdouble alpha) {
    Symbol out = x;
    for (auto& v : out.values) v *= alpha;
    out.real_observable = x.real_observable && alpha.imag() == 0;
    out.quad.reset();
    return out;
}

Symbol zero_like(const Symbol& x) {
    Symbol out = x;
    std::fill(out.values.begin(), out.values.end(), cdouble(0));
    out.real_observable = true;
    out.decaying = true;
    out.quad.reset();
    return out;
}

bool is_zero(const Symbol& x) {
    for (const auto& v : x.values)
        if (v != cdouble(0)) return false;
    return true;
}

void require_compatible(const Symbol& a, const Symbol& b) {
    if (a.grid != b.grid) throw GridMismatch("symbols live on different grids");
    if (a.hbar != b.hbar) throw GridMismatch("symbols carry different hbar");
}

namespace {
constexpr std::uint32_t kSymbolMagic = 0x45475359; // "EGSY"
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kConventionTag = 1; // unitary-angular
} // namespace

void save_symbol(const Symbol& b, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw NumericError("cannot open " + path + " for writing");
    std::uint32_t head[4] = {kSymbolMagic, kVersion, static_cast<std::uint32_t>(b.grid.dof),
                             static_cast<std::uint32_t>(b.grid.m)};
    double meta[2] = {b.grid.extent, b.hbar};
    std::uint32_t conv = kConventionTag;
    os.write(reinterpret_cast<const char*>(head), sizeof head);
    os.write(reinterpret_cast<const char*>(meta), sizeof meta);
    os.write(reinterpret_cast<const char*>(&conv), sizeof conv);
    os.write(reinterpret_cast<const char*>(b.values.data()),
             static_cast<std::streamsize>(b.values.size() * sizeof(cdouble)));
    if (!os) throw NumericError("short write to " + path);
}

Symbol load_symbol(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw NumericError("cannot open " + path);
    std::uint32_t head[4];
    double meta[2];
    std::uint32_t conv;
    is.read(reinterpret_cast<char*>(head), sizeof head);
    is.read(reinterpret_cast<char*>(meta), sizeof meta);
    is.read(reinterpret_cast<char*>(&conv), sizeof conv);
    if (!is || head[0] != kSymbolMagic) throw NumericError("bad symbol container: " + path);
    if (head[1] != kVersion) throw NumericError("unsupported container version");
    if (conv != kConventionTag) throw NumericError("unsupported Fourier convention tag");
    Symbol b;
    b.grid.dof = static_cast<int>(head[2]);
    b.grid.m = static_cast<int>(head[3]);
    b.grid.extent = meta[0];
    b.hbar = meta[1];
    b.grid.validate();
    b.values.resize(b.grid.size());
    is.read(reinterpret_cast<char*>(b.values.data()),
            static_cast<std::streamsize>(b.values.size() * sizeof(cdouble)));
    if (!is) throw NumericError("truncated symbol container: " + path);
    return b;
}

void write_symbol_csv(const Symbol& b, std::ostream& os) {
    os << "x,xi,re,im\n";
    const int m = b.grid.m;
    for (int ix = 0; ix < m; ++ix)
        for (int ixi = 0; ixi < m; ++ixi) {
            const cdouble v = b.at(ix, ixi);
            os << format_g17(b.grid.coord(ix)) << ',' << format_g17(b.grid.coord(ixi)) << ','
               << format_g17(v.real()) << ',' << format_g17(v.imag()) << '\n';
        }
}

} // namespace eglab
