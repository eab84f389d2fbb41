#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace eglab {

namespace {

std::mutex g_plan_mtx;

struct PlanKey {
    int n0, n1, sign, rows; // rows: 0 = full 2d (or 1d when n0==1), 1 = row batch
    bool operator<(const PlanKey& o) const {
        if (n0 != o.n0) return n0 < o.n0;
        if (n1 != o.n1) return n1 < o.n1;
        if (sign != o.sign) return sign < o.sign;
        return rows < o.rows;
    }
};

struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t len = 0;
    std::mutex mtx; // buffer is shared per plan; serialize its use
};

std::map<PlanKey, PlanEntry>& plan_table() {
    static std::map<PlanKey, PlanEntry> t;
    return t;
}

PlanEntry& get_plan(const PlanKey& key) {
    std::lock_guard<std::mutex> g(g_plan_mtx);
    auto& t = plan_table();
    auto it = t.find(key);
    if (it != t.end()) return it->second;
    PlanEntry& e = t[key];
    e.len = static_cast<std::size_t>(key.n0) * key.n1;
    e.buf = fftw_alloc_complex(e.len);
    if (!e.buf) throw NumericError("fftw allocation failed");
    if (key.rows) {
        int n = key.n1;
        e.plan = fftw_plan_many_dft(1, &n, key.n0, e.buf, nullptr, 1, key.n1, e.buf,
                                    nullptr, 1, key.n1, key.sign, FFTW_ESTIMATE);
    } else if (key.n0 == 1) {
        e.plan = fftw_plan_dft_1d(key.n1, e.buf, e.buf, key.sign, FFTW_ESTIMATE);
    } else {
        e.plan = fftw_plan_dft_2d(key.n0, key.n1, e.buf, e.buf, key.sign, FFTW_ESTIMATE);
    }
    if (!e.plan) throw NumericError("fftw plan creation failed");
    return e;
}

void run_plan(const PlanKey& key, cdouble* data) {
    PlanEntry& e = get_plan(key);
    std::lock_guard<std::mutex> g(e.mtx);
    std::memcpy(static_cast<void*>(e.buf), static_cast<const void*>(data),
                e.len * sizeof(cdouble));
    fftw_execute(e.plan);
    std::memcpy(static_cast<void*>(data), static_cast<const void*>(e.buf),
                e.len * sizeof(cdouble));
}

} // namespace

void dft_2d(cdouble* data, int n0, int n1, int sign) {
    run_plan(PlanKey{n0, n1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, 0}, data);
}

void dft_1d(cdouble* data, int n, int sign) {
    run_plan(PlanKey{1, n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, 0}, data);
}

void dft_rows(cdouble* data, int n0, int n1, int sign) {
    run_plan(PlanKey{n0, n1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, 1}, data);
}

std::vector<cdouble> upsample2x(const std::vector<cdouble>& values, int m) {
    if (values.size() != static_cast<std::size_t>(m) * m)
        throw DomainError("upsample2x: size mismatch");
    std::vector<cdouble> spec(values);
    dft_2d(spec.data(), m, m, -1);
    const int m2 = 2 * m;
    std::vector<cdouble> out(static_cast<std::size_t>(m2) * m2, cdouble(0));
    const double scale = 4.0 / (static_cast<double>(m) * m); // (2M)^2 / M^2 / (M^2) backward norm
    // Place DFT modes [-M/2, M/2) into the 2M spectrum; split the Nyquist row
    // evenly to keep real inputs real.
    auto src_idx = [m](int k) { return k < 0 ? k + m : k; };
    auto dst_idx = [m2](int k) { return k < 0 ? k + m2 : k; };
    for (int kx = -m / 2; kx < m / 2; ++kx) {
        for (int ky = -m / 2; ky < m / 2; ++ky) {
            cdouble v = spec[static_cast<std::size_t>(src_idx(kx)) * m + src_idx(ky)];
            double wx = (kx == -m / 2) ? 0.5 : 1.0;
            double wy = (ky == -m / 2) ? 0.5 : 1.0;
            int dxs[2] = {kx, kx == -m / 2 ? m / 2 : kx};
            int dys[2] = {ky, ky == -m / 2 ? m / 2 : ky};
            for (int a = 0; a < (kx == -m / 2 ? 2 : 1); ++a)
                for (int b = 0; b < (ky == -m / 2 ? 2 : 1); ++b)
                    out[static_cast<std::size_t>(dst_idx(dxs[a])) * m2 + dst_idx(dys[b])] +=
                        v * wx * wy;
        }
    }
    dft_2d(out.data(), m2, m2, +1);
    const double norm = scale * 0.25; // net: 1/M^2
    for (auto& v : out) v *= norm;
    return out;
}

} // namespace eglab
