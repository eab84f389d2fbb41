#include "linalg.hpp"

#include <cblas.h>

#include <complex>
#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include <cmath>

namespace eglab {

Matrix Matrix::identity(int n) {
    Matrix I(n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Matrix gemm(const Matrix& A, const Matrix& B) {
    if (A.n != B.n) throw DomainError("gemm: dimension mismatch");
    Matrix C(A.n);
    const cdouble one(1), zero(0);
    cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, A.n, A.n, A.n, &one, A.a.data(), A.n,
                B.a.data(), B.n, &zero, C.a.data(), C.n);
    return C;
}

Matrix gemm_adjoint_left(const Matrix& A, const Matrix& B) {
    if (A.n != B.n) throw DomainError("gemm: dimension mismatch");
    Matrix C(A.n);
    const cdouble one(1), zero(0);
    cblas_zgemm(CblasColMajor, CblasConjTrans, CblasNoTrans, A.n, A.n, A.n, &one, A.a.data(), A.n,
                B.a.data(), B.n, &zero, C.a.data(), C.n);
    return C;
}

Matrix adjoint(const Matrix& A) {
    Matrix B(A.n);
    for (int j = 0; j < A.n; ++j)
        for (int i = 0; i < A.n; ++i) B(j, i) = std::conj(A(i, j));
    return B;
}

Matrix add(const Matrix& A, const Matrix& B, cdouble beta) {
    if (A.n != B.n) throw DomainError("add: dimension mismatch");
    Matrix C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += beta * B.a[i];
    return C;
}

void gemv(const Matrix& A, const cdouble* x, cdouble* y, bool adjoint_a) {
    const cdouble one(1), zero(0);
    cblas_zgemv(CblasColMajor, adjoint_a ? CblasConjTrans : CblasNoTrans, A.n, A.n, &one,
                A.a.data(), A.n, x, 1, &zero, y, 1);
}

double frobenius(const Matrix& A) {
    double s = 0;
    for (const auto& v : A.a) s += std::norm(v);
    return std::sqrt(s);
}

double hermiticity_defect(const Matrix& A) {
    double s = 0;
    for (int j = 0; j < A.n; ++j)
        for (int i = 0; i <= j; ++i) {
            cdouble d = A(i, j) - std::conj(A(j, i));
            s += (i == j ? 1.0 : 2.0) * std::norm(d);
        }
    return std::sqrt(s);
}

void hermitize(Matrix& A) {
    for (int j = 0; j < A.n; ++j) {
        for (int i = 0; i < j; ++i) {
            cdouble m = 0.5 * (A(i, j) + std::conj(A(j, i)));
            A(i, j) = m;
            A(j, i) = std::conj(m);
        }
        A(j, j) = cdouble(A(j, j).real(), 0.0);
    }
}

Eigensystem eigh(const Matrix& A) {
    Eigensystem e;
    e.v = A;
    e.w.resize(A.n);
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', A.n, e.v.a.data(), A.n, e.w.data());
    if (info != 0) throw NumericError("zheevd failed with info = " + std::to_string(info));
    return e;
}

PowerIterResult power_iteration_norm(const Matrix& A, double rel_tol, int max_iter) {
    PowerIterResult res;
    const int n = A.n;
    if (n == 0) return res;
    std::vector<cdouble> v(n), w(n), u(n);
    // Deterministic, structureless start vector.
    for (int i = 0; i < n; ++i)
        v[i] = cdouble(1.0 + 0.37 * std::sin(2.7 * i + 0.4), 0.21 * std::cos(1.3 * i));
    double nv = 0;
    for (auto& c : v) nv += std::norm(c);
    nv = std::sqrt(nv);
    for (auto& c : v) c /= nv;
    double sigma_prev = -1;
    int stable = 0;
    for (int it = 1; it <= max_iter; ++it) {
        gemv(A, v.data(), w.data(), false);
        gemv(A, w.data(), u.data(), true);
        double nu = 0;
        for (auto& c : u) nu += std::norm(c);
        nu = std::sqrt(nu);
        double nw = 0;
        for (auto& c : w) nw += std::norm(c);
        double sigma = std::sqrt(nw); // ||Av|| with ||v|| = 1
        res.iterations = it;
        if (nu == 0) {
            res.sigma = 0;
            res.converged = true;
            return res;
        }
        for (int i = 0; i < n; ++i) v[i] = u[i] / nu;
        if (sigma_prev >= 0 && std::abs(sigma - sigma_prev) <= rel_tol * std::max(sigma, 1e-300)) {
            if (++stable >= 3) {
                res.sigma = sigma;
                res.converged = true;
                return res;
            }
        } else {
            stable = 0;
        }
        sigma_prev = sigma;
    }
    res.sigma = sigma_prev < 0 ? 0 : sigma_prev;
    res.converged = false;
    return res;
}

} // namespace eglab
