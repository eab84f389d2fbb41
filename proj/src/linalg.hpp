#ifndef EGLAB_LINALG_HPP
#define EGLAB_LINALG_HPP

#include "common.hpp"

namespace eglab {

// Dense complex square matrix, column-major (BLAS/LAPACK layout):
// a[i + j*n] = entry (row i, col j).
struct Matrix {
    int n = 0;
    std::vector<cdouble> a;

    Matrix() = default;
    explicit Matrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, cdouble(0)) {}
    cdouble& operator()(int i, int j) { return a[static_cast<std::size_t>(j) * n + i]; }
    const cdouble& operator()(int i, int j) const { return a[static_cast<std::size_t>(j) * n + i]; }
    static Matrix identity(int n);
};

Matrix gemm(const Matrix& A, const Matrix& B);           // A * B
Matrix gemm_adjoint_left(const Matrix& A, const Matrix& B); // A^dagger * B
Matrix adjoint(const Matrix& A);
Matrix add(const Matrix& A, const Matrix& B, cdouble beta = 1.0); // A + beta*B
void gemv(const Matrix& A, const cdouble* x, cdouble* y, bool adjoint_a = false); // y = A x
double frobenius(const Matrix& A);
double hermiticity_defect(const Matrix& A); // ||A - A^dagger||_F
void hermitize(Matrix& A);                  // A <- (A + A^dagger)/2

// Hermitian eigendecomposition A = V diag(w) V^dagger (ascending eigenvalues).
struct Eigensystem {
    std::vector<double> w;
    Matrix v;
};
Eigensystem eigh(const Matrix& A);

// Largest singular value by power iteration on A^dagger A, with deterministic
// start vectors. rel_tol is on the singular-value estimate.
struct PowerIterResult {
    double sigma = 0;
    int iterations = 0;
    bool converged = false;
};
PowerIterResult power_iteration_norm(const Matrix& A, double rel_tol = 1e-9, int max_iter = 10000);

} // namespace eglab

#endif
