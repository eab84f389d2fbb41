#ifndef EGLAB_QUANTUM_HPP
#define EGLAB_QUANTUM_HPP

#include "hamiltonian.hpp"
#include "linalg.hpp"

#include <memory>
#include <mutex>

namespace eglab {

// Dense operator on a position grid. Immutable after construction; the
// eigendecomposition is computed once on demand and shared read-only.
struct QuantumOperator {
    PositionGrid grid;
    Matrix mat;
    bool hermitian = false;

    std::shared_ptr<const Eigensystem> eigensystem() const;

    // lazily filled decomposition cache
    mutable std::shared_ptr<const Eigensystem> eig_cache;
    mutable std::shared_ptr<std::mutex> eig_mtx = std::make_shared<std::mutex>();
};

// Weyl quantization. Symbols carrying a quadratic tag are quantized exactly
// (diagonal + spectral multiplier + symmetrized cross term); generic decaying
// symbols are assembled as a Fourier superposition of exact displacement
// operators Op(e^{i<k,z>}) = e^{i(k_x X + k_xi P)} on the grid. The
// assembled operator satisfies ||Op(b)|| <= l1_fourier_norm_bound(b) by
// construction, which is the Lemma mechanism the tests verify.
QuantumOperator weyl_quantize(const Symbol& b);

// Op(Q) + Op(W) for a Hamiltonian model.
QuantumOperator quantize_model(const HamiltonianModel& h, const PositionGrid& g, double threshold = 1e-17);

// U(t) = exp(i H t / hbar) via the cached Hermitian eigendecomposition.
QuantumOperator propagator(const QuantumOperator& H, double t);

// B_t = U(t) B U(-t).
QuantumOperator heisenberg_evolve(const QuantumOperator& B, const QuantumOperator& H, double t);

// Reusable evolver: caches V^dagger B V so that many times t cost two
// products each.
class HeisenbergEvolver {
  public:
    HeisenbergEvolver(const QuantumOperator& B, const QuantumOperator& H);
    QuantumOperator evolve(double t) const;

  private:
    PositionGrid grid_;
    std::shared_ptr<const Eigensystem> eig_;
    Matrix btilde_;
    bool hermitian_ = false;
};

// Largest singular value via power iteration on A^dagger A (relative
// tolerance on the estimate). Throws NumericError if the iteration cap is
// reached without convergence.
double operator_norm(const QuantumOperator& A, double rel_tol = 1e-9);
double operator_norm(const Matrix& A, double rel_tol = 1e-9);

// (2pi)^{-n} * dk^2 * sum |bhat| — the L1 Fourier bound dominating the
// operator norm of the quantization.
double l1_fourier_norm_bound(const Symbol& r);

// Weyl symbol extracted from the operator kernel (the inverse direction),
// used as an oracle: b(x_i, xi) = 2 sum_k B[i+k, i-k] e^{-2ikh xi / hbar}.
Symbol weyl_symbol_of(const QuantumOperator& A, const PhaseGrid& g);

// Minimum admissible hbar for a symbol on its grid (momentum band must cover
// the symbol's xi-support at relative level `support_level`).
double min_admissible_hbar(const Symbol& b, double support_level = 1e-9);

QuantumOperator operator_add(const QuantumOperator& A, const QuantumOperator& B, cdouble beta = 1.0);

void save_operator(const QuantumOperator& A, const std::string& path);
QuantumOperator load_operator(const std::string& path);

} // namespace eglab

#endif
