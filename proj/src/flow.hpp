#ifndef EGLAB_FLOW_HPP
#define EGLAB_FLOW_HPP

#include "hamiltonian.hpp"

#include <memory>

namespace eglab {

struct IntegratorReport {
    double tol = 0;
    long steps = 0;
    long rejected = 0;
    double max_energy_drift = 0;
    int worst_node = -1; // node with the largest energy drift
};

// Classical flow phi^t evaluated at every grid node, with optional Jacobian
// of the flow map (variational equation).
struct FlowMap {
    PhaseGrid grid;
    double t = 0;
    std::vector<double> x, xi;           // images, x-major layout
    std::vector<double> j11, j12, j21, j22; // optional
    IntegratorReport report;

    bool has_jacobian() const { return !j11.empty(); }
};

struct FlowOptions {
    double tol = 1e-11;        // local error control (rtol = atol)
    double anchor_dt = 0.25;   // deterministic anchor lattice spacing
    std::size_t cache_bytes = 512ull << 20;
    bool cache_enabled = true;
};

// Direct integration from t = 0 for every grid node. Throws NumericError on
// step-size underflow, reporting the failing node index.
FlowMap integrate_flow(const HamiltonianModel& h, const PhaseGrid& g, double t, double tol,
                       bool with_jacobian = false);

// Flow-map provider with a deterministic anchor-chained cache: anchors at
// multiples of anchor_dt are always built by chaining from t = 0 upward, and
// a requested time integrates from its floor anchor. The computation path
// depends only on (model, grid, t), never on cache state, so results are
// bit-for-bit identical with caching on or off.
class FlowEngine {
  public:
    FlowEngine(HamiltonianModel h, PhaseGrid g, FlowOptions opts = {});
    ~FlowEngine();
    FlowEngine(const FlowEngine&) = delete;
    FlowEngine& operator=(const FlowEngine&) = delete;

    std::shared_ptr<const FlowMap> map(double t);
    const HamiltonianModel& model() const;
    const PhaseGrid& grid() const;
    const FlowOptions& options() const;
    long maps_built() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class InterpOrder { cubic, quintic };

struct PullbackOptions {
    InterpOrder order = InterpOrder::quintic;
    double padding_fraction = 0.10; // margin beyond the box, relative to extent
};

// (b o phi^t)(z) = b(phi^t(z)) with off-grid images interpolated on a 2x
// spectrally upsampled lattice. Images beyond the box map to the decay
// envelope (zero) when b is decay-tagged; without the tag, images beyond the
// padded box raise NumericError unless a mask is supplied (mask marks nodes
// with trustworthy values).
Symbol pullback(const Symbol& b, const FlowMap& flow, const PullbackOptions& opts = {},
                std::vector<std::uint8_t>* mask = nullptr);

// Single complex trajectory of the holomorphic extension, for the Lemma
// "phi1" envelope checks. Returns sampled |Im z| at the requested times.
std::vector<double> complex_trajectory_im_envelope(const HamiltonianModel& h, cdouble x0,
                                                   cdouble xi0, const std::vector<double>& times,
                                                   double tol);

} // namespace eglab

#endif
