#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>

#include "mollerscat/hamiltonian.hpp"

namespace moller {

enum class Method { exact_eigen, split_operator, trotter };

struct PropagatorSpec {
    Method method = Method::split_operator;
    double dt = 0.0;  // 0 means: use dt_max(h)
    int order = 2;    // Trotter order, one of {1, 2, 4}
    double breach_threshold = 1e-6;
    bool check_breach = true;

    void validate() const;
};

/// Cached eigendecomposition propagator: exact e^{-iHt} for any t.
/// Shared between the classical backend and the circuit oracle factors so
/// both routes use identical arithmetic.
class ExactPropagator {
public:
    explicit ExactPropagator(const HamiltonianOp& h);

    void evolve_amp(cvec& amp, double t) const;
    std::size_t dim() const { return static_cast<std::size_t>(evals_.size()); }
    const Eigen::VectorXd& eigenvalues() const { return evals_; }

private:
    Eigen::MatrixXcd evecs_;
    Eigen::VectorXd evals_;
};

/// Unified time-evolution engine for a Hamiltonian under a PropagatorSpec.
class Propagator {
public:
    Propagator(const HamiltonianOp& h, const PropagatorSpec& spec);

    /// psi <- e^{-iHt} psi (t may be negative). Raises BoundaryBreachError
    /// if probability mass reaches the grid edge during the evolution;
    /// `t_offset` only labels the reported breach time.
    void evolve(WaveFunction& psi, double t, double t_offset = 0.0) const;

    std::shared_ptr<const ExactPropagator> exact() const { return exact_; }
    const PropagatorSpec& spec() const { return spec_; }

private:
    HamiltonianOp h_;
    std::vector<HamiltonianOp> parts_;
    PropagatorSpec spec_;
    double dt_;
    std::shared_ptr<const ExactPropagator> exact_;
};

/// One-shot convenience wrapper over Propagator.
WaveFunction propagate(const WaveFunction& psi, const HamiltonianOp& h, double t,
                       const PropagatorSpec& spec);

/// A single product-formula step over ordered Hermitian summands, each of
/// which must be exactly exponentiable. Order 2 is the symmetric splitting;
/// order 4 uses the Suzuki recursion.
void trotter_step_amp(cvec& amp, std::span<const HamiltonianOp> parts, double dt, int order);
WaveFunction trotter_step(const WaveFunction& psi, std::span<const HamiltonianOp> parts,
                          double dt, int order);

/// Recommended step from the spectral-radius estimate:
/// dt <= 0.1 / (max T(k) + max |V|).
double dt_max(const HamiltonianOp& h);

} // namespace moller
