#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "mollerscat/pauli.hpp"
#include "mollerscat/propagation.hpp"

namespace moller {

/// Statevector over n qubits, unit 2-norm. Basis index bits are
/// little-endian: bit q of the index is qubit q.
struct QState {
    std::size_t n_qubits = 0;
    cvec amp;

    static QState vacuum(std::size_t n_qubits);
    double norm() const;
};

/// Binary grid encoding of a wavefunction: basis index j holds the
/// continuum amplitude at grid index j (sorted-k index for momentum-
/// representation states), rescaled to vector norm 1. Requires a
/// power-of-two grid.
QState encode_state(const WaveFunction& psi);

/// Channel-register layout: vibrational index on the high qubits, the 2^m
/// momentum coefficients eta(k) (sorted order) on the low m qubits.
/// basis index = v * 2^m + k_index.
QState encode_channel_state(std::size_t vib_index, std::size_t n_vib_qubits, const cvec& eta);

/// A unitary factor of a composite operator, applied in-place to a
/// statevector of the register dimension.
class UnitaryOp {
public:
    using ApplyFn = std::function<void(cvec&)>;
    UnitaryOp(std::string label, std::size_t dim, ApplyFn fn)
        : label_(std::move(label)), dim_(dim), fn_(std::move(fn)) {}

    void apply(cvec& amp) const;
    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }

private:
    std::string label_;
    std::size_t dim_;
    ApplyFn fn_;
};

/// Householder completion of the target state as the first column:
/// U |00...0> = psi_target.
UnitaryOp state_prep_unitary(const cvec& psi_target);

/// Oracle-mode evolution factor e^{-iHt} from a cached eigendecomposition.
UnitaryOp exact_evolution_factor(std::shared_ptr<const ExactPropagator> prop, double t,
                                 const std::string& label = "exp(-iHt)");

/// Trotterized evolution factor over grid summands (product formula with
/// n_steps steps of the given order).
UnitaryOp trotterized_factor(const HamiltonianOp& h, double t, std::size_t n_steps, int order);

/// Trotterized evolution factor over a Pauli-string sum.
UnitaryOp trotterized_factor(const PauliSum& sum, double t, std::size_t n_steps, int order);

/// Ordered product of unitary factors; factors.front() is applied last.
struct CompositeOp {
    std::vector<UnitaryOp> factors;

    std::size_t dim() const { return factors.empty() ? 0 : factors.front().dim(); }
    void apply(cvec& amp) const;
};

enum class Part { Re, Im };

/// Modified Hadamard test: ancilla qubit 0, H (and S-dagger for the
/// imaginary part), controlled o_g on control |1>, controlled o_gp on
/// control |0>, H, then <Z> on the ancilla. Returns
/// Re or Im of <0|o_gp^dag o_g|0> exactly (statevector mode).
double hadamard_test(const CompositeOp& o_g, const CompositeOp& o_gp, Part part);

/// Ancilla |1> probability for the same circuit (the quantity shots sample).
double hadamard_test_p1(const CompositeOp& o_g, const CompositeOp& o_gp, Part part);

/// Splittable counter-based RNG (splitmix64 over (seed, stream, counter)).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
    double uniform(); // [0, 1)
    std::uint64_t next_u64();

private:
    std::uint64_t seed_, stream_, counter_ = 0;
};

struct ShotEstimate {
    double estimate = 0.0; // of <Z> = 1 - 2 p1
    double stderr_est = 0.0;
    std::uint64_t count1 = 0;
    std::uint64_t n_shots = 0;
};

/// Binomial sampling of the ancilla: estimate = 1 - 2 count1/n,
/// stderr = 2 sqrt(p(1-p)/n) with p the observed frequency.
ShotEstimate sample_shots(double p1, std::uint64_t n_shots, std::uint64_t seed,
                          std::uint64_t stream = 0);

/// Shots needed for absolute error eps at confidence 1-delta
/// (Hoeffding/Chernoff bound for a +-1 observable: n = 2 ln(2/delta)/eps^2).
std::uint64_t shot_plan(double eps, double delta = 0.05);

} // namespace moller
