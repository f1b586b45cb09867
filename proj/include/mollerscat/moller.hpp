#pragma once

#include "mollerscat/propagation.hpp"
#include "mollerscat/wavepackets.hpp"

namespace moller {

/// Scattering state obtained by the finite-time Moller map applied to an
/// asymptotic channel packet.
struct MollerState {
    WaveFunction psi;
    ChannelSpec channel;
    int sign = +1;    // +1: reactant (Omega_+), -1: product (Omega_-)
    double tau0 = 0.0;
};

/// Finite-time realization of the Moller operators. For sign +1 the packet
/// is evolved backward under the channel Hamiltonian by tau0 and then
/// forward under the full Hamiltonian by tau0; sign -1 is the time-reversed
/// counterpart.
MollerState make_moller(const WaveFunction& psi_in, const ChannelSpec& channel, int sign,
                        const Propagator& full_prop, const Propagator& h0_prop, double tau0);

MollerState make_moller(const WaveFunction& psi_in, const ChannelSpec& channel, int sign,
                        const HamiltonianOp& h_full, const HamiltonianOp& h0, double tau0,
                        const PropagatorSpec& spec);

struct Tau0Result {
    double tau0 = 0.0;
    std::vector<double> taus;       // tau values probed (doubling schedule)
    std::vector<double> residuals;  // ||Moller(2 tau) - Moller(tau)||
};

/// Smallest tau0 on the doubling schedule {0, tau_base, 2 tau_base, ...}
/// such that the Moller state stops changing (residual below tol).
Tau0Result converge_tau0(const WaveFunction& psi_in, const ChannelSpec& channel, int sign,
                         const HamiltonianOp& h_full, const HamiltonianOp& h0,
                         const PropagatorSpec& spec, double tau_base, double tol = 1e-6,
                         int max_doublings = 12);

} // namespace moller
