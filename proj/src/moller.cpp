#include "mollerscat/moller.hpp"

#include <cmath>

namespace moller {

MollerState make_moller(const WaveFunction& psi_in, const ChannelSpec& channel, int sign,
                        const Propagator& full_prop, const Propagator& h0_prop, double tau0) {
    if (sign != 1 && sign != -1)
        throw ConfigError("moller", "sign must be +1 (reactant) or -1 (product)");
    if (tau0 < 0.0) throw ConfigError("moller", "tau0 must be nonnegative");
    WaveFunction psi = psi_in;
    if (tau0 > 0.0) {
        double s = static_cast<double>(sign);
        h0_prop.evolve(psi, -s * tau0);
        full_prop.evolve(psi, s * tau0);
    }
    return {std::move(psi), channel, sign, tau0};
}

MollerState make_moller(const WaveFunction& psi_in, const ChannelSpec& channel, int sign,
                        const HamiltonianOp& h_full, const HamiltonianOp& h0, double tau0,
                        const PropagatorSpec& spec) {
    Propagator full_prop(h_full, spec);
    Propagator h0_prop(h0, spec);
    return make_moller(psi_in, channel, sign, full_prop, h0_prop, tau0);
}

Tau0Result converge_tau0(const WaveFunction& psi_in, const ChannelSpec& channel, int sign,
                         const HamiltonianOp& h_full, const HamiltonianOp& h0,
                         const PropagatorSpec& spec, double tau_base, double tol,
                         int max_doublings) {
    if (tau_base <= 0.0) throw ConfigError("moller", "tau_base must be positive");
    Propagator full_prop(h_full, spec);
    Propagator h0_prop(h0, spec);

    auto state_at = [&](double tau) {
        return make_moller(psi_in, channel, sign, full_prop, h0_prop, tau).psi;
    };
    auto diff_norm = [](const WaveFunction& a, const WaveFunction& b) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.amp.size(); ++j) s += std::norm(a.amp[j] - b.amp[j]);
        return std::sqrt(s * a.dvol());
    };

    Tau0Result res;
    WaveFunction prev = psi_in; // Moller(0)
    double tau_prev = 0.0;
    double tau = tau_base;
    for (int i = 0; i <= max_doublings; ++i) {
        WaveFunction cur = state_at(tau);
        double r = diff_norm(cur, prev);
        res.taus.push_back(tau);
        res.residuals.push_back(r);
        if (r < tol) {
            res.tau0 = tau_prev;
            return res;
        }
        prev = std::move(cur);
        tau_prev = tau;
        tau *= 2.0;
    }
    throw ConvergenceError("moller",
                           "Moller state did not converge within the doubling schedule",
                           res.residuals);
}

} // namespace moller
