#pragma once

#include "mollerscat/moller.hpp"
#include "mollerscat/qcircuit.hpp"

namespace moller {

/// Time series of the scattering correlation function
/// C(t) = <Psi_- | e^{-iHt} | Psi_+> on a uniform time grid.
struct CorrelationSeries {
    rvec times;
    cvec values;
    rvec stderrs; // per-point shot-noise estimate, empty unless sampled

    double dt() const;
};

enum class Backend { classical, statevector, sampled };

struct CorrelationSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t n_t = 0;
    Backend backend = Backend::classical;
    /// Endpoint |C| must fall below this fraction of max |C|, otherwise the
    /// horizon is too short for the Fourier transform to be trustworthy.
    double decay_threshold = 1e-3;
    bool check_decay = true;
    std::uint64_t shots = 0;     // sampled backend
    std::uint64_t seed = 0x6d6f6c6c6572ULL;

    void validate() const;
};

/// Classical reference backend: the bra state is fixed and the ket is stepped
/// across the time grid with the supplied propagator.
CorrelationSeries correlation_series(const MollerState& plus, const MollerState& minus,
                                     const Propagator& full_prop, const CorrelationSpec& spec);

/// Circuit oracles for the correlation function. o_g(t) must satisfy
/// <0| o_gp^dag o_g(t) |0> = C(t) / scale.
struct CorrelationOracles {
    std::function<CompositeOp(double)> o_g;
    CompositeOp o_gp;
    double scale = 1.0;
};

/// Standard oracle construction from the asymptotic in-states:
/// O_g(t) = e^{-iHt} e^{-iH tau0} e^{+iH0 tau0} U_r and
/// O_g' = e^{+iH tau0} e^{-iH0' tau0} U_p, with Householder state
/// preparation of the encoded packets. `scale` restores the continuum
/// normalization of C(t).
CorrelationOracles make_correlation_oracles(const WaveFunction& psi_plus_in,
                                            const WaveFunction& psi_minus_in,
                                            std::shared_ptr<const ExactPropagator> h_full,
                                            std::shared_ptr<const ExactPropagator> h0_g,
                                            std::shared_ptr<const ExactPropagator> h0_gp,
                                            double tau0);

/// Emulator backends: exact statevector expectation values, or binomial
/// shot sampling of the ancilla (deterministic in spec.seed).
CorrelationSeries correlation_series(const CorrelationOracles& oracles,
                                     const CorrelationSpec& spec);

/// Windowed Fourier transform
/// C~(E) = dt/(2 pi) sum_j w_j e^{i E t_j} C(t_j), trapezoid weights.
/// `taper_fraction` > 0 additionally applies a raised-cosine (Tukey) taper
/// over that fraction of the window at each end, suppressing the spectral
/// ringing of correlation tails (e.g. long-lived resonances) that have not
/// fully decayed by the end of the horizon.
cvec energy_transform(const CorrelationSeries& c, const rvec& energies,
                      double taper_fraction = 0.0);

/// Completes a correlation series whose tail is a single decaying mode
/// C(t) ~ A e^{-i E_res t - t/(2 tau)} (a long-lived resonance that the
/// propagation horizon cannot outlast). The model is fitted by linear least
/// squares on log C over t >= fit_start and the series is extended on the
/// same time step until t_end, so the Fourier transform sees the full
/// lineshape instead of a truncated one. Throws NumericalError when the
/// tail does not match a single decaying exponential (log-amplitude rms
/// residual above 0.1, or a non-decaying fit).
CorrelationSeries tail_complete(const CorrelationSeries& c, double fit_start, double t_end);

struct SMatrixPoint {
    double energy = 0.0;
    cplx s{0.0, 0.0};
    bool valid = false;   // false where a channel is closed or eta is too small
    double k_in = 0.0;    // signed channel momenta at this energy
    double k_out = 0.0;
};

struct SMatrixSpec {
    rvec energies;
    /// Points where |eta| of either packet falls below eta_floor * max |eta|
    /// carry no information and are masked out.
    double eta_floor = 1e-3;
    /// Raised-cosine taper fraction forwarded to energy_transform.
    double taper_fraction = 0.0;
};

/// Energy-normalized S-matrix element extracted from the correlation series:
/// S(E) = C~(E) / [ sqrt(mu mu' / (|k| |k'|)) eta_-^*(k'(E)) eta_+(k(E)) ],
/// k_gamma(E) = k_sign * sqrt(2 mu_gamma (E - E_gamma)).
std::vector<SMatrixPoint> s_matrix(const CorrelationSeries& c, const ChannelSpec& in,
                                   const ChannelSpec& out, const SMatrixSpec& spec);

/// |S(E)|^2 of the valid points (zero where masked).
rvec reaction_probability(const std::vector<SMatrixPoint>& s);

/// Energy window where both channels are open and both eta factors are above
/// the floor; convenient for building SMatrixSpec energy grids.
rvec informative_energies(const ChannelSpec& in, const ChannelSpec& out, std::size_t n,
                          double eta_floor = 1e-3);

} // namespace moller
