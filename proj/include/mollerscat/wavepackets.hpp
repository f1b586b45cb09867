#pragma once

#include <Eigen/Dense>

#include "mollerscat/grid.hpp"

namespace moller {

/// Minimum-uncertainty Gaussian packet: center x0, position spread dx0,
/// signed central momentum k0. Momentum spread is 1/(2*dx0).
struct GaussianSpec {
    double x0 = 0.0;
    double dx0 = 1.0;
    double k0 = 0.0;
    /// Maximum probability mass allowed on the sign of k opposite to k0.
    double purity_tol = 1e-4;

    /// Closed-form fraction of |psi(k)|^2 mass on the wrong momentum sign.
    double wrong_sign_fraction() const;
};

/// psi(x) = (2 pi dx0^2)^{-1/4} exp[-(x-x0)^2/(4 dx0^2) + i k0 (x-x0)],
/// evaluated on the grid and renormalized.
WaveFunction gaussian_position(const GaussianSpec& g, const Grid1D& grid);

/// The same packet written directly in the momentum representation,
/// consistent with to_momentum(gaussian_position(g)).
WaveFunction gaussian_momentum(const GaussianSpec& g, const Grid1D& grid);

/// Pointwise evaluation of the position-space Gaussian (no renormalization).
cplx gaussian_amplitude(const GaussianSpec& g, double x);

/// Vibrational eigenbasis of a diatomic potential slice, built in the Morse
/// eigenbasis of a least-squares Morse fit and then diagonalized.
struct VibrationalBasis {
    Grid1D rgrid;
    double de = 0.0;   // fitted well depth
    double a = 0.0;    // fitted range parameter
    double re = 0.0;   // fitted equilibrium distance
    double v_asym = 0.0; // asymptote of the slice (energy reference of de)
    double mu = 0.0;
    Eigen::MatrixXcd eigenstates; // column v = eigenstate on rgrid
    rvec eigenvalues;             // absolute energies, nondecreasing

    std::size_t n_states() const { return eigenvalues.size(); }
    WaveFunction state(std::size_t v) const;
};

struct VibrationalParams {
    double mu = 1.0;          // vibrational reduced mass (hbar = 1 grid units)
    std::size_t n_basis = 8;  // Morse basis size
};

VibrationalBasis build_vibrational_basis(const Grid1D& rgrid, const rvec& slice,
                                         const VibrationalParams& params);

/// Closed-form Morse levels measured from the well minimum:
/// E_v = w(v+1/2) - w^2 (v+1/2)^2 / (4 De), w = a sqrt(2 De / mu).
double morse_level(double de, double a, double mu, std::size_t v);

/// Arrangement-channel metadata: which channel, which vibrational state,
/// the translational packet, and its momentum-expansion coefficients
/// eta(k) on the sorted momentum grid of `tgrid`.
struct ChannelSpec {
    int id = 1;          // 1 = reactant, 2 = product
    int v = 0;           // vibrational quantum number (0 in the 1D problems)
    GaussianSpec gaussian;
    Grid1D tgrid;        // translational grid eta lives on
    cvec eta;            // sorted-k order, sum |eta|^2 dk = 1
    double mu = 1.0;     // translational reduced mass
    double e_internal = 0.0; // channel internal energy (vibrational eigenvalue)
    int k_sign = 1;

    /// Closed-form eta(k) of the Gaussian packet (consistent with the
    /// gridded coefficients to packet-containment accuracy); zero outside
    /// the grid's momentum range.
    cplx eta_at(double k) const;
};

ChannelSpec make_channel(int id, int v, const GaussianSpec& g, const Grid1D& tgrid,
                         double mu, double e_internal);

struct ProductState {
    WaveFunction psi; // 2D bond-coordinate wavefunction, unit norm
    /// Probability mass inside the interaction region; the Moller module
    /// requires tau0 > 0 when this exceeds its threshold.
    double interaction_overlap = 0.0;
};

/// Translational Gaussian (in R_gamma) times vibrational eigenstate (in
/// r_gamma), expressed on the (X, Y) bond grid. `x_interaction` marks the
/// edge of the interaction region along the channel's translational bond
/// coordinate, used only for the overlap diagnostic. `edge_tol` bounds the
/// probability mass allowed in the grid's edge band; on large boxes the
/// band (a fixed 1/32 of each axis) can legitimately cover the inner vib
/// region, so callers may relax it.
ProductState channel_product_state(const ChannelSpec& c, const VibrationalBasis& vib,
                                   const Grid2D& grid2, double x_interaction = 4.0,
                                   double edge_tol = 1e-6);

} // namespace moller
