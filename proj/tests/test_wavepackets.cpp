#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mollerscat/constants.hpp"
#include "mollerscat/hamiltonian.hpp"
#include "mollerscat/wavepackets.hpp"

using namespace moller;

namespace {

Grid1D nuclear_grid() { return Grid1D::make(256, 0.0, 160.0 / 256.0); }

// Morse potential evaluated directly, for basis-oracle slices.
rvec morse_slice(const Grid1D& g, double de, double a, double re) {
    rvec v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        double u = 1.0 - std::exp(-a * (g.x(j) - re));
        v[j] = de * u * u - de;
    }
    return v;
}

int sign_changes(const WaveFunction& psi) {
    // Count changes of the dominant real part, ignoring near-zero tails.
    double mx = 0.0;
    for (const auto& a : psi.amp) mx = std::max(mx, std::abs(a));
    int changes = 0;
    double prev = 0.0;
    for (const auto& a : psi.amp) {
        double re = a.real();
        if (std::abs(re) < 1e-3 * mx) continue;
        if (prev != 0.0 && std::signbit(re) != std::signbit(prev)) ++changes;
        prev = re;
    }
    return changes;
}

} // namespace

TEST_CASE("gaussian packet: norm, moments and spreads") {
    Grid1D g = nuclear_grid();
    GaussianSpec spec{52.8, 4.0, -2.0};
    WaveFunction psi = gaussian_position(spec, g);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-10));

    double x_mean = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        x_mean += g.x(j) * std::norm(psi.amp[j]) * g.dx;
    CHECK(std::abs(x_mean - spec.x0) < g.dx);

    WaveFunction phi = to_momentum(psi);
    double k_mean = 0.0, k2 = 0.0;
    for (std::size_t m = 0; m < g.n; ++m) {
        double w = std::norm(phi.amp[m]) * g.dk();
        k_mean += g.k_fft(m) * w;
        k2 += g.k_fft(m) * g.k_fft(m) * w;
    }
    CHECK(std::abs(k_mean - spec.k0) < g.dk());
    double k_spread = std::sqrt(k2 - k_mean * k_mean);
    CHECK(k_spread == doctest::Approx(1.0 / (2.0 * spec.dx0)).epsilon(0.01));
}

TEST_CASE("k0 = 0 centered packet is real and even") {
    Grid1D g = Grid1D::make(128, -16.0, 0.25);
    // center on the symmetry point of the periodic grid
    GaussianSpec spec{-16.0 + 64 * 0.25, 1.2, 0.0};
    WaveFunction psi = gaussian_position(spec, g);
    for (std::size_t j = 1; j < g.n; ++j) {
        CHECK(std::abs(psi.amp[j].imag()) < 1e-12);
        CHECK(psi.amp[j].real() ==
              doctest::Approx(psi.amp[g.n - j].real()).epsilon(1e-10));
    }
}

TEST_CASE("packet geometry and purity rejection") {
    Grid1D g = nuclear_grid();
    CHECK_THROWS_AS(gaussian_position({5.0, 4.0, -2.0}, g), GeometryError); // support < 0
    CHECK_THROWS_AS(gaussian_position({52.8, 4.0, -0.01}, g), ConfigError); // impure sign
    CHECK_THROWS_AS(gaussian_position({52.8, -1.0, -2.0}, g), ConfigError);

    GaussianSpec slow{52.8, 4.0, -0.01};
    CHECK(slow.wrong_sign_fraction() > 1e-4);
    GaussianSpec fast{52.8, 4.0, -2.0};
    CHECK(fast.wrong_sign_fraction() < 1e-10);
}

TEST_CASE("vibrational basis reproduces the closed-form Morse spectrum") {
    Grid1D g = Grid1D::make(256, 0.4, 20.0 / 256.0);
    double de = 0.1744628, a = 1.02764, re = 1.40083;
    double mu = constants::hydrogen_mass_au / 2.0;
    VibrationalBasis basis = build_vibrational_basis(g, morse_slice(g, de, a, re), {mu, 8});

    CHECK(basis.de == doctest::Approx(de).epsilon(1e-4));
    CHECK(basis.a == doctest::Approx(a).epsilon(1e-4));
    CHECK(basis.re == doctest::Approx(re).epsilon(1e-4));

    for (std::size_t v = 0; v < 4; ++v) {
        double exact = morse_level(de, a, mu, v) - de; // absolute, asymptote at 0
        CHECK(basis.eigenvalues[v] == doctest::Approx(exact).epsilon(1e-6));
    }
    for (std::size_t v = 1; v < basis.n_states(); ++v)
        CHECK(basis.eigenvalues[v] >= basis.eigenvalues[v - 1]);

    // orthonormality under the grid inner product
    for (std::size_t u = 0; u < basis.n_states(); ++u)
        for (std::size_t v = 0; v <= u; ++v) {
            cplx ov = inner_product(basis.state(u), basis.state(v));
            CHECK(std::abs(ov - (u == v ? 1.0 : 0.0)) < 1e-10);
        }

    // oscillation theorem
    CHECK(sign_changes(basis.state(0)) == 0);
    CHECK(sign_changes(basis.state(1)) == 1);
}

TEST_CASE("near-harmonic slice has near-uniform level spacing") {
    Grid1D g = Grid1D::make(256, 0.4, 20.0 / 256.0);
    // deep well => tiny anharmonicity over the lowest levels
    double de = 2.0, a = 0.4, re = 3.0;
    double mu = constants::hydrogen_mass_au / 2.0;
    VibrationalBasis basis = build_vibrational_basis(g, morse_slice(g, de, a, re), {mu, 6});
    double gap0 = basis.eigenvalues[1] - basis.eigenvalues[0];
    double gap1 = basis.eigenvalues[2] - basis.eigenvalues[1];
    CHECK(gap1 == doctest::Approx(gap0).epsilon(0.02));
}

TEST_CASE("channel eta coefficients: normalization and closed form") {
    Grid1D g = nuclear_grid();
    GaussianSpec spec{52.8, 4.0, -2.0};
    ChannelSpec c = make_channel(1, 0, spec, g, constants::two_nucleon_mu_eff, 0.0);
    double s = 0.0;
    for (const auto& e : c.eta) s += std::norm(e);
    CHECK(s * g.dk() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.k_sign == -1);

    // closed-form eta_at agrees with the gridded coefficients at grid momenta
    rvec ks = g.k_sorted();
    for (std::size_t i = 0; i < ks.size(); i += 7) {
        cplx grid_eta = c.eta[i];
        cplx analytic = c.eta_at(ks[i]);
        CHECK(std::abs(grid_eta - analytic) < 1e-8);
    }
}

TEST_CASE("channel product states on the bond grid") {
    Grid1D ax = Grid1D::make(64, 0.0, 16.0 / 64.0);
    Grid2D g2{ax, ax};
    CollinearPES pes = make_leps_pes();
    double mu_vib = constants::hydrogen_mass_au / 2.0;
    double mu_tr = 2.0 * constants::hydrogen_mass_au / 3.0;
    VibrationalBasis vib = build_vibrational_basis(ax, pes.asymptotic_slice(1, ax), {mu_vib, 6});

    GaussianSpec gsp{8.0, 1.0, -6.0};
    ChannelSpec c0 = make_channel(1, 0, gsp, ax, mu_tr, vib.eigenvalues[0]);
    ChannelSpec c1 = make_channel(1, 1, gsp, ax, mu_tr, vib.eigenvalues[1]);
    ProductState p0 = channel_product_state(c0, vib, g2);
    ProductState p1 = channel_product_state(c1, vib, g2);

    CHECK(p0.psi.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(inner_product(p0.psi, p1.psi)) < 1e-10); // vibrational orthogonality

    // density concentrated at large X, localized in Y near r_e
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t ix = 0; ix < ax.n; ++ix)
        for (std::size_t iy = 0; iy < ax.n; ++iy) {
            double w = std::norm(p0.psi.amp[g2.index(ix, iy)]) * p0.psi.dvol();
            x_mean += ax.x(ix) * w;
            y_mean += ax.x(iy) * w;
        }
    CHECK(y_mean == doctest::Approx(1.40083).epsilon(0.05));
    CHECK(x_mean > 6.0); // translational center minus half the bond offset

    // v=1 has a node along the vibrational coordinate: count lobes in a column
    std::size_t ix_peak = 0;
    double best = 0.0;
    for (std::size_t ix = 0; ix < ax.n; ++ix) {
        double col = 0.0;
        for (std::size_t iy = 0; iy < ax.n; ++iy)
            col += std::norm(p1.psi.amp[g2.index(ix, iy)]);
        if (col > best) {
            best = col;
            ix_peak = ix;
        }
    }
    // the translational factor carries a Y-dependent phase, so count
    // magnitude lobes instead of sign changes
    auto lobes = [&](const WaveFunction& psi2, std::size_t ix) {
        rvec mag(ax.n);
        double mx = 0.0;
        for (std::size_t iy = 0; iy < ax.n; ++iy) {
            mag[iy] = std::abs(psi2.amp[g2.index(ix, iy)]);
            mx = std::max(mx, mag[iy]);
        }
        int count = 0;
        bool in_lobe = false;
        for (double m : mag) {
            bool high = m > 0.3 * mx;
            if (high && !in_lobe) ++count;
            in_lobe = high;
        }
        return count;
    };
    CHECK(lobes(p0.psi, ix_peak) == 1);
    CHECK(lobes(p1.psi, ix_peak) == 2);
}

TEST_CASE("morse fit failure carries a residual report") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    rvec flat(g.n, 1.0); // no minimum to fit
    CHECK_THROWS_AS(build_vibrational_basis(g, flat, {1.0, 4}), EngineError);
}
