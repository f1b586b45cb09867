#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "mollerscat/constants.hpp"
#include "mollerscat/hamiltonian.hpp"
#include "mollerscat/propagation.hpp"
#include "mollerscat/wavepackets.hpp"

using namespace moller;

namespace {

// Analytic free dispersion of a Gaussian packet:
// psi(x,t) = (2 dx0^2/pi)^{1/4} / sqrt(2 pi) * sqrt(pi/alpha)
//            * exp(beta^2/(4 alpha) + gamma)
// with alpha = dx0^2 + i t/(2 mu), beta = i(x - x0) + 2 dx0^2 k0,
// gamma = -dx0^2 k0^2.
cplx free_gaussian(const GaussianSpec& s, double mu, double x, double t) {
    cplx alpha = s.dx0 * s.dx0 + I_UNIT * (t / (2.0 * mu));
    cplx beta = I_UNIT * (x - s.x0) + 2.0 * s.dx0 * s.dx0 * s.k0;
    double gamma = -s.dx0 * s.dx0 * s.k0 * s.k0;
    double pref = std::pow(2.0 * s.dx0 * s.dx0 / std::numbers::pi, 0.25) /
                  std::sqrt(2.0 * std::numbers::pi);
    return pref * std::sqrt(std::numbers::pi / alpha) *
           std::exp(beta * beta / (4.0 * alpha) + gamma);
}

double max_diff(const WaveFunction& a, const WaveFunction& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.amp.size(); ++j)
        d = std::max(d, std::abs(a.amp[j] - b.amp[j]));
    return d;
}

HamiltonianOp smooth_1d_hamiltonian(const Grid1D& g, double mu) {
    rvec v(g.n);
    double xc = g.x_min + 0.5 * g.n * g.dx;
    for (std::size_t j = 0; j < g.n; ++j) {
        double u = g.x(j) - xc;
        v[j] = 0.4 * std::exp(-0.5 * u * u);
    }
    return hamiltonian_1d(g, std::move(v), mu);
}

} // namespace

TEST_CASE("exact propagation matches the analytic free gaussian") {
    Grid1D g = Grid1D::make(256, -40.0, 80.0 / 256.0);
    double mu = 1.0;
    GaussianSpec spec{-8.0, 2.0, 1.5};
    WaveFunction psi = gaussian_position(spec, g);
    HamiltonianOp h = hamiltonian_1d(g, rvec(g.n, 0.0), mu);
    PropagatorSpec ps{Method::exact_eigen};
    Propagator prop(h, ps);

    for (double t : {0.5, 2.0, 6.0}) {
        WaveFunction evolved = psi;
        prop.evolve(evolved, t);
        double d = 0.0;
        for (std::size_t j = 0; j < g.n; ++j)
            d = std::max(d, std::abs(evolved.amp[j] - free_gaussian(spec, mu, g.x(j), t)));
        CHECK(d < 1e-8);
    }
}

TEST_CASE("zero-time evolution is the identity") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    HamiltonianOp h = smooth_1d_hamiltonian(g, 2.0);
    WaveFunction psi = gaussian_position({8.0, 1.2, 2.0}, g);
    for (Method m : {Method::exact_eigen, Method::split_operator, Method::trotter}) {
        PropagatorSpec ps{m};
        WaveFunction out = propagate(psi, h, 0.0, ps);
        CHECK(max_diff(out, psi) == 0.0);
    }
}

TEST_CASE("backward evolution inverts forward evolution") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    HamiltonianOp h = smooth_1d_hamiltonian(g, 2.0);
    WaveFunction psi = gaussian_position({8.0, 1.2, 2.0}, g);
    for (Method m : {Method::exact_eigen, Method::split_operator}) {
        PropagatorSpec ps{m};
        ps.check_breach = false;
        Propagator prop(h, ps);
        WaveFunction out = psi;
        prop.evolve(out, 1.7);
        prop.evolve(out, -1.7);
        CHECK(max_diff(out, psi) < 1e-9);
    }
}

TEST_CASE("norm is conserved over a thousand split-operator steps") {
    Grid1D g = Grid1D::make(256, 0.0, 160.0 / 256.0);
    double mu = constants::two_nucleon_mu_eff;
    HamiltonianOp h = hamiltonian_1d(g, well_potential(g), mu);
    double dt = dt_max(h);
    PropagatorSpec ps{Method::split_operator, dt};
    ps.check_breach = false;
    Propagator prop(h, ps);
    WaveFunction psi = gaussian_position({52.8, 4.0, -2.0}, g);
    prop.evolve(psi, 1000.0 * dt);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("energy is conserved under evolution") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    HamiltonianOp h = smooth_1d_hamiltonian(g, 2.0);
    WaveFunction psi = gaussian_position({8.0, 1.2, 2.0}, g);
    double e0 = h.expectation(psi);

    PropagatorSpec exact{Method::exact_eigen};
    exact.check_breach = false;
    WaveFunction a = propagate(psi, h, 3.0, exact);
    CHECK(std::abs(h.expectation(a) - e0) < 1e-10);

    PropagatorSpec split{Method::split_operator};
    split.check_breach = false;
    WaveFunction b = propagate(psi, h, 3.0, split);
    CHECK(std::abs(h.expectation(b) - e0) < 1e-6);
}

TEST_CASE("split-operator agrees with the exact propagator") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    HamiltonianOp h = smooth_1d_hamiltonian(g, 2.0);
    WaveFunction psi = gaussian_position({8.0, 1.2, 2.0}, g);

    PropagatorSpec exact{Method::exact_eigen};
    exact.check_breach = false;
    WaveFunction ref = propagate(psi, h, 2.0, exact);

    PropagatorSpec split{Method::split_operator, 0.25 * dt_max(h)};
    split.check_breach = false;
    WaveFunction approx = propagate(psi, h, 2.0, split);
    CHECK(max_diff(approx, ref) < 1e-6);
}

TEST_CASE("trotter error scales at the advertised order") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    HamiltonianOp h = smooth_1d_hamiltonian(g, 2.0);
    WaveFunction psi = gaussian_position({8.0, 1.2, 2.0}, g);
    auto parts = h.split_parts();
    PropagatorSpec exact{Method::exact_eigen};
    double t = 1.0;
    WaveFunction ref = propagate(psi, h, t, exact);

    auto stepped = [&](double dt, int order) {
        WaveFunction out = psi;
        auto n = static_cast<std::size_t>(std::llround(t / dt));
        for (std::size_t s = 0; s < n; ++s) trotter_step_amp(out.amp, parts, dt, order);
        return max_diff(out, ref);
    };

    // order 2: halving dt cuts the error by ~2^2
    double dt0 = 0.05;
    double prev = stepped(dt0, 2);
    for (int halvings = 0; halvings < 3; ++halvings) {
        dt0 *= 0.5;
        double cur = stepped(dt0, 2);
        double ratio = prev / cur;
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
        prev = cur;
    }

    // order 1 converges too, just linearly
    double e1a = stepped(0.05, 1), e1b = stepped(0.025, 1);
    CHECK(e1a / e1b > 1.5);
    CHECK(e1a / e1b < 2.5);

    // order 4 beats order 2 at the same step by a wide margin
    double e2 = stepped(0.05, 2), e4 = stepped(0.05, 4);
    CHECK(e4 * 10.0 < e2);
}

TEST_CASE("product formula is exact for commuting summands") {
    Grid1D g = Grid1D::make(64, 0.0, 0.25);
    // two diagonal potentials commute, so one first-order step is exact
    rvec va(g.n), vb(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        va[j] = std::sin(0.4 * g.x(j));
        vb[j] = 0.3 * g.x(j);
    }
    std::vector<HamiltonianOp> parts;
    parts.push_back(HamiltonianOp::potential_only_1d(g, va));
    parts.push_back(HamiltonianOp::potential_only_1d(g, vb));
    WaveFunction psi = gaussian_position({8.0, 1.2, 2.0}, g);

    rvec vsum(g.n);
    for (std::size_t j = 0; j < g.n; ++j) vsum[j] = va[j] + vb[j];
    cvec expect = psi.amp;
    HamiltonianOp::potential_only_1d(g, vsum).apply_exp(expect, 2.7);

    WaveFunction out = trotter_step(psi, parts, 2.7, 1);
    double d = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) d = std::max(d, std::abs(out.amp[j] - expect[j]));
    CHECK(d < 1e-13);
}

TEST_CASE("dt_max follows the spectral-radius estimate and shrinks on refinement") {
    double mu = constants::two_nucleon_mu_eff;
    double prev = 0.0;
    for (std::size_t n : {256, 512, 1024}) {
        Grid1D g = Grid1D::make(n, 0.0, 160.0 / static_cast<double>(n));
        HamiltonianOp h = hamiltonian_1d(g, well_potential(g), mu);
        double kmax = g.k_max();
        double expected = 0.1 / (kmax * kmax / (2.0 * mu) + 3000.0);
        CHECK(dt_max(h) == doctest::Approx(expected).epsilon(1e-12));
        if (prev > 0.0) CHECK(dt_max(h) < prev);
        prev = dt_max(h);
    }
}

TEST_CASE("boundary breach is detected and reported") {
    Grid1D g = Grid1D::make(128, 0.0, 0.25);
    double mu = 1.0;
    HamiltonianOp h = hamiltonian_1d(g, rvec(g.n, 0.0), mu);
    WaveFunction psi = gaussian_position({16.0, 1.5, -4.0}, g); // heads for the x=0 edge
    PropagatorSpec ps{Method::split_operator};
    Propagator prop(h, ps);
    WaveFunction run = psi;
    bool breached = false;
    try {
        prop.evolve(run, 8.0);
    } catch (const BoundaryBreachError& e) {
        breached = true;
        CHECK(e.time_of_breach > 0.0);
        CHECK(e.edge_probability > ps.breach_threshold);
    }
    CHECK(breached);

    // same evolution with the check disabled completes (periodic wrap)
    PropagatorSpec off = ps;
    off.check_breach = false;
    WaveFunction wrap = psi;
    Propagator(h, off).evolve(wrap, 8.0);
    CHECK(std::abs(wrap.norm() - 1.0) < 1e-12);
}

TEST_CASE("scattering off the well leaks into and out of the interaction region") {
    Grid1D g = Grid1D::make(256, 0.0, 160.0 / 256.0);
    double mu = constants::two_nucleon_mu_eff;
    HamiltonianOp h = hamiltonian_1d(g, well_potential(g), mu);
    WaveFunction psi = gaussian_position({52.8, 4.0, -2.0}, g);
    PropagatorSpec ps{Method::split_operator};
    ps.check_breach = false;
    Propagator prop(h, ps);

    auto interaction_mass = [&](const WaveFunction& w) {
        double p = 0.0;
        for (std::size_t j = 0; j < g.n; ++j)
            if (g.x(j) < 4.0) p += std::norm(w.amp[j]);
        return p * g.dx;
    };

    double p_start = interaction_mass(psi);
    CHECK(p_start < 1e-10);

    // packet reaches the well around t = x0 * mu / |k0|
    double t_hit = 52.8 * mu / 2.0;
    WaveFunction mid = psi;
    prop.evolve(mid, t_hit);
    double p_mid = interaction_mass(mid);
    CHECK(p_mid > 0.05);

    WaveFunction late = mid;
    prop.evolve(late, 2.0 * t_hit);
    double p_late = interaction_mass(late);
    CHECK(p_late < 0.2 * p_mid);
}

TEST_CASE("propagator spec validation") {
    PropagatorSpec bad_dt{Method::split_operator, -1.0};
    CHECK_THROWS_AS(bad_dt.validate(), ConfigError);
    PropagatorSpec bad_order{Method::trotter, 0.0, 3};
    CHECK_THROWS_AS(bad_order.validate(), ConfigError);

    // product-formula stepping needs a grid-action Hamiltonian
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
    HamiltonianOp dense = HamiltonianOp::dense(m);
    CHECK_THROWS_AS(Propagator(dense, PropagatorSpec{Method::split_operator}), ConfigError);
}
