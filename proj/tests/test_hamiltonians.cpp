#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "mollerscat/constants.hpp"
#include "mollerscat/hamiltonian.hpp"
#include "mollerscat/wavepackets.hpp"

using namespace moller;

TEST_CASE("piecewise well values") {
    PiecewiseWell w;
    CHECK(w(0.5) == 3000.0);
    CHECK(w(1.0) == -100.0);
    CHECK(w(2.0) == 0.0);
    CHECK(w(0.65) == 3000.0);
    CHECK(w(1.65) == -100.0);

    Grid1D g = Grid1D::make(256, 0.0, 160.0 / 256.0);
    rvec v = well_potential(g);
    for (std::size_t j = 0; j < g.n; ++j) CHECK(v[j] == w(g.x(j)));

    Grid1D small = Grid1D::make(16, 0.0, 0.2); // spans only [0, 3]
    CHECK_THROWS_AS(well_potential(small), ConfigError);
}

TEST_CASE("free particle: dense eigenvalues are the kinetic dispersion") {
    Grid1D g = Grid1D::make(32, 0.0, 0.5);
    double mu = 2.0;
    HamiltonianOp h = hamiltonian_1d(g, rvec(g.n, 0.0), mu);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense_matrix());
    rvec expected;
    for (std::size_t m = 0; m < g.n; ++m) {
        double k = g.k_fft(m);
        expected.push_back(k * k / (2.0 * mu));
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(es.eigenvalues()(static_cast<Eigen::Index>(i)) ==
              doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("gaussian kinetic expectation matches the closed form") {
    Grid1D g = Grid1D::make(256, 0.0, 160.0 / 256.0);
    double mu = constants::two_nucleon_mu_eff;
    HamiltonianOp h = hamiltonian_1d(g, rvec(g.n, 0.0), mu);
    GaussianSpec spec{52.8, 4.0, -2.0};
    WaveFunction psi = gaussian_position(spec, g);
    double expected = spec.k0 * spec.k0 / (2.0 * mu) + 1.0 / (8.0 * mu * spec.dx0 * spec.dx0);
    CHECK(h.expectation(psi) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("dense form is Hermitian and matches the grid action") {
    Grid1D g = Grid1D::make(16, 0.0, 0.4);
    rvec v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) v[j] = std::sin(0.7 * g.x(j));
    HamiltonianOp h = hamiltonian_1d(g, v, 1.3);
    const Eigen::MatrixXcd& m = h.dense_matrix();
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    cvec x(g.n), hx(g.n);
    for (auto& a : x) a = cplx{nd(rng), nd(rng)};
    h.apply_amp(x, hx);
    Eigen::Map<Eigen::VectorXcd> xv(x.data(), g.n);
    Eigen::VectorXcd dense = m * xv;
    for (std::size_t j = 0; j < g.n; ++j)
        CHECK(std::abs(hx[j] - dense(static_cast<Eigen::Index>(j))) < 1e-10);
}

TEST_CASE("jacobi-bond transform") {
    auto [x1, y1] = jacobi_to_bond(5.0, 2.0, 1);
    CHECK(x1 == doctest::Approx(4.0));
    CHECK(y1 == doctest::Approx(2.0));
    auto [x2, y2] = jacobi_to_bond(5.0, 2.0, 2);
    CHECK(x2 == doctest::Approx(2.0));
    CHECK(y2 == doctest::Approx(4.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ud(0.5, 10.0);
    for (int i = 0; i < 50; ++i) {
        double r_rel = ud(rng), r_int = ud(rng);
        for (int ch : {1, 2}) {
            auto [x, y] = jacobi_to_bond(r_rel, r_int, ch);
            auto [rr, ri] = bond_to_jacobi(x, y, ch);
            CHECK(rr == doctest::Approx(r_rel).epsilon(1e-14));
            CHECK(ri == doctest::Approx(r_int).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(jacobi_to_bond(1.0, 1.0, 3), ConfigError);
}

TEST_CASE("collinear kinetic form: plane-wave eigenvalues and hermiticity") {
    Grid1D ax = Grid1D::make(16, 0.0, 0.5);
    Grid2D g2{ax, ax};
    double m_h = constants::hydrogen_mass_au;
    CollinearPES zero([](double, double) { return 0.0; },
                      CollinearPES::Provenance::surrogate_analytic);
    HamiltonianOp h = collinear_hamiltonian(g2, zero, m_h);

    double kx = 3 * ax.dk(), ky = -2 * ax.dk();
    WaveFunction psi{g2, cvec(g2.size()), Rep::position};
    for (std::size_t ix = 0; ix < ax.n; ++ix)
        for (std::size_t iy = 0; iy < ax.n; ++iy)
            psi.amp[g2.index(ix, iy)] = std::exp(I_UNIT * (kx * ax.x(ix) + ky * ax.x(iy)));
    psi.normalize();
    WaveFunction hpsi = h.apply(psi);
    double eig = (kx * kx - kx * ky + ky * ky) / m_h;
    for (std::size_t j = 0; j < psi.amp.size(); ++j)
        CHECK(std::abs(hpsi.amp[j] - eig * psi.amp[j]) < 1e-10);

    Grid1D small = Grid1D::make(8, 0.0, 1.0);
    Grid2D s2{small, small};
    HamiltonianOp hs = collinear_hamiltonian(s2, make_leps_pes(), m_h);
    const Eigen::MatrixXcd& m = hs.dense_matrix();
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("asymptotic separability of the product state") {
    // the channel coupling decays on the Morse range scale (~1 bohr), so the
    // packet must sit ~18 bohr out before (H - H0)psi drops below 1e-6; a
    // rectangular box keeps the short vibrational axis clear of the edge band
    Grid1D gx = Grid1D::make(256, 0.0, 38.4 / 256.0);
    Grid1D gy = Grid1D::make(64, 0.0, 9.6 / 64.0);
    Grid2D g2{gx, gy};
    CollinearPES pes = make_leps_pes();
    double m_h = constants::hydrogen_mass_au;
    double mu_vib = m_h / 2.0, mu_tr = 2.0 * m_h / 3.0;
    VibrationalBasis vib = build_vibrational_basis(gy, pes.asymptotic_slice(1, gy), {mu_vib, 6});
    GaussianSpec gsp{20.0, 1.0, -6.0};
    ChannelSpec c = make_channel(1, 0, gsp, gx, mu_tr, vib.eigenvalues[0]);
    WaveFunction psi = channel_product_state(c, vib, g2).psi;

    HamiltonianOp h = collinear_hamiltonian(g2, pes, m_h);
    HamiltonianOp h0 = asymptotic_hamiltonian(1, g2, pes, m_h);

    // <H> = E_v + translational energy to 1%
    double e_trans = gsp.k0 * gsp.k0 / (2.0 * mu_tr) + 1.0 / (8.0 * mu_tr * gsp.dx0 * gsp.dx0);
    double expected = vib.eigenvalues[0] + e_trans;
    CHECK(h.expectation(psi) == doctest::Approx(expected).epsilon(0.01));

    // (H - H0) annihilates the asymptotically supported packet
    WaveFunction hpsi = h.apply(psi);
    WaveFunction h0psi = h0.apply(psi);
    double resid = 0.0;
    for (std::size_t j = 0; j < psi.amp.size(); ++j)
        resid += std::norm(hpsi.amp[j] - h0psi.amp[j]);
    resid = std::sqrt(resid * psi.dvol());
    CHECK(resid < 1e-6);
}

TEST_CASE("channel asymptotic hamiltonians respect the X-Y exchange symmetry") {
    Grid1D ax = Grid1D::make(16, 0.0, 1.0);
    Grid2D g2{ax, ax};
    CollinearPES pes = make_leps_pes(); // homonuclear: V(x, y) = V(y, x)
    double m_h = constants::hydrogen_mass_au;
    HamiltonianOp h1 = asymptotic_hamiltonian(1, g2, pes, m_h);
    HamiltonianOp h2 = asymptotic_hamiltonian(2, g2, pes, m_h);
    // swap X and Y in the channel-1 potential and compare with channel 2
    const rvec& v1 = h1.potential();
    const rvec& v2 = h2.potential();
    for (std::size_t ix = 0; ix < ax.n; ++ix)
        for (std::size_t iy = 0; iy < ax.n; ++iy)
            CHECK(v1[g2.index(ix, iy)] == doctest::Approx(v2[g2.index(iy, ix)]).epsilon(1e-12));
}

TEST_CASE("asymptotic hamiltonian eigen-relation on plane-wave x eigenstate inputs") {
    // fine vibrational axis: the separation identity is exact on the grid, but
    // momentum-edge aliasing of the vibrational tail must stay below tolerance
    Grid1D gx = Grid1D::make(64, 0.0, 16.0 / 64.0);
    Grid1D gy = Grid1D::make(256, 0.0, 16.0 / 256.0);
    Grid2D g2{gx, gy};
    CollinearPES pes = make_leps_pes();
    double m_h = constants::hydrogen_mass_au;
    double mu_vib = m_h / 2.0, mu_tr = 2.0 * m_h / 3.0;
    HamiltonianOp h0 = asymptotic_hamiltonian(1, g2, pes, m_h);

    // exact grid eigenstate of the 1D vibrational hamiltonian (the truncated
    // Morse basis only diagonalizes a subspace, leaving ~1e-4 residuals)
    HamiltonianOp h_vib = hamiltonian_1d(gy, pes.asymptotic_slice(1, gy), mu_vib);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_vib.dense_matrix());
    Eigen::VectorXcd v0 = es.eigenvectors().col(0);

    // channel-1 Jacobi plane wave exp(ikR1) x vib(r1) on the bond grid:
    // R1 = X + Y/2, r1 = Y. k/2 must lie on the y momentum grid for exact
    // periodicity, hence the even multiple of dk (both axes share dk here).
    double k = 4 * gx.dk();
    WaveFunction psi{g2, cvec(g2.size()), Rep::position};
    for (std::size_t ix = 0; ix < gx.n; ++ix)
        for (std::size_t iy = 0; iy < gy.n; ++iy)
            psi.amp[g2.index(ix, iy)] =
                std::exp(I_UNIT * (k * (gx.x(ix) + 0.5 * gy.x(iy)))) *
                v0(static_cast<Eigen::Index>(iy));
    psi.normalize();
    WaveFunction h0psi = h0.apply(psi);
    double eig = es.eigenvalues()(0) + k * k / (2.0 * mu_tr);
    double resid = 0.0;
    for (std::size_t j = 0; j < psi.amp.size(); ++j)
        resid += std::norm(h0psi.amp[j] - eig * psi.amp[j]);
    CHECK(std::sqrt(resid * psi.dvol()) < 1e-8);
}

TEST_CASE("pauli decomposition closed forms and reconstruction") {
    // identity
    PauliSum id = pauli_decompose(Eigen::MatrixXcd::Identity(4, 4), 2);
    REQUIRE(id.terms.size() == 1);
    CHECK(id.terms[0].string.ops == "II");
    CHECK(id.terms[0].coeff == doctest::Approx(1.0));

    // diag(0, 1) = I/2 - Z/2
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(1, 1) = 1.0;
    PauliSum pd = pauli_decompose(d, 1);
    REQUIRE(pd.terms.size() == 2);
    double ci = 0.0, cz = 0.0;
    for (const auto& t : pd.terms) {
        if (t.string.ops == "I") ci = t.coeff;
        if (t.string.ops == "Z") cz = t.coeff;
    }
    CHECK(ci == doctest::Approx(0.5));
    CHECK(cz == doctest::Approx(-0.5));

    // random 3-qubit Hermitian reconstructs
    std::mt19937 rng(17);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) a(i, j) = cplx{nd(rng), nd(rng)};
    Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    PauliSum sum = pauli_decompose(herm, 3);
    for (const auto& t : sum.terms) CHECK(std::abs(std::imag(cplx(t.coeff))) == 0.0);
    CHECK((sum.reconstruct() - herm).cwiseAbs().maxCoeff() < 1e-10);

    // non-Hermitian input rejected
    Eigen::MatrixXcd bad = a;
    CHECK_THROWS_AS(pauli_decompose(bad, 3), NumericalError);
}

TEST_CASE("pauli string statevector action matches the matrix") {
    std::mt19937 rng(23);
    std::normal_distribution<double> nd;
    for (const std::string& ops : {"XZY", "IYX", "ZZI"}) {
        PauliString p{ops};
        cvec v(8);
        for (auto& a : v) a = cplx{nd(rng), nd(rng)};
        cvec w = v;
        apply_pauli(p, w);
        Eigen::Map<Eigen::VectorXcd> vv(v.data(), 8);
        Eigen::VectorXcd expect = p.matrix() * vv;
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(w[static_cast<std::size_t>(j)] - expect(j)) < 1e-12);
    }
}

TEST_CASE("tabulated surface loads with bilinear interpolation") {
    const char* path = "/tmp/test_pes_table.txt";
    {
        std::ofstream f(path);
        f << "# units bohr hartree\n";
        for (double x : {0.0, 1.0, 2.0})
            for (double y : {0.0, 1.0, 2.0}) f << x << " " << y << " " << x + 2.0 * y << "\n";
    }
    CollinearPES pes = load_tabulated_pes(path);
    CHECK(pes.provenance() == CollinearPES::Provenance::user_tabulated);
    CHECK(pes(0.5, 0.5) == doctest::Approx(1.5));
    CHECK(pes(1.25, 0.75) == doctest::Approx(1.25 + 1.5));
    CHECK_THROWS_AS(pes(5.0, 0.5), EngineError); // outside the table
}

TEST_CASE("leps surrogate reduces to the pair morse curve asymptotically") {
    LepsParams p;
    CollinearPES pes = make_leps_pes(p);
    for (double r : {0.9, 1.4, 2.5, 4.0}) {
        double u = 1.0 - std::exp(-p.a * (r - p.re));
        double morse = p.de * u * u - p.de;
        CHECK(pes(r, 500.0) == doctest::Approx(morse).epsilon(1e-8));
        CHECK(pes(500.0, r) == doctest::Approx(morse).epsilon(1e-8));
    }
}
