#include "mollerscat/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mollerscat/fft.hpp"

namespace moller {

namespace {
constexpr double pi = std::numbers::pi;

// p^2/(2 mu) applied spectrally on a 1D grid.
cvec apply_kinetic_1d(const Grid1D& g, const cvec& v, double mu) {
    cvec w = v;
    fft::forward(w.data(), g.n);
    for (std::size_t m = 0; m < g.n; ++m) {
        double k = g.k_fft(m);
        w[m] *= k * k / (2.0 * mu) / static_cast<double>(g.n);
    }
    fft::backward(w.data(), g.n);
    return w;
}

// Generalized Laguerre L_v^{(alpha)}(z) by the three-term recurrence.
double laguerre(std::size_t v, double alpha, double z) {
    if (v == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + alpha - z;
    for (std::size_t k = 1; k < v; ++k) {
        double kn = static_cast<double>(k);
        double lp1 = ((2.0 * kn + 1.0 + alpha - z) * l - (kn + alpha) * lm1) / (kn + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

struct MorseFit {
    double de, a, re, v_asym;
    double rms_residual;
};

MorseFit fit_morse(const Grid1D& rgrid, const rvec& slice) {
    std::size_t n = rgrid.n;
    std::size_t tail = std::max<std::size_t>(3, n / 32);
    double v_asym = 0.0;
    for (std::size_t j = n - tail; j < n; ++j) v_asym += slice[j];
    v_asym /= static_cast<double>(tail);

    auto it = std::min_element(slice.begin(), slice.end());
    std::size_t jmin = static_cast<std::size_t>(it - slice.begin());
    if (jmin == 0 || jmin + 1 >= n)
        throw NumericalError("wavepackets", "potential slice has no interior minimum");
    // Parabolic refinement of the minimum.
    double ym = slice[jmin - 1], y0 = slice[jmin], yp = slice[jmin + 1];
    double denom = ym - 2.0 * y0 + yp;
    double shift = denom > 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    double re = rgrid.x(jmin) + shift * rgrid.dx;
    double vmin = y0 - 0.25 * (ym - yp) * shift;
    double de = v_asym - vmin;
    if (de <= 0.0)
        throw NumericalError("wavepackets", "potential slice is not binding (De <= 0)");
    double curv = denom / (rgrid.dx * rgrid.dx);
    double a = curv > 0.0 ? std::sqrt(curv / (2.0 * de)) : 1.0;

    // Gauss-Newton least squares on (De, a, re), restricted to the region
    // within 1.5 De of the minimum.
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
        if (slice[j] <= vmin + 1.5 * de) idx.push_back(j);

    double rms = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::MatrixXd J(idx.size(), 3);
        Eigen::VectorXd r(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            double x = rgrid.x(idx[i]);
            double e1 = std::exp(-a * (x - re));
            double e2 = e1 * e1;
            double model = v_asym + de * (e2 - 2.0 * e1);
            r(i) = model - slice[idx[i]];
            J(i, 0) = e2 - 2.0 * e1;
            J(i, 1) = de * (-2.0 * (x - re) * e2 + 2.0 * (x - re) * e1);
            J(i, 2) = de * (2.0 * a * e2 - 2.0 * a * e1);
        }
        Eigen::Vector3d step = (J.transpose() * J).ldlt().solve(J.transpose() * r);
        de -= step(0);
        a -= step(1);
        re -= step(2);
        rms = std::sqrt(r.squaredNorm() / static_cast<double>(idx.size()));
        if (step.norm() < 1e-12 * std::max(1.0, std::abs(de))) {
            converged = true;
            break;
        }
        if (de <= 0.0 || a <= 0.0)
            break;
    }
    if (!converged || de <= 0.0 || a <= 0.0) {
        std::ostringstream os;
        os << "Morse fit did not converge (De=" << de << ", a=" << a << ", re=" << re
           << ", rms residual=" << rms << ")";
        throw NumericalError("wavepackets", os.str());
    }
    return {de, a, re, v_asym, rms};
}
} // namespace

double GaussianSpec::wrong_sign_fraction() const {
    if (k0 == 0.0) return 0.5;
    // |psi(k)|^2 ~ exp(-2 dx0^2 (k-k0)^2); integrate over the wrong sign.
    return 0.5 * std::erfc(std::sqrt(2.0) * dx0 * std::abs(k0));
}

cplx gaussian_amplitude(const GaussianSpec& g, double x) {
    double pref = std::pow(1.0 / (2.0 * pi * g.dx0 * g.dx0), 0.25);
    double u = x - g.x0;
    return pref * std::exp(-u * u / (4.0 * g.dx0 * g.dx0)) * std::exp(I_UNIT * (g.k0 * u));
}

static void check_gaussian_spec(const GaussianSpec& g, const Grid1D& grid) {
    if (g.dx0 <= 0.0)
        throw ConfigError("wavepackets", "Gaussian spread must be positive");
    // k0 = 0 packets are legitimately sign-symmetric; purity only constrains
    // directed scattering packets.
    if (g.k0 != 0.0 && g.wrong_sign_fraction() > g.purity_tol) {
        std::ostringstream os;
        os << "momentum-sign purity violated: fraction " << g.wrong_sign_fraction()
           << " of |Psi(k)|^2 lies on the sign opposite to k0 (tolerance " << g.purity_tol << ")";
        throw ConfigError("wavepackets", os.str());
    }
    if (g.x0 - 5.0 * g.dx0 < grid.x_min || g.x0 + 5.0 * g.dx0 > grid.x_max()) {
        std::ostringstream os;
        os << "packet support [" << g.x0 - 5.0 * g.dx0 << ", " << g.x0 + 5.0 * g.dx0
           << "] extends beyond the grid [" << grid.x_min << ", " << grid.x_max() << "]";
        throw GeometryError("wavepackets", os.str());
    }
}

WaveFunction gaussian_position(const GaussianSpec& g, const Grid1D& grid) {
    check_gaussian_spec(g, grid);
    WaveFunction psi{grid, cvec(grid.n), Rep::position};
    for (std::size_t j = 0; j < grid.n; ++j) psi.amp[j] = gaussian_amplitude(g, grid.x(j));
    psi.normalize();
    return psi;
}

WaveFunction gaussian_momentum(const GaussianSpec& g, const Grid1D& grid) {
    check_gaussian_spec(g, grid);
    WaveFunction phi{grid, cvec(grid.n), Rep::momentum};
    double pref = std::pow(2.0 * g.dx0 * g.dx0 / pi, 0.25);
    for (std::size_t m = 0; m < grid.n; ++m) {
        double k = grid.k_fft(m);
        double u = k - g.k0;
        phi.amp[m] = pref * std::exp(-g.dx0 * g.dx0 * u * u) * std::exp(-I_UNIT * (g.x0 * k));
    }
    phi.normalize();
    return phi;
}

double morse_level(double de, double a, double mu, std::size_t v) {
    double w = a * std::sqrt(2.0 * de / mu);
    double vh = static_cast<double>(v) + 0.5;
    return w * vh - w * w * vh * vh / (4.0 * de);
}

WaveFunction VibrationalBasis::state(std::size_t v) const {
    if (v >= n_states())
        throw ConfigError("wavepackets", "vibrational index out of range");
    WaveFunction psi{rgrid, cvec(rgrid.n), Rep::position};
    for (std::size_t j = 0; j < rgrid.n; ++j) psi.amp[j] = eigenstates(j, v);
    return psi;
}

VibrationalBasis build_vibrational_basis(const Grid1D& rgrid, const rvec& slice,
                                         const VibrationalParams& params) {
    if (slice.size() != rgrid.n)
        throw ConfigError("wavepackets", "slice length does not match grid");
    MorseFit fit = fit_morse(rgrid, slice);

    double lambda = std::sqrt(2.0 * params.mu * fit.de) / fit.a;
    std::size_t max_states = lambda > 0.5 ? static_cast<std::size_t>(lambda - 0.5) + 1 : 0;
    std::size_t m = std::min(params.n_basis, max_states);
    if (m == 0)
        throw NumericalError("wavepackets", "fitted Morse well supports no bound states");

    // Morse eigenfunctions of the fitted parameters, evaluated on the grid
    // and orthonormalized under the grid inner product.
    Eigen::MatrixXd basis(rgrid.n, m);
    for (std::size_t v = 0; v < m; ++v) {
        double alpha = 2.0 * lambda - 2.0 * static_cast<double>(v) - 1.0;
        double p = lambda - static_cast<double>(v) - 0.5;
        for (std::size_t j = 0; j < rgrid.n; ++j) {
            double z = 2.0 * lambda * std::exp(-fit.a * (rgrid.x(j) - fit.re));
            double logmag = p * std::log(z) - 0.5 * z;
            basis(j, v) = logmag < -300.0 ? 0.0 : std::exp(logmag) * laguerre(v, alpha, z);
        }
        basis.col(v).normalize();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rgrid.n, m);

    // Assemble H_vib in this basis and diagonalize.
    Eigen::MatrixXd h(m, m);
    for (std::size_t v = 0; v < m; ++v) {
        cvec col(rgrid.n);
        for (std::size_t j = 0; j < rgrid.n; ++j) col[j] = q(j, v);
        cvec hcol = apply_kinetic_1d(rgrid, col, params.mu);
        for (std::size_t j = 0; j < rgrid.n; ++j) hcol[j] += slice[j] * col[j];
        for (std::size_t u = 0; u < m; ++u) {
            double s = 0.0;
            for (std::size_t j = 0; j < rgrid.n; ++j) s += q(j, u) * hcol[j].real();
            h(u, v) = s;
        }
    }
    h = 0.5 * (h + h.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);

    Eigen::MatrixXd states = q * es.eigenvectors();
    // Continuum normalization and a reproducible sign convention.
    states /= std::sqrt(rgrid.dx);
    for (std::size_t v = 0; v < m; ++v) {
        Eigen::Index jmax;
        states.col(v).cwiseAbs().maxCoeff(&jmax);
        if (states(jmax, v) < 0.0) states.col(v) *= -1.0;
    }

    VibrationalBasis out;
    out.rgrid = rgrid;
    out.de = fit.de;
    out.a = fit.a;
    out.re = fit.re;
    out.v_asym = fit.v_asym;
    out.mu = params.mu;
    out.eigenstates = states.cast<cplx>();
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m);
    return out;
}

cplx ChannelSpec::eta_at(double k) const {
    // Closed-form momentum amplitude of the packet. Interpolating the
    // gridded eta instead would cap the extraction accuracy at the
    // interpolation error, which shows up directly in S(E).
    if (k < -tgrid.k_max() || k >= tgrid.k_max()) return 0.0;
    double pref = std::pow(2.0 * gaussian.dx0 * gaussian.dx0 / std::numbers::pi, 0.25);
    double u = k - gaussian.k0;
    return pref * std::exp(-gaussian.dx0 * gaussian.dx0 * u * u) *
           std::exp(-I_UNIT * (gaussian.x0 * k));
}

ChannelSpec make_channel(int id, int v, const GaussianSpec& g, const Grid1D& tgrid,
                         double mu, double e_internal) {
    if (id != 1 && id != 2)
        throw ConfigError("wavepackets", "channel id must be 1 (reactant) or 2 (product)");
    ChannelSpec c;
    c.id = id;
    c.v = v;
    c.gaussian = g;
    c.tgrid = tgrid;
    c.mu = mu;
    c.e_internal = e_internal;
    c.k_sign = g.k0 < 0.0 ? -1 : 1;
    c.eta = sorted_momentum(to_momentum(gaussian_position(g, tgrid)));
    double s = 0.0;
    for (const auto& e : c.eta) s += std::norm(e);
    s *= tgrid.dk();
    if (std::abs(s - 1.0) > 1e-10)
        throw NumericalError("wavepackets", "eta coefficients are not normalized");
    return c;
}

ProductState channel_product_state(const ChannelSpec& c, const VibrationalBasis& vib,
                                   const Grid2D& grid2, double x_interaction,
                                   double edge_tol) {
    if (static_cast<std::size_t>(c.v) >= vib.n_states())
        throw ConfigError("wavepackets", "requested vibrational state not available in basis");
    const Grid1D& axis = c.id == 1 ? grid2.gy : grid2.gx;
    if (!(axis == vib.rgrid))
        throw ConfigError("wavepackets", "vibrational basis grid does not match the bond grid axis");

    WaveFunction psi{grid2, cvec(grid2.size()), Rep::position};
    for (std::size_t ix = 0; ix < grid2.gx.n; ++ix) {
        double x = grid2.gx.x(ix);
        for (std::size_t iy = 0; iy < grid2.gy.n; ++iy) {
            double y = grid2.gy.x(iy);
            cplx vibamp = c.id == 1 ? vib.eigenstates(iy, c.v) : vib.eigenstates(ix, c.v);
            double rrel = c.id == 1 ? x + 0.5 * y : y + 0.5 * x; // R_gamma via the bond transform
            psi.amp[grid2.index(ix, iy)] = vibamp * gaussian_amplitude(c.gaussian, rrel);
        }
    }
    psi.normalize();
    if (psi.edge_band_probability() > edge_tol)
        throw GeometryError("wavepackets", "channel product state touches the grid boundary");

    double overlap = 0.0;
    double dv = psi.dvol();
    for (std::size_t ix = 0; ix < grid2.gx.n; ++ix) {
        for (std::size_t iy = 0; iy < grid2.gy.n; ++iy) {
            double trans = c.id == 1 ? grid2.gx.x(ix) : grid2.gy.x(iy);
            if (trans < x_interaction) overlap += std::norm(psi.amp[grid2.index(ix, iy)]);
        }
    }
    return {std::move(psi), overlap * dv};
}

} // namespace moller
