#include "mollerscat/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mollerscat/fft.hpp"

namespace moller {

rvec well_potential(const Grid1D& grid, const PiecewiseWell& well) {
    if (grid.x_min > 0.0 || grid.x_max() < 4.0)
        throw ConfigError("hamiltonians", "well grid must span at least [0, 4] fm");
    rvec v(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) v[j] = well(grid.x(j));
    return v;
}

rvec CollinearPES::asymptotic_slice(int channel, const Grid1D& axis) const {
    if (channel != 1 && channel != 2)
        throw ConfigError("hamiltonians", "channel must be 1 or 2");
    rvec v(axis.n);
    for (std::size_t j = 0; j < axis.n; ++j) {
        double r = axis.x(j);
        v[j] = channel == 1 ? eval_(far_, r) : eval_(r, far_);
    }
    return v;
}

CollinearPES make_leps_pes(const LepsParams& p) {
    auto eval = [p](double x, double y) {
        double r[3] = {x, y, x + y}; // AB, BC, AC pair distances (collinear)
        double q_sum = 0.0;
        double j[3];
        for (int i = 0; i < 3; ++i) {
            double e1 = std::exp(-p.a * (r[i] - p.re));
            double singlet = p.de * (e1 * e1 - 2.0 * e1);
            double triplet = 0.5 * p.de * (e1 * e1 + 2.0 * e1);
            q_sum += 0.5 * ((1.0 + p.sato) * singlet + (1.0 - p.sato) * triplet);
            j[i] = 0.5 * ((1.0 + p.sato) * singlet - (1.0 - p.sato) * triplet);
        }
        double jterm = std::sqrt(std::max(0.0,
            j[0] * j[0] + j[1] * j[1] + j[2] * j[2] - j[0] * j[1] - j[1] * j[2] - j[2] * j[0]));
        return (q_sum - jterm) / (1.0 + p.sato);
    };
    return CollinearPES(eval, CollinearPES::Provenance::surrogate_analytic);
}

CollinearPES load_tabulated_pes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("hamiltonians", "cannot open PES table: " + path);
    std::string header;
    std::getline(in, header);
    if (header.find("units") == std::string::npos)
        throw ConfigError("hamiltonians", "PES table must start with a '# units ...' header line");

    std::vector<double> xs, ys, vs;
    double x, y, v;
    while (in >> x >> y >> v) {
        xs.push_back(x);
        ys.push_back(y);
        vs.push_back(v);
    }
    if (vs.empty()) throw ConfigError("hamiltonians", "PES table is empty");

    auto axis = [](std::vector<double> c) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                c.end());
        return c;
    };
    auto xg = std::make_shared<std::vector<double>>(axis(xs));
    auto yg = std::make_shared<std::vector<double>>(axis(ys));
    std::size_t nx = xg->size(), ny = yg->size();
    if (nx * ny != vs.size())
        throw ConfigError("hamiltonians", "PES table is not a rectangular grid");

    auto table = std::make_shared<std::vector<double>>(nx * ny);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto ix = static_cast<std::size_t>(
            std::lower_bound(xg->begin(), xg->end(), xs[i] - 1e-12) - xg->begin());
        auto iy = static_cast<std::size_t>(
            std::lower_bound(yg->begin(), yg->end(), ys[i] - 1e-12) - yg->begin());
        (*table)[ix * ny + iy] = vs[i];
    }

    auto eval = [xg, yg, table, ny](double px, double py) {
        auto clamp_cell = [](const std::vector<double>& g, double p) {
            if (p < g.front() || p > g.back())
                throw NumericalError("hamiltonians", "PES evaluation outside the tabulated domain");
            auto hi = std::upper_bound(g.begin(), g.end(), p);
            std::size_t i1 = std::min<std::size_t>(hi - g.begin(), g.size() - 1);
            std::size_t i0 = i1 == 0 ? 0 : i1 - 1;
            double f = g[i1] == g[i0] ? 0.0 : (p - g[i0]) / (g[i1] - g[i0]);
            return std::pair<std::size_t, double>{i0, f};
        };
        auto [ix, fx] = clamp_cell(*xg, px);
        auto [iy, fy] = clamp_cell(*yg, py);
        std::size_t ix1 = std::min(ix + 1, xg->size() - 1);
        std::size_t iy1 = std::min(iy + 1, yg->size() - 1);
        double v00 = (*table)[ix * ny + iy], v01 = (*table)[ix * ny + iy1];
        double v10 = (*table)[ix1 * ny + iy], v11 = (*table)[ix1 * ny + iy1];
        return (1 - fx) * ((1 - fy) * v00 + fy * v01) + fx * ((1 - fy) * v10 + fy * v11);
    };
    double far = std::min(xg->back(), yg->back());
    return CollinearPES(eval, CollinearPES::Provenance::user_tabulated, far);
}

HamiltonianOp HamiltonianOp::grid_1d(const Grid1D& g, rvec v, double mu) {
    if (mu <= 0.0) throw ConfigError("hamiltonians", "mass must be positive");
    if (v.size() != g.n) throw ConfigError("hamiltonians", "potential size mismatch");
    HamiltonianOp h;
    h.form_ = Form::grid1d;
    h.grid_ = g;
    h.v_ = std::move(v);
    h.mu_ = mu;
    h.has_kinetic_ = h.has_potential_ = true;
    return h;
}

HamiltonianOp HamiltonianOp::grid_2d(const Grid2D& g, rvec v, double cxx, double cxy, double cyy) {
    if (v.size() != g.size()) throw ConfigError("hamiltonians", "potential size mismatch");
    HamiltonianOp h;
    h.form_ = Form::grid2d;
    h.grid_ = g;
    h.v_ = std::move(v);
    h.cxx_ = cxx;
    h.cxy_ = cxy;
    h.cyy_ = cyy;
    h.has_kinetic_ = h.has_potential_ = true;
    return h;
}

HamiltonianOp HamiltonianOp::dense(Eigen::MatrixXcd m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw NumericalError("hamiltonians", "dense Hamiltonian is not Hermitian");
    HamiltonianOp h;
    h.form_ = Form::dense;
    h.dense_ = std::make_shared<Eigen::MatrixXcd>(std::move(m));
    return h;
}

HamiltonianOp HamiltonianOp::kinetic_only_1d(const Grid1D& g, double mu) {
    HamiltonianOp h = grid_1d(g, rvec(g.n, 0.0), mu);
    h.has_potential_ = false;
    return h;
}

HamiltonianOp HamiltonianOp::potential_only_1d(const Grid1D& g, rvec v) {
    HamiltonianOp h = grid_1d(g, std::move(v), 1.0);
    h.has_kinetic_ = false;
    return h;
}

HamiltonianOp HamiltonianOp::kinetic_only_2d(const Grid2D& g, double cxx, double cxy, double cyy) {
    HamiltonianOp h = grid_2d(g, rvec(g.size(), 0.0), cxx, cxy, cyy);
    h.has_potential_ = false;
    return h;
}

HamiltonianOp HamiltonianOp::potential_only_2d(const Grid2D& g, rvec v) {
    HamiltonianOp h = grid_2d(g, std::move(v), 0.0, 0.0, 0.0);
    h.has_kinetic_ = false;
    return h;
}

std::size_t HamiltonianOp::dim() const {
    switch (form_) {
        case Form::grid1d: return grid1().n;
        case Form::grid2d: return grid2().size();
        default: return static_cast<std::size_t>(dense_->rows());
    }
}

double HamiltonianOp::kinetic_value(double kx, double ky) const {
    if (form_ == Form::grid1d) return kx * kx / (2.0 * mu_);
    return cxx_ * kx * kx + cxy_ * kx * ky + cyy_ * ky * ky;
}

void HamiltonianOp::apply_amp(const cvec& in, cvec& out) const {
    if (in.size() != dim()) throw ConfigError("hamiltonians", "state dimension mismatch");
    if (form_ == Form::dense) {
        const auto& m = *dense_;
        out.assign(in.size(), 0.0);
        Eigen::Map<Eigen::VectorXcd> ov(out.data(), out.size());
        Eigen::Map<const Eigen::VectorXcd> iv(in.data(), in.size());
        ov = m * iv;
        return;
    }
    out = in;
    if (has_kinetic_) {
        cvec kin = in;
        if (form_ == Form::grid1d) {
            const auto& g = grid1();
            fft::forward(kin.data(), g.n);
            for (std::size_t m = 0; m < g.n; ++m)
                kin[m] *= kinetic_value(g.k_fft(m)) / static_cast<double>(g.n);
            fft::backward(kin.data(), g.n);
        } else {
            const auto& g = grid2();
            fft::forward2(kin.data(), g.gx.n, g.gy.n);
            double scale = 1.0 / static_cast<double>(g.size());
            for (std::size_t m = 0; m < g.gx.n; ++m)
                for (std::size_t l = 0; l < g.gy.n; ++l)
                    kin[g.index(m, l)] *= kinetic_value(g.gx.k_fft(m), g.gy.k_fft(l)) * scale;
            fft::backward2(kin.data(), g.gx.n, g.gy.n);
        }
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = kin[j] + (has_potential_ ? v_[j] * in[j] : 0.0);
    } else {
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = v_[j] * in[j];
    }
}

WaveFunction HamiltonianOp::apply(const WaveFunction& psi) const {
    if (psi.rep != Rep::position)
        throw RepresentationError("hamiltonians", "HamiltonianOp acts on position-representation states");
    WaveFunction out = psi;
    apply_amp(psi.amp, out.amp);
    return out;
}

double HamiltonianOp::expectation(const WaveFunction& psi) const {
    WaveFunction hpsi = apply(psi);
    return inner_product(psi, hpsi).real();
}

const Eigen::MatrixXcd& HamiltonianOp::dense_matrix() const {
    if (dense_) return *dense_;
    std::size_t n = dim();
    if (n > (std::size_t{1} << 12))
        throw ConfigError("hamiltonians",
                          "dense form refused above 4096 dimensions; use the grid-action form");
    auto m = std::make_shared<Eigen::MatrixXcd>(n, n);
    cvec e(n, 0.0), col(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply_amp(e, col);
        for (std::size_t i = 0; i < n; ++i) (*m)(i, j) = col[i];
        e[j] = 0.0;
    }
    // symmetrize away FFT roundoff
    *m = 0.5 * (*m + m->adjoint().eval());
    const_cast<HamiltonianOp*>(this)->dense_ = m;
    return *dense_;
}

void HamiltonianOp::apply_kinetic_phase(cvec& amp, double t) const {
    if (!has_kinetic_) return;
    if (form_ == Form::grid1d) {
        const auto& g = grid1();
        fft::forward(amp.data(), g.n);
        double scale = 1.0 / static_cast<double>(g.n);
        for (std::size_t m = 0; m < g.n; ++m)
            amp[m] *= scale * std::exp(-I_UNIT * (kinetic_value(g.k_fft(m)) * t));
        fft::backward(amp.data(), g.n);
    } else if (form_ == Form::grid2d) {
        const auto& g = grid2();
        fft::forward2(amp.data(), g.gx.n, g.gy.n);
        double scale = 1.0 / static_cast<double>(g.size());
        for (std::size_t m = 0; m < g.gx.n; ++m)
            for (std::size_t l = 0; l < g.gy.n; ++l)
                amp[g.index(m, l)] *=
                    scale * std::exp(-I_UNIT * (kinetic_value(g.gx.k_fft(m), g.gy.k_fft(l)) * t));
        fft::backward2(amp.data(), g.gx.n, g.gy.n);
    } else {
        throw NumericalError("hamiltonians", "kinetic phase undefined for dense form");
    }
}

void HamiltonianOp::apply_potential_phase(cvec& amp, double t) const {
    if (!has_potential_) return;
    for (std::size_t j = 0; j < amp.size(); ++j) amp[j] *= std::exp(-I_UNIT * (v_[j] * t));
}

void HamiltonianOp::apply_exp(cvec& amp, double t) const {
    if (form_ == Form::dense)
        throw NumericalError("hamiltonians",
                             "dense exponential is handled by the exact propagator");
    if (has_kinetic_ && has_potential_)
        throw NumericalError("hamiltonians",
                             "exact exponential requires a kinetic-only or potential-only summand");
    if (has_kinetic_)
        apply_kinetic_phase(amp, t);
    else
        apply_potential_phase(amp, t);
}

double HamiltonianOp::max_kinetic() const {
    if (!has_kinetic_) return 0.0;
    if (form_ == Form::grid1d) {
        double km = grid1().k_max();
        return kinetic_value(km);
    }
    const auto& g = grid2();
    double kx = g.gx.k_max(), ky = g.gy.k_max();
    double best = 0.0;
    for (double sx : {-kx, kx})
        for (double sy : {-ky, ky}) best = std::max(best, std::abs(kinetic_value(sx, sy)));
    return best;
}

double HamiltonianOp::max_abs_potential() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

std::vector<HamiltonianOp> HamiltonianOp::split_parts() const {
    if (form_ == Form::grid1d)
        return {kinetic_only_1d(grid1(), mu_), potential_only_1d(grid1(), v_)};
    if (form_ == Form::grid2d)
        return {kinetic_only_2d(grid2(), cxx_, cxy_, cyy_), potential_only_2d(grid2(), v_)};
    throw NumericalError("hamiltonians", "dense Hamiltonians have no grid split");
}

HamiltonianOp hamiltonian_1d(const Grid1D& grid, rvec v, double mu) {
    return HamiltonianOp::grid_1d(grid, std::move(v), mu);
}

HamiltonianOp collinear_hamiltonian(const Grid2D& grid2, const CollinearPES& pes, double m_h,
                                    double cxx_scale, double cxy_scale, double cyy_scale) {
    if (m_h <= 0.0) throw ConfigError("hamiltonians", "mass must be positive");
    rvec v(grid2.size());
    for (std::size_t ix = 0; ix < grid2.gx.n; ++ix)
        for (std::size_t iy = 0; iy < grid2.gy.n; ++iy) {
            double val = pes(grid2.gx.x(ix), grid2.gy.x(iy));
            if (!std::isfinite(val))
                throw NumericalError("hamiltonians", "PES undefined at a grid point");
            v[grid2.index(ix, iy)] = val;
        }
    return HamiltonianOp::grid_2d(grid2, std::move(v), cxx_scale / m_h, -cxy_scale / m_h,
                                  cyy_scale / m_h);
}

HamiltonianOp asymptotic_hamiltonian(int channel, const Grid2D& grid2, const CollinearPES& pes,
                                     double m_h) {
    if (channel != 1 && channel != 2)
        throw ConfigError("hamiltonians", "channel must be 1 or 2");
    // Kinetic part is the full bond-coordinate kinetic energy (the Jacobi
    // kinetic terms transform into exactly that); only the potential is
    // replaced by the channel's diatomic slice.
    const Grid1D& axis = channel == 1 ? grid2.gy : grid2.gx;
    rvec slice = pes.asymptotic_slice(channel, axis);
    rvec v(grid2.size());
    for (std::size_t ix = 0; ix < grid2.gx.n; ++ix)
        for (std::size_t iy = 0; iy < grid2.gy.n; ++iy)
            v[grid2.index(ix, iy)] = channel == 1 ? slice[iy] : slice[ix];
    return HamiltonianOp::grid_2d(grid2, std::move(v), 1.0 / m_h, -1.0 / m_h, 1.0 / m_h);
}

std::pair<double, double> jacobi_to_bond(double r_rel, double r_int, int channel) {
    if (channel == 1) return {r_rel - 0.5 * r_int, r_int};
    if (channel == 2) return {r_int, r_rel - 0.5 * r_int};
    throw ConfigError("hamiltonians", "channel must be 1 or 2");
}

std::pair<double, double> bond_to_jacobi(double x, double y, int channel) {
    if (channel == 1) return {x + 0.5 * y, y};
    if (channel == 2) return {y + 0.5 * x, x};
    throw ConfigError("hamiltonians", "channel must be 1 or 2");
}

PauliSum hamiltonian_pauli_sum(const HamiltonianOp& h, std::size_t n_qubits) {
    const auto& m = h.dense_matrix();
    return pauli_decompose(m, n_qubits);
}

} // namespace moller
