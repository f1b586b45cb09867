#include "mollerscat/smatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace moller {

double CorrelationSeries::dt() const {
    if (times.size() < 2)
        throw ConfigError("smatrix", "correlation series needs at least two samples");
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

void CorrelationSpec::validate() const {
    if (!(t_max > t_min)) throw ConfigError("smatrix", "need t_max > t_min");
    if (n_t < 2) throw ConfigError("smatrix", "need at least two time samples");
    if (backend == Backend::sampled && shots == 0)
        throw ConfigError("smatrix", "sampled backend needs a positive shot count");
}

namespace {

rvec time_grid(const CorrelationSpec& spec) {
    rvec t(spec.n_t);
    double dt = (spec.t_max - spec.t_min) / static_cast<double>(spec.n_t - 1);
    for (std::size_t j = 0; j < spec.n_t; ++j)
        t[j] = spec.t_min + static_cast<double>(j) * dt;
    return t;
}

void check_decay(const CorrelationSeries& c, const CorrelationSpec& spec) {
    if (!spec.check_decay) return;
    double cmax = 0.0;
    for (const auto& v : c.values) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0) throw NumericalError("smatrix", "correlation function vanished identically");
    double edge = std::max(std::abs(c.values.front()), std::abs(c.values.back()));
    if (edge > spec.decay_threshold * cmax)
        throw NumericalError("smatrix",
                             "correlation function has not decayed at the time-window edges "
                             "(edge/max = " + std::to_string(edge / cmax) +
                             "); extend the horizon");
}

} // namespace

CorrelationSeries correlation_series(const MollerState& plus, const MollerState& minus,
                                     const Propagator& full_prop, const CorrelationSpec& spec) {
    spec.validate();
    if (plus.sign != +1 || minus.sign != -1)
        throw ConfigError("smatrix", "expected a (reactant, product) Moller state pair");

    CorrelationSeries out;
    out.times = time_grid(spec);
    out.values.resize(spec.n_t);
    double dt = out.dt();

    WaveFunction ket = plus.psi;
    full_prop.evolve(ket, spec.t_min);
    out.values[0] = inner_product(minus.psi, ket);
    for (std::size_t j = 1; j < spec.n_t; ++j) {
        full_prop.evolve(ket, dt, out.times[j - 1]);
        out.values[j] = inner_product(minus.psi, ket);
    }
    check_decay(out, spec);
    return out;
}

CorrelationOracles make_correlation_oracles(const WaveFunction& psi_plus_in,
                                            const WaveFunction& psi_minus_in,
                                            std::shared_ptr<const ExactPropagator> h_full,
                                            std::shared_ptr<const ExactPropagator> h0_g,
                                            std::shared_ptr<const ExactPropagator> h0_gp,
                                            double tau0) {
    if (!h_full || !h0_g || !h0_gp) throw ConfigError("smatrix", "null propagator");
    if (tau0 < 0.0) throw ConfigError("smatrix", "tau0 must be nonnegative");

    QState enc_p = encode_state(psi_plus_in);
    QState enc_m = encode_state(psi_minus_in);
    if (enc_p.amp.size() != h_full->dim() || enc_m.amp.size() != h_full->dim())
        throw ConfigError("smatrix", "encoded register does not match the Hamiltonian dimension");

    UnitaryOp u_r = state_prep_unitary(enc_p.amp);
    UnitaryOp u_p = state_prep_unitary(enc_m.amp);

    CorrelationOracles oc;
    oc.o_gp.factors = {exact_evolution_factor(h_full, -tau0, "exp(+iH tau0)"),
                       exact_evolution_factor(h0_gp, tau0, "exp(-iH0' tau0)"), u_p};
    oc.o_g = [h_full, h0_g, tau0, u_r](double t) {
        CompositeOp op;
        op.factors = {exact_evolution_factor(h_full, t, "exp(-iHt)"),
                      exact_evolution_factor(h_full, tau0, "exp(-iH tau0)"),
                      exact_evolution_factor(h0_g, -tau0, "exp(+iH0 tau0)"), u_r};
        return op;
    };
    // The encoded registers are unit vectors; the continuum normalization of
    // C(t) is restored by the product of the packet norms.
    oc.scale = psi_plus_in.norm() * psi_minus_in.norm();
    return oc;
}

CorrelationSeries correlation_series(const CorrelationOracles& oracles,
                                     const CorrelationSpec& spec) {
    spec.validate();
    if (spec.backend == Backend::classical)
        throw ConfigError("smatrix", "the classical backend takes Moller states, not oracles");

    CorrelationSeries out;
    out.times = time_grid(spec);
    out.values.resize(spec.n_t);
    if (spec.backend == Backend::sampled) out.stderrs.resize(spec.n_t);

    for (std::size_t j = 0; j < spec.n_t; ++j) {
        CompositeOp o_g = oracles.o_g(out.times[j]);
        if (spec.backend == Backend::statevector) {
            double re = hadamard_test(o_g, oracles.o_gp, Part::Re);
            double im = hadamard_test(o_g, oracles.o_gp, Part::Im);
            out.values[j] = oracles.scale * cplx{re, im};
        } else {
            double p1_re = hadamard_test_p1(o_g, oracles.o_gp, Part::Re);
            double p1_im = hadamard_test_p1(o_g, oracles.o_gp, Part::Im);
            ShotEstimate re = sample_shots(p1_re, spec.shots, spec.seed, 2 * j);
            ShotEstimate im = sample_shots(p1_im, spec.shots, spec.seed, 2 * j + 1);
            out.values[j] = oracles.scale * cplx{re.estimate, im.estimate};
            out.stderrs[j] =
                oracles.scale * std::hypot(re.stderr_est, im.stderr_est);
        }
    }
    check_decay(out, spec);
    return out;
}

cvec energy_transform(const CorrelationSeries& c, const rvec& energies,
                      double taper_fraction) {
    if (taper_fraction < 0.0 || taper_fraction > 0.5)
        throw ConfigError("smatrix", "taper_fraction must lie in [0, 0.5]");
    double dt = c.dt();
    double pref = dt / (2.0 * std::numbers::pi);
    std::size_t n = c.times.size();
    rvec w(n, 1.0);
    w.front() = w.back() = 0.5; // trapezoid end weights
    std::size_t ramp = static_cast<std::size_t>(taper_fraction * static_cast<double>(n));
    for (std::size_t j = 0; j < ramp; ++j) {
        double s = 0.5 * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / ramp));
        w[j] *= s;
        w[n - 1 - j] *= s;
    }
    cvec out(energies.size());
    for (std::size_t ie = 0; ie < energies.size(); ++ie) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j)
            acc += w[j] * std::exp(I_UNIT * (energies[ie] * c.times[j])) * c.values[j];
        out[ie] = pref * acc;
    }
    return out;
}

namespace {

double max_abs(const cvec& v) {
    double m = 0.0;
    for (const auto& a : v) m = std::max(m, std::abs(a));
    return m;
}

/// Signed channel momentum at total energy e, or 0 if the channel is closed.
double channel_momentum(const ChannelSpec& ch, double e) {
    double de = e - ch.e_internal;
    if (de <= 0.0) return 0.0;
    return static_cast<double>(ch.k_sign) * std::sqrt(2.0 * ch.mu * de);
}

} // namespace

CorrelationSeries tail_complete(const CorrelationSeries& c, double fit_start, double t_end) {
    double dt = c.dt();
    if (!(t_end > c.times.back()))
        throw ConfigError("smatrix", "tail_complete needs t_end beyond the series");
    std::size_t j0 = c.times.size();
    for (std::size_t j = 0; j < c.times.size(); ++j)
        if (c.times[j] >= fit_start) {
            j0 = j;
            break;
        }
    if (c.times.size() - j0 < 8)
        throw ConfigError("smatrix", "tail_complete needs at least 8 samples past fit_start");

    // Linear least squares of log C(t) = log A - s t, with the phase
    // unwrapped incrementally (valid while |E_res| dt < pi).
    double sw = 0.0, st = 0.0, stt = 0.0, sa = 0.0, sta = 0.0, sp = 0.0, stp = 0.0;
    double phase = std::arg(c.values[j0]);
    for (std::size_t j = j0; j < c.times.size(); ++j) {
        double a = std::abs(c.values[j]);
        if (a <= 0.0) throw NumericalError("smatrix", "tail_complete hit a zero sample");
        if (j > j0) phase += std::arg(c.values[j] / c.values[j - 1]);
        double t = c.times[j], la = std::log(a);
        sw += 1.0; st += t; stt += t * t;
        sa += la; sta += t * la;
        sp += phase; stp += t * phase;
    }
    double det = sw * stt - st * st;
    double gamma = (sw * sta - st * sa) / det;   // d log|C| / dt = -1/(2 tau)
    double a0 = (stt * sa - st * sta) / det;
    double omega = (sw * stp - st * sp) / det;   // d arg C / dt = -E_res
    double p0 = (stt * sp - st * stp) / det;
    if (!(gamma * (c.times.back() - c.times[j0]) < -1e-6))
        throw NumericalError("smatrix", "tail_complete: tail is not decaying");
    double rss = 0.0;
    for (std::size_t j = j0; j < c.times.size(); ++j)
        rss += std::pow(std::log(std::abs(c.values[j])) - (a0 + gamma * c.times[j]), 2);
    double rms = std::sqrt(rss / sw);
    if (rms > 0.1)
        throw NumericalError("smatrix",
                             "tail_complete: tail is not a single exponential (log-amplitude "
                             "rms residual " +
                                 std::to_string(rms) + " > 0.1)");

    CorrelationSeries out = c;
    for (double t = c.times.back() + dt; t <= t_end; t += dt) {
        out.times.push_back(t);
        out.values.push_back(std::exp(cplx{a0 + gamma * t, p0 + omega * t}));
        if (!out.stderrs.empty()) out.stderrs.push_back(0.0);
    }
    return out;
}

std::vector<SMatrixPoint> s_matrix(const CorrelationSeries& c, const ChannelSpec& in,
                                   const ChannelSpec& out, const SMatrixSpec& spec) {
    if (spec.energies.empty()) throw ConfigError("smatrix", "empty energy grid");
    cvec ct = energy_transform(c, spec.energies, spec.taper_fraction);
    double eta_in_max = max_abs(in.eta);
    double eta_out_max = max_abs(out.eta);

    std::vector<SMatrixPoint> pts(spec.energies.size());
    for (std::size_t i = 0; i < spec.energies.size(); ++i) {
        SMatrixPoint& p = pts[i];
        p.energy = spec.energies[i];
        p.k_in = channel_momentum(in, p.energy);
        p.k_out = channel_momentum(out, p.energy);
        if (p.k_in == 0.0 || p.k_out == 0.0) continue; // closed channel
        cplx eta_p = in.eta_at(p.k_in);
        cplx eta_m = out.eta_at(p.k_out);
        if (std::abs(eta_p) < spec.eta_floor * eta_in_max ||
            std::abs(eta_m) < spec.eta_floor * eta_out_max)
            continue; // packet carries no amplitude here
        double jac = std::sqrt(in.mu * out.mu / (std::abs(p.k_in) * std::abs(p.k_out)));
        p.s = ct[i] / (jac * std::conj(eta_m) * eta_p);
        p.valid = true;
    }
    return pts;
}

rvec reaction_probability(const std::vector<SMatrixPoint>& s) {
    rvec out(s.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].valid) out[i] = std::norm(s[i].s);
    return out;
}

namespace {

/// [E_lo, E_hi] window where the channel packet has |eta| above the floor.
std::pair<double, double> channel_window(const ChannelSpec& ch, double eta_floor) {
    rvec ks = ch.tgrid.k_sorted();
    double eta_max = max_abs(ch.eta);
    double k_lo = 0.0, k_hi = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (static_cast<double>(ch.k_sign) * ks[i] <= 0.0) continue;
        if (std::abs(ch.eta[i]) < eta_floor * eta_max) continue;
        double ak = std::abs(ks[i]);
        if (!any) {
            k_lo = k_hi = ak;
            any = true;
        } else {
            k_lo = std::min(k_lo, ak);
            k_hi = std::max(k_hi, ak);
        }
    }
    if (!any)
        throw NumericalError("smatrix", "channel packet has no amplitude on its momentum sign");
    return {ch.e_internal + 0.5 * k_lo * k_lo / ch.mu,
            ch.e_internal + 0.5 * k_hi * k_hi / ch.mu};
}

} // namespace

rvec informative_energies(const ChannelSpec& in, const ChannelSpec& out, std::size_t n,
                          double eta_floor) {
    if (n < 2) throw ConfigError("smatrix", "need at least two energy points");
    auto [alo, ahi] = channel_window(in, eta_floor);
    auto [blo, bhi] = channel_window(out, eta_floor);
    double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
    if (!(hi > lo))
        throw NumericalError("smatrix",
                             "the channel packets share no informative energy window");
    rvec e(n);
    for (std::size_t i = 0; i < n; ++i)
        e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return e;
}

} // namespace moller
