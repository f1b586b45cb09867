#include "mollerscat/propagation.hpp"

#include <cmath>

namespace moller {

void PropagatorSpec::validate() const {
    if (dt < 0.0) throw ConfigError("propagation", "dt must be nonnegative");
    if (order != 1 && order != 2 && order != 4)
        throw ConfigError("propagation", "Trotter order must be 1, 2 or 4");
}

ExactPropagator::ExactPropagator(const HamiltonianOp& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense_matrix());
    if (es.info() != Eigen::Success)
        throw NumericalError("propagation", "eigendecomposition failed");
    evecs_ = es.eigenvectors();
    evals_ = es.eigenvalues();
}

void ExactPropagator::evolve_amp(cvec& amp, double t) const {
    Eigen::Map<Eigen::VectorXcd> v(amp.data(), amp.size());
    Eigen::VectorXcd c = evecs_.adjoint() * v;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-I_UNIT * (evals_(i) * t));
    v = evecs_ * c;
}

double dt_max(const HamiltonianOp& h) {
    double norm_est;
    if (h.form() == HamiltonianOp::Form::dense) {
        const auto& m = h.dense_matrix();
        norm_est = m.cwiseAbs().rowwise().sum().maxCoeff();
    } else {
        norm_est = h.max_kinetic() + h.max_abs_potential();
    }
    if (norm_est <= 0.0)
        throw NumericalError("propagation", "cannot estimate the spectral radius of a zero operator");
    return 0.1 / norm_est;
}

void trotter_step_amp(cvec& amp, std::span<const HamiltonianOp> parts, double dt, int order) {
    if (parts.empty()) throw ConfigError("propagation", "no Hamiltonian summands");
    switch (order) {
        case 1:
            // operator e^{-iH_1 dt} ... e^{-iH_m dt}: apply right-to-left
            for (std::size_t i = parts.size(); i-- > 0;) parts[i].apply_exp(amp, dt);
            return;
        case 2:
            for (std::size_t i = parts.size(); i-- > 0;) parts[i].apply_exp(amp, 0.5 * dt);
            for (std::size_t i = 0; i < parts.size(); ++i) parts[i].apply_exp(amp, 0.5 * dt);
            return;
        case 4: {
            // Suzuki recursion over the symmetric second-order step.
            const double w1 = 1.0 / (4.0 - std::pow(4.0, 1.0 / 3.0));
            const double w2 = 1.0 - 4.0 * w1;
            trotter_step_amp(amp, parts, w1 * dt, 2);
            trotter_step_amp(amp, parts, w1 * dt, 2);
            trotter_step_amp(amp, parts, w2 * dt, 2);
            trotter_step_amp(amp, parts, w1 * dt, 2);
            trotter_step_amp(amp, parts, w1 * dt, 2);
            return;
        }
        default:
            throw ConfigError("propagation", "Trotter order must be 1, 2 or 4");
    }
}

WaveFunction trotter_step(const WaveFunction& psi, std::span<const HamiltonianOp> parts,
                          double dt, int order) {
    WaveFunction out = psi;
    trotter_step_amp(out.amp, parts, dt, order);
    return out;
}

Propagator::Propagator(const HamiltonianOp& h, const PropagatorSpec& spec) : h_(h), spec_(spec) {
    spec_.validate();
    if (spec_.method == Method::exact_eigen) {
        exact_ = std::make_shared<ExactPropagator>(h_);
        dt_ = 0.0;
    } else {
        if (h_.form() == HamiltonianOp::Form::dense)
            throw ConfigError("propagation",
                              "split-operator/Trotter stepping requires a grid-action Hamiltonian");
        parts_ = h_.split_parts();
        dt_ = spec_.dt > 0.0 ? spec_.dt : dt_max(h_);
    }
}

void Propagator::evolve(WaveFunction& psi, double t, double t_offset) const {
    auto check = [&](double t_now) {
        if (!spec_.check_breach || psi.rep != Rep::position) return;
        double p = psi.edge_band_probability();
        if (p > spec_.breach_threshold)
            throw BoundaryBreachError("propagation", t_offset + t_now, p);
    };
    if (t == 0.0) {
        check(0.0);
        return;
    }
    if (spec_.method == Method::exact_eigen) {
        exact_->evolve_amp(psi.amp, t);
        check(t);
        return;
    }
    auto n_steps = static_cast<std::size_t>(std::ceil(std::abs(t) / dt_ - 1e-12));
    n_steps = std::max<std::size_t>(n_steps, 1);
    double step = t / static_cast<double>(n_steps);
    for (std::size_t s = 0; s < n_steps; ++s) {
        if (spec_.method == Method::split_operator) {
            // kinetic-potential-kinetic symmetric splitting
            parts_[0].apply_exp(psi.amp, 0.5 * step);
            for (std::size_t i = 1; i < parts_.size(); ++i) parts_[i].apply_exp(psi.amp, step);
            parts_[0].apply_exp(psi.amp, 0.5 * step);
        } else {
            trotter_step_amp(psi.amp, parts_, step, spec_.order);
        }
        check(static_cast<double>(s + 1) * step);
    }
}

WaveFunction propagate(const WaveFunction& psi, const HamiltonianOp& h, double t,
                       const PropagatorSpec& spec) {
    Propagator prop(h, spec);
    WaveFunction out = psi;
    prop.evolve(out, t);
    return out;
}

} // namespace moller
