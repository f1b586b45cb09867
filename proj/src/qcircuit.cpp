#include "mollerscat/qcircuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace moller {

namespace {

std::size_t qubit_count(std::size_t dim) {
    if (!is_power_of_two(dim) || dim == 0)
        throw ConfigError("qcircuit", "register dimension must be a power of two");
    return static_cast<std::size_t>(std::countr_zero(dim));
}

} // namespace

QState QState::vacuum(std::size_t n_qubits) {
    QState q;
    q.n_qubits = n_qubits;
    q.amp.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    q.amp[0] = 1.0;
    return q;
}

double QState::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

QState encode_state(const WaveFunction& psi) {
    QState q;
    q.n_qubits = qubit_count(psi.size());
    if (psi.rep == Rep::momentum) {
        if (!psi.is_1d())
            throw RepresentationError("qcircuit",
                                      "momentum-representation encoding is 1D only");
        q.amp = sorted_momentum(psi);
    } else {
        q.amp = psi.amp;
    }
    double s = 0.0;
    for (const auto& a : q.amp) s += std::norm(a);
    if (s <= 0.0) throw NumericalError("qcircuit", "cannot encode the zero state");
    double inv = 1.0 / std::sqrt(s);
    for (auto& a : q.amp) a *= inv;
    return q;
}

QState encode_channel_state(std::size_t vib_index, std::size_t n_vib_qubits, const cvec& eta) {
    std::size_t m = qubit_count(eta.size());
    if (vib_index >= (std::size_t{1} << n_vib_qubits))
        throw ConfigError("qcircuit", "vibrational index exceeds the vibrational register");
    QState q;
    q.n_qubits = n_vib_qubits + m;
    q.amp.assign(std::size_t{1} << q.n_qubits, cplx{0.0, 0.0});
    double s = 0.0;
    for (const auto& a : eta) s += std::norm(a);
    if (s <= 0.0) throw NumericalError("qcircuit", "cannot encode a zero channel function");
    double inv = 1.0 / std::sqrt(s);
    std::size_t base = vib_index << m;
    for (std::size_t j = 0; j < eta.size(); ++j) q.amp[base + j] = eta[j] * inv;
    return q;
}

void UnitaryOp::apply(cvec& amp) const {
    if (amp.size() != dim_)
        throw ConfigError("qcircuit", "register dimension mismatch for factor " + label_);
    fn_(amp);
}

UnitaryOp state_prep_unitary(const cvec& psi_target) {
    std::size_t dim = psi_target.size();
    qubit_count(dim); // power-of-two check
    Eigen::VectorXcd t = Eigen::Map<const Eigen::VectorXcd>(psi_target.data(), dim);
    double nrm = t.norm();
    if (std::abs(nrm - 1.0) > 1e-8)
        throw ConfigError("qcircuit", "state-prep target must have unit vector norm");
    t /= nrm;

    // Householder reflector taking e0 to the target (up to a global phase
    // absorbed into the reflector): U = e^{i arg(t0)} (I - 2 w w^dag).
    cplx t0 = t(0);
    cplx phase = std::abs(t0) > 1e-14 ? t0 / std::abs(t0) : cplx{1.0, 0.0};
    Eigen::VectorXcd w = t;
    w(0) -= phase; // t - phase * e0
    double wn = w.norm();
    std::shared_ptr<Eigen::VectorXcd> wptr;
    if (wn > 1e-14) {
        wptr = std::make_shared<Eigen::VectorXcd>(w / wn);
    }
    cplx gphase = phase; // (I - 2 w w^dag) e0 = conj(phase) t, so U e0 = +t
    return UnitaryOp("state-prep", dim, [wptr, gphase](cvec& amp) {
        Eigen::Map<Eigen::VectorXcd> v(amp.data(), amp.size());
        if (wptr) v -= 2.0 * (*wptr) * (wptr->dot(v));
        v *= gphase;
    });
}

UnitaryOp exact_evolution_factor(std::shared_ptr<const ExactPropagator> prop, double t,
                                 const std::string& label) {
    if (!prop) throw ConfigError("qcircuit", "null propagator");
    return UnitaryOp(label, prop->dim(),
                     [prop, t](cvec& amp) { prop->evolve_amp(amp, t); });
}

UnitaryOp trotterized_factor(const HamiltonianOp& h, double t, std::size_t n_steps, int order) {
    if (n_steps == 0) throw ConfigError("qcircuit", "n_steps must be positive");
    auto parts = std::make_shared<std::vector<HamiltonianOp>>(h.split_parts());
    double dt = t / static_cast<double>(n_steps);
    return UnitaryOp("trotter", h.dim(), [parts, dt, n_steps, order](cvec& amp) {
        for (std::size_t s = 0; s < n_steps; ++s)
            trotter_step_amp(amp, *parts, dt, order);
    });
}

UnitaryOp trotterized_factor(const PauliSum& sum, double t, std::size_t n_steps, int order) {
    if (n_steps == 0) throw ConfigError("qcircuit", "n_steps must be positive");
    if (order != 1 && order != 2)
        throw ConfigError("qcircuit", "Pauli-sum Trotterization supports orders 1 and 2");
    std::size_t dim = std::size_t{1} << sum.n_qubits;
    auto terms = std::make_shared<std::vector<PauliTerm>>(sum.terms);
    double dt = t / static_cast<double>(n_steps);
    return UnitaryOp("trotter-pauli", dim, [terms, dt, n_steps, order](cvec& amp) {
        for (std::size_t s = 0; s < n_steps; ++s) {
            if (order == 1) {
                for (auto it = terms->rbegin(); it != terms->rend(); ++it)
                    apply_pauli_exp(it->string, it->coeff * dt, amp);
            } else {
                for (auto it = terms->rbegin(); it != terms->rend(); ++it)
                    apply_pauli_exp(it->string, 0.5 * it->coeff * dt, amp);
                for (const auto& term : *terms)
                    apply_pauli_exp(term.string, 0.5 * term.coeff * dt, amp);
            }
        }
    });
}

void CompositeOp::apply(cvec& amp) const {
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) it->apply(amp);
}

namespace {

/// The full (1 + n)-qubit statevector after the modified Hadamard test
/// circuit, starting from |0>_anc (x) |0...0>_sys. The ancilla is qubit 0,
/// so even indices carry the |0>-controlled branch and odd indices the
/// |1>-controlled one.
cvec hadamard_test_state(const CompositeOp& o_g, const CompositeOp& o_gp, Part part) {
    std::size_t dim = o_g.dim();
    if (dim == 0 || o_gp.dim() != dim)
        throw ConfigError("qcircuit", "composite operators must share the register dimension");

    cvec branch0(dim, cplx{0.0, 0.0});
    branch0[0] = 1.0;
    cvec branch1 = branch0;
    // After H (and S^dag for the imaginary part) the ancilla state is
    // (|0> + c |1>)/sqrt(2); the controls then route each branch.
    cplx c1 = part == Part::Re ? cplx{1.0, 0.0} : cplx{0.0, -1.0};
    o_gp.apply(branch0);
    o_g.apply(branch1);

    cvec out(2 * dim);
    const double inv2 = 0.5; // two H factors of 1/sqrt(2)
    for (std::size_t j = 0; j < dim; ++j) {
        cplx b0 = branch0[j];
        cplx b1 = c1 * branch1[j];
        out[2 * j] = inv2 * (b0 + b1);
        out[2 * j + 1] = inv2 * (b0 - b1);
    }
    return out;
}

} // namespace

double hadamard_test(const CompositeOp& o_g, const CompositeOp& o_gp, Part part) {
    cvec st = hadamard_test_state(o_g, o_gp, part);
    double z = 0.0;
    for (std::size_t i = 0; i < st.size(); ++i)
        z += (i & 1 ? -1.0 : 1.0) * std::norm(st[i]);
    return z;
}

double hadamard_test_p1(const CompositeOp& o_g, const CompositeOp& o_gp, Part part) {
    cvec st = hadamard_test_state(o_g, o_gp, part);
    double p1 = 0.0;
    for (std::size_t i = 1; i < st.size(); i += 2) p1 += std::norm(st[i]);
    return p1;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t CounterRng::next_u64() {
    // Counter-based: each output is a pure function of (seed, stream, counter),
    // so parallel streams and replays are trivially reproducible.
    std::uint64_t h = splitmix64(seed_ ^ splitmix64(stream_ ^ splitmix64(counter_++)));
    return h;
}

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

ShotEstimate sample_shots(double p1, std::uint64_t n_shots, std::uint64_t seed,
                          std::uint64_t stream) {
    if (n_shots == 0) throw ConfigError("qcircuit", "n_shots must be positive");
    if (p1 < -1e-12 || p1 > 1.0 + 1e-12)
        throw NumericalError("qcircuit", "ancilla probability out of [0, 1]");
    p1 = std::clamp(p1, 0.0, 1.0);
    CounterRng rng(seed, stream);
    std::uint64_t c1 = 0;
    for (std::uint64_t s = 0; s < n_shots; ++s)
        if (rng.uniform() < p1) ++c1;
    ShotEstimate est;
    est.count1 = c1;
    est.n_shots = n_shots;
    double p_hat = static_cast<double>(c1) / static_cast<double>(n_shots);
    est.estimate = 1.0 - 2.0 * p_hat;
    est.stderr_est = 2.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_shots));
    return est;
}

std::uint64_t shot_plan(double eps, double delta) {
    if (eps <= 0.0 || delta <= 0.0 || delta >= 1.0)
        throw ConfigError("qcircuit", "need eps > 0 and delta in (0, 1)");
    return static_cast<std::uint64_t>(std::ceil(2.0 * std::log(2.0 / delta) / (eps * eps)));
}

} // namespace moller
