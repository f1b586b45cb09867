#include "mollerscat/pauli.hpp"

#include <bit>
#include <cmath>

namespace moller {

namespace {

Eigen::Matrix2cd single_pauli(char c) {
    Eigen::Matrix2cd m;
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw ConfigError("pauli", std::string("unknown Pauli label '") + c + "'");
    }
    return m;
}

// Depth-first block reduction: at each level the matrix splits on its most
// significant qubit into [[A,B],[C,D]], and the four Pauli components are
// I: A+D, X: B+C, Y: i(B-C), Z: A-D.
void decompose_rec(const Eigen::MatrixXcd& m, std::size_t qubit, std::string& ops,
                   std::vector<std::pair<std::string, cplx>>& out) {
    if (m.rows() == 1) {
        out.emplace_back(ops, m(0, 0));
        return;
    }
    Eigen::Index h = m.rows() / 2;
    auto a = m.topLeftCorner(h, h);
    auto b = m.topRightCorner(h, h);
    auto c = m.bottomLeftCorner(h, h);
    auto d = m.bottomRightCorner(h, h);
    const char labels[4] = {'I', 'X', 'Y', 'Z'};
    Eigen::MatrixXcd parts[4] = {a + d, b + c, cplx(0, 1) * (b - c), a - d};
    for (int i = 0; i < 4; ++i) {
        ops[qubit] = labels[i];
        decompose_rec(parts[i], qubit == 0 ? 0 : qubit - 1, ops, out);
    }
}

} // namespace

Eigen::MatrixXcd PauliString::matrix() const {
    // qubit 0 addresses the least significant index bit, so ops[n-1] ends up
    // as the outermost Kronecker factor
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = 0; q < n_qubits(); ++q) {
        Eigen::Matrix2cd s = single_pauli(ops[q]);
        Eigen::MatrixXcd next(2 * m.rows(), 2 * m.cols());
        next << s(0, 0) * m, s(0, 1) * m, s(1, 0) * m, s(1, 1) * m;
        m = std::move(next);
    }
    return m;
}

Eigen::MatrixXcd PauliSum::reconstruct() const {
    std::size_t dim = std::size_t{1} << n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : terms) m += t.coeff * t.string.matrix();
    return m;
}

PauliSum pauli_decompose(const Eigen::MatrixXcd& h, std::size_t n_qubits, double drop_tol) {
    std::size_t dim = std::size_t{1} << n_qubits;
    if (static_cast<std::size_t>(h.rows()) != dim || static_cast<std::size_t>(h.cols()) != dim)
        throw ConfigError("pauli", "matrix dimension does not match 2^n_qubits");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw NumericalError("pauli", "pauli_decompose requires a Hermitian matrix");
    if (n_qubits > 10)
        throw ConfigError("pauli", "pauli_decompose limited to 10 qubits");

    std::vector<std::pair<std::string, cplx>> raw;
    raw.reserve(dim * dim);
    std::string ops(n_qubits, 'I');
    decompose_rec(h, n_qubits - 1, ops, raw);

    double scale = 1.0 / static_cast<double>(dim);
    PauliSum sum;
    sum.n_qubits = n_qubits;
    for (auto& [s, c] : raw) {
        cplx v = c * scale;
        if (std::abs(v) < drop_tol) continue;
        sum.terms.push_back({v.real(), PauliString{s}});
    }
    return sum;
}

void apply_pauli(const PauliString& p, cvec& amp) {
    std::size_t n = p.n_qubits();
    if (amp.size() != (std::size_t{1} << n))
        throw ConfigError("pauli", "statevector size does not match Pauli string width");
    std::size_t xmask = 0, ymask = 0, zmask = 0;
    for (std::size_t q = 0; q < n; ++q) {
        char c = p.ops[q];
        if (c == 'X' || c == 'Y') xmask |= std::size_t{1} << q;
        if (c == 'Y') ymask |= std::size_t{1} << q;
        if (c == 'Z') zmask |= std::size_t{1} << q;
    }
    int ny = std::popcount(ymask);
    // (-i)^ny as a complex prefactor
    static const cplx ipow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    cplx pref = ipow[ny % 4];

    cvec src = amp;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        int sign_bits = std::popcount(i & ymask) + std::popcount(i & zmask);
        cplx phase = (sign_bits & 1) ? -pref : pref;
        amp[i] = phase * src[i ^ xmask];
    }
}

void apply_pauli_exp(const PauliString& p, double theta, cvec& amp) {
    cvec pv = amp;
    apply_pauli(p, pv);
    double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = c * amp[i] - I_UNIT * (s * pv[i]);
}

} // namespace moller
