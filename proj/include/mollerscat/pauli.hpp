#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mollerscat/grid.hpp"

namespace moller {

/// A Pauli string like "IXZY". Character i acts on qubit i, where qubit 0
/// addresses the least significant bit of the basis index.
struct PauliString {
    std::string ops;

    std::size_t n_qubits() const { return ops.size(); }
    Eigen::MatrixXcd matrix() const;
};

struct PauliTerm {
    double coeff;
    PauliString string;
};

struct PauliSum {
    std::vector<PauliTerm> terms;
    std::size_t n_qubits = 0;

    Eigen::MatrixXcd reconstruct() const;
};

/// Decompose a Hermitian matrix of dimension 2^n into sum_P c_P P with
/// c_P = Tr(P H) / 2^n; terms with |c_P| < drop_tol are omitted.
PauliSum pauli_decompose(const Eigen::MatrixXcd& h, std::size_t n_qubits,
                         double drop_tol = 1e-12);

/// Statevector action of a Pauli string.
void apply_pauli(const PauliString& p, cvec& amp);

/// Statevector action of exp(-i theta P).
void apply_pauli_exp(const PauliString& p, double theta, cvec& amp);

} // namespace moller
