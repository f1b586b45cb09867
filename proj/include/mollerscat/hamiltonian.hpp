#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>

#include "mollerscat/grid.hpp"
#include "mollerscat/pauli.hpp"

namespace moller {

/// Semi-infinite square well approximation of the 1S0 nucleon-nucleon
/// potential: 3000 MeV for x <= 0.65 fm, -100 MeV for 0.65 < x <= 1.65 fm,
/// 0 beyond.
struct PiecewiseWell {
    double wall_height = 3000.0;
    double wall_edge = 0.65;
    double well_depth = -100.0;
    double well_edge = 1.65;

    double operator()(double x) const {
        if (x <= wall_edge) return wall_height;
        if (x <= well_edge) return well_depth;
        return 0.0;
    }
};

/// Pointwise well values on a grid. The grid must span at least [0, 4] fm.
rvec well_potential(const Grid1D& grid, const PiecewiseWell& well = {});

/// Collinear potential energy surface over bond coordinates (X, Y) with an
/// asymptotic diatomic slice accessor.
class CollinearPES {
public:
    enum class Provenance { surrogate_analytic, user_tabulated };

    CollinearPES(std::function<double(double, double)> eval, Provenance tag,
                 double asymptotic_distance = 1e3)
        : eval_(std::move(eval)), tag_(tag), far_(asymptotic_distance) {}

    double operator()(double x, double y) const { return eval_(x, y); }
    Provenance provenance() const { return tag_; }

    /// Diatomic potential curve of channel gamma: the PES with the other
    /// bond coordinate pushed to the asymptotic region.
    rvec asymptotic_slice(int channel, const Grid1D& axis) const;

private:
    std::function<double(double, double)> eval_;
    Provenance tag_;
    double far_;
};

struct LepsParams {
    double de = 0.1744628;  // H2 well depth (hartree)
    double a = 1.02764;     // Morse range parameter (1/bohr)
    double re = 1.40083;    // equilibrium distance (bohr)
    double sato = 0.1386;   // Sato parameter; sets the barrier height
};

/// Analytic extended-LEPS surrogate surface with a single symmetric barrier.
/// Reduces exactly to the pair Morse curve in each asymptotic channel.
CollinearPES make_leps_pes(const LepsParams& p = {});

/// Load a tabulated (X, Y, V) surface on a rectangular grid; first line is a
/// header declaring units, e.g. "# units bohr hartree". Bilinear interpolation.
CollinearPES load_tabulated_pes(const std::string& path);

/// Hermitian operator in grid-action form (spectral kinetic + diagonal
/// potential) or dense form. Immutable after construction.
class HamiltonianOp {
public:
    enum class Form { grid1d, grid2d, dense };

    static HamiltonianOp grid_1d(const Grid1D& g, rvec v, double mu);
    static HamiltonianOp grid_2d(const Grid2D& g, rvec v, double cxx, double cxy, double cyy);
    static HamiltonianOp dense(Eigen::MatrixXcd m);
    /// Pure kinetic / pure potential parts, used as product-formula summands.
    static HamiltonianOp kinetic_only_1d(const Grid1D& g, double mu);
    static HamiltonianOp potential_only_1d(const Grid1D& g, rvec v);
    static HamiltonianOp kinetic_only_2d(const Grid2D& g, double cxx, double cxy, double cyy);
    static HamiltonianOp potential_only_2d(const Grid2D& g, rvec v);

    Form form() const { return form_; }
    std::size_t dim() const;
    bool has_kinetic() const { return has_kinetic_; }
    bool has_potential() const { return has_potential_; }
    const rvec& potential() const { return v_; }
    double mass() const { return mu_; }

    /// H psi for a position-representation state on the matching grid.
    WaveFunction apply(const WaveFunction& psi) const;
    /// Same action on a bare amplitude vector (position ordering).
    void apply_amp(const cvec& in, cvec& out) const;

    double expectation(const WaveFunction& psi) const;

    /// Dense matrix in the position amplitude basis. Materialized lazily and
    /// cached; refused above 2^12 dimensions.
    const Eigen::MatrixXcd& dense_matrix() const;

    /// exp(-i T t) applied spectrally (exact); requires a kinetic-bearing,
    /// potential-free or split use.
    void apply_kinetic_phase(cvec& amp, double t) const;
    /// exp(-i V t) applied pointwise (exact).
    void apply_potential_phase(cvec& amp, double t) const;
    /// exp(-i H t) exactly, valid only for kinetic-only, potential-only or
    /// dense forms (the exactly exponentiable summands).
    void apply_exp(cvec& amp, double t) const;

    /// Kinetic dispersion at FFT-ordered momentum index (1D) or (m, l) (2D).
    double kinetic_value(double kx, double ky = 0.0) const;
    double max_kinetic() const;
    double max_abs_potential() const;

    /// Split into exactly exponentiable summands [T, V] for product formulas.
    std::vector<HamiltonianOp> split_parts() const;

    const Grid1D& grid1() const { return std::get<Grid1D>(grid_); }
    const Grid2D& grid2() const { return std::get<Grid2D>(grid_); }
    std::variant<Grid1D, Grid2D> grid_variant() const { return grid_; }

private:
    HamiltonianOp() = default;

    Form form_ = Form::dense;
    std::variant<Grid1D, Grid2D> grid_{Grid1D{}};
    rvec v_;
    double mu_ = 1.0;                    // 1D kinetic mass
    double cxx_ = 0.0, cxy_ = 0.0, cyy_ = 0.0; // 2D kinetic coefficients
    bool has_kinetic_ = false;
    bool has_potential_ = false;
    std::shared_ptr<Eigen::MatrixXcd> dense_; // payload for dense form / cache
};

/// H = T + V on a 1D grid: T = k^2/(2 mu) spectrally, V diagonal.
HamiltonianOp hamiltonian_1d(const Grid1D& grid, rvec v, double mu);

/// Kinetically coupled bond-coordinate Hamiltonian
/// (p_X^2 - p_X p_Y + p_Y^2)/m_H + V(X, Y). The three kinetic coefficients
/// are exposed for configuration overrides.
HamiltonianOp collinear_hamiltonian(const Grid2D& grid2, const CollinearPES& pes, double m_h,
                                    double cxx_scale = 1.0, double cxy_scale = 1.0,
                                    double cyy_scale = 1.0);

/// Channel asymptotic Hamiltonian on the bond grid: the full kinetic energy
/// plus the channel's diatomic slice (translation + internal vibration).
HamiltonianOp asymptotic_hamiltonian(int channel, const Grid2D& grid2, const CollinearPES& pes,
                                     double m_h);

/// Bond <-> Jacobi coordinate transform. Channel 1: X = R1 - r1/2, Y = r1;
/// channel 2: X = r2, Y = R2 - r2/2.
std::pair<double, double> jacobi_to_bond(double r_rel, double r_int, int channel);
std::pair<double, double> bond_to_jacobi(double x, double y, int channel);

/// Pauli-string decomposition of a dense Hamiltonian (spec'd wrapper around
/// pauli_decompose with the dimension check).
PauliSum hamiltonian_pauli_sum(const HamiltonianOp& h, std::size_t n_qubits);

} // namespace moller
