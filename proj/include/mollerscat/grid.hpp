#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "mollerscat/errors.hpp"

namespace moller {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

/// Uniform 1D grid together with its FFT-conjugate momentum grid.
/// n must be a power of two (the qubit encoding depends on it).
struct Grid1D {
    std::size_t n = 0;
    double x_min = 0.0;
    double dx = 0.0;

    static Grid1D make(std::size_t n, double x_min, double dx);

    double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
    double x_max() const { return x_min + static_cast<double>(n - 1) * dx; }
    double length() const { return static_cast<double>(n) * dx; }
    double dk() const { return 2.0 * std::numbers::pi / length(); }
    double k_max() const { return std::numbers::pi / dx; }

    /// Momentum value at FFT-ordered index m: k = dk*m for m < n/2, dk*(m-n) otherwise.
    double k_fft(std::size_t m) const {
        auto half = n / 2;
        return dk() * (m < half ? static_cast<double>(m)
                                : static_cast<double>(m) - static_cast<double>(n));
    }

    /// Monotonically increasing momentum grid, [-pi/dx, pi/dx).
    rvec k_sorted() const;

    /// FFT-ordered index holding the i-th sorted momentum.
    std::size_t fft_index_of_sorted(std::size_t i) const {
        return (i + n / 2) % n;
    }

    bool operator==(const Grid1D&) const = default;
};

/// Tensor-product grid for the collinear problem. Amplitudes are stored
/// row-major: index = ix * gy.n + iy (X outer, Y inner).
struct Grid2D {
    Grid1D gx;
    Grid1D gy;

    std::size_t size() const { return gx.n * gy.n; }
    std::size_t index(std::size_t ix, std::size_t iy) const { return ix * gy.n + iy; }

    bool operator==(const Grid2D&) const = default;
};

enum class Rep { position, momentum };

/// Complex amplitude vector over a grid, continuum-normalized: the norm
/// includes the volume element (dx, or dk in the momentum representation),
/// so momentum amplitudes read directly as continuum expansion coefficients.
struct WaveFunction {
    std::variant<Grid1D, Grid2D> grid;
    cvec amp;
    Rep rep = Rep::position;

    bool is_1d() const { return std::holds_alternative<Grid1D>(grid); }
    const Grid1D& grid1() const { return std::get<Grid1D>(grid); }
    const Grid2D& grid2() const { return std::get<Grid2D>(grid); }
    std::size_t size() const { return amp.size(); }

    /// Volume element of the active representation.
    double dvol() const;

    double norm() const;
    void normalize();

    /// Probability mass in the outermost cells of the grid (both ends; the
    /// full frame in 2D). Used by the boundary-breach detector.
    double edge_band_probability() const;
};

/// Continuum inner product <a|b> (conjugate on a). Both must share grid and rep.
cplx inner_product(const WaveFunction& a, const WaveFunction& b);

/// Unitary position -> momentum transform (continuum-normalized). Output
/// amplitudes are stored in FFT ordering; use sorted_momentum() for public,
/// monotonically ordered data.
WaveFunction to_momentum(const WaveFunction& psi);

/// Exact inverse of to_momentum.
WaveFunction to_position(const WaveFunction& phi);

/// Momentum amplitudes of a 1D momentum-representation state in sorted k order.
cvec sorted_momentum(const WaveFunction& phi);

bool is_power_of_two(std::size_t n);

} // namespace moller
