#include "mollerscat/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mollerscat/fft.hpp"

namespace moller {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
const double inv_sqrt_2pi = 1.0 / std::sqrt(two_pi);

std::size_t edge_band_width(std::size_t n) {
    return std::max<std::size_t>(2, n / 32);
}
} // namespace

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

Grid1D Grid1D::make(std::size_t n, double x_min, double dx) {
    if (!is_power_of_two(n))
        throw ConfigError("grid-core", "grid size must be a power of two, got " + std::to_string(n));
    if (dx <= 0.0)
        throw ConfigError("grid-core", "grid spacing must be positive");
    return Grid1D{n, x_min, dx};
}

rvec Grid1D::k_sorted() const {
    rvec ks(n);
    for (std::size_t i = 0; i < n; ++i)
        ks[i] = dk() * (static_cast<double>(i) - static_cast<double>(n / 2));
    return ks;
}

double WaveFunction::dvol() const {
    if (is_1d()) {
        const auto& g = grid1();
        return rep == Rep::position ? g.dx : g.dk();
    }
    const auto& g = grid2();
    return rep == Rep::position ? g.gx.dx * g.gy.dx : g.gx.dk() * g.gy.dk();
}

double WaveFunction::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s * dvol());
}

void WaveFunction::normalize() {
    double nrm = norm();
    if (nrm <= 0.0)
        throw NumericalError("grid-core", "cannot normalize a zero wavefunction");
    for (auto& a : amp) a /= nrm;
}

double WaveFunction::edge_band_probability() const {
    double dv = dvol();
    double p = 0.0;
    if (is_1d()) {
        const auto& g = grid1();
        std::size_t w = edge_band_width(g.n);
        for (std::size_t j = 0; j < w; ++j) {
            p += std::norm(amp[j]);
            p += std::norm(amp[g.n - 1 - j]);
        }
        return p * dv;
    }
    const auto& g = grid2();
    std::size_t wx = edge_band_width(g.gx.n);
    std::size_t wy = edge_band_width(g.gy.n);
    for (std::size_t ix = 0; ix < g.gx.n; ++ix) {
        bool x_edge = ix < wx || ix >= g.gx.n - wx;
        for (std::size_t iy = 0; iy < g.gy.n; ++iy) {
            if (x_edge || iy < wy || iy >= g.gy.n - wy) p += std::norm(amp[g.index(ix, iy)]);
        }
    }
    return p * dv;
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid != b.grid || a.rep != b.rep)
        throw NumericalError("grid-core", "inner product between mismatched wavefunctions");
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.amp.size(); ++j) s += std::conj(a.amp[j]) * b.amp[j];
    return s * a.dvol();
}

WaveFunction to_momentum(const WaveFunction& psi) {
    if (psi.rep != Rep::position)
        throw RepresentationError("grid-core", "to_momentum expects a position-representation state");
    WaveFunction out = psi;
    out.rep = Rep::momentum;
    if (psi.is_1d()) {
        const auto& g = psi.grid1();
        fft::forward(out.amp.data(), g.n);
        double scale = g.dx * inv_sqrt_2pi;
        for (std::size_t m = 0; m < g.n; ++m)
            out.amp[m] *= scale * std::exp(-I_UNIT * (g.k_fft(m) * g.x_min));
    } else {
        const auto& g = psi.grid2();
        fft::forward2(out.amp.data(), g.gx.n, g.gy.n);
        double scale = g.gx.dx * g.gy.dx * inv_sqrt_2pi * inv_sqrt_2pi;
        for (std::size_t m = 0; m < g.gx.n; ++m) {
            cplx px = scale * std::exp(-I_UNIT * (g.gx.k_fft(m) * g.gx.x_min));
            for (std::size_t l = 0; l < g.gy.n; ++l)
                out.amp[g.index(m, l)] *= px * std::exp(-I_UNIT * (g.gy.k_fft(l) * g.gy.x_min));
        }
    }
    return out;
}

WaveFunction to_position(const WaveFunction& phi) {
    if (phi.rep != Rep::momentum)
        throw RepresentationError("grid-core", "to_position expects a momentum-representation state");
    WaveFunction out = phi;
    out.rep = Rep::position;
    if (phi.is_1d()) {
        const auto& g = phi.grid1();
        double scale = g.dk() * inv_sqrt_2pi;
        for (std::size_t m = 0; m < g.n; ++m)
            out.amp[m] *= scale * std::exp(I_UNIT * (g.k_fft(m) * g.x_min));
        fft::backward(out.amp.data(), g.n);
    } else {
        const auto& g = phi.grid2();
        double scale = g.gx.dk() * g.gy.dk() * inv_sqrt_2pi * inv_sqrt_2pi;
        for (std::size_t m = 0; m < g.gx.n; ++m) {
            cplx px = scale * std::exp(I_UNIT * (g.gx.k_fft(m) * g.gx.x_min));
            for (std::size_t l = 0; l < g.gy.n; ++l)
                out.amp[g.index(m, l)] *= px * std::exp(I_UNIT * (g.gy.k_fft(l) * g.gy.x_min));
        }
        fft::backward2(out.amp.data(), g.gx.n, g.gy.n);
    }
    return out;
}

cvec sorted_momentum(const WaveFunction& phi) {
    if (phi.rep != Rep::momentum)
        throw RepresentationError("grid-core", "sorted_momentum expects a momentum-representation state");
    if (!phi.is_1d())
        throw NumericalError("grid-core", "sorted_momentum is defined for 1D states");
    const auto& g = phi.grid1();
    cvec out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = phi.amp[g.fft_index_of_sorted(i)];
    return out;
}

} // namespace moller
