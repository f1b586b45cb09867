#pragma once

namespace moller::constants {

// Nuclear (MeV, fm) unit system with hbar = 1.
inline constexpr double hbar_c_mev_fm = 197.327;   // MeV*fm
inline constexpr double nucleon_mass_mev = 938.918; // average (m_p + m_n)/2 * c^2

// Effective inverse-kinetic mass for the two-nucleon relative motion on a
// (MeV, fm) grid: T(k) = k^2 / (2 mu_eff) with k in 1/fm and T in MeV.
inline constexpr double two_nucleon_mu_eff =
    (nucleon_mass_mev / 2.0) / (hbar_c_mev_fm * hbar_c_mev_fm);

// Atomic units.
inline constexpr double hydrogen_mass_au = 1836.152673; // m_H / m_e
inline constexpr double hartree_ev = 27.211386;

} // namespace moller::constants
