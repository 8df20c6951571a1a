#pragma once

// Physical constants, CODATA 2018 (SI exact where the 2019 redefinition makes
// them so). All quantities SI: Hz, H, F, Ohm, K, W, unless a name says otherwise.

namespace jpa::constants {

inline constexpr double flux_quantum = 2.067833848461929e-15;        // Wb, h/2e
inline constexpr double reduced_planck = 1.0545718176461565e-34;     // J s
inline constexpr double planck = 6.62607015e-34;                     // J s (exact)
inline constexpr double boltzmann = 1.380649e-23;                    // J/K (exact)
inline constexpr double light_speed = 299792458.0;                   // m/s (exact)
inline constexpr double electron_charge = 1.602176634e-19;           // C (exact)
inline constexpr double free_space_impedance = 376.730313668;        // Ohm

}  // namespace jpa::constants
