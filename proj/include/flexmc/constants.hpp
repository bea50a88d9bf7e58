#pragma once

namespace flexmc {

inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19; // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
inline constexpr double kAvogadro = 6.02214076e23;          // 1/mol
inline constexpr double kJoulePerEv = 1.602176634e-19;      // J/eV

} // namespace flexmc
