#pragma once

#include <vector>

namespace flexmc {

/// Competitive binding equilibrium: one receptor pool, n ligand species.
/// All concentrations share one unit; the solution is unit-agnostic.
struct EquilibriumProblem {
  struct Species {
    double L0 = 0.0;  // total ligand concentration
    double K = 0.0;   // dissociation constant, same unit
  };
  double P0 = 0.0;  // total receptor concentration
  std::vector<Species> species;
};

struct EquilibriumSolution {
  double P_free = 0.0;
  std::vector<double> PL;      // bound complex per species
  std::vector<double> L_free;  // free ligand per species
  long iterations = 0;         // sweeps over the species list
  double residual = 0.0;       // implicit-form balance at the solution
};

/// Mass-balance residual P0 - x - sum_j L0_j*x/(x+K_j); strictly decreasing in x.
double residual(const EquilibriumProblem& p, double x);

/// Cyclic per-species quadratic updates of the bound complexes until the
/// largest per-sweep change falls below tol*max(P0, eps).
EquilibriumSolution solve_iterative(const EquilibriumProblem& p, double tol = 1e-12,
                                    long max_iter = 1000000);

/// Independent oracle: bisection on the residual over [0, P0].
/// tol <= 0 runs to floating-point exhaustion.
EquilibriumSolution solve_bisection(const EquilibriumProblem& p, double tol = 0.0);

struct OccupancyFractions {
  std::vector<double> theta;  // bound fraction per species
  double theta_sum = 0.0;
};

OccupancyFractions occupancy_fractions(const EquilibriumSolution& sol, double P0);

/// Langmuir-style bound probabilities from total concentrations (no receptor
/// depletion of ligand): p_B = S/(1+S), p_Bj = (L0_j/K_j)/(1+S), S = sum L0_n/K_n.
struct BoundProbability {
  double p_B = 0.0;
  std::vector<double> p_Bj;
};

BoundProbability bound_probability(const std::vector<EquilibriumProblem::Species>& species);

} // namespace flexmc
