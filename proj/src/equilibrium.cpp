#include "flexmc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flexmc/errors.hpp"

namespace flexmc {

namespace {

void check_problem(const EquilibriumProblem& p) {
  if (!(p.P0 >= 0)) throw DomainError("equilibrium: P0 >= 0 required");
  for (const auto& s : p.species) {
    if (!(s.L0 >= 0)) throw DomainError("equilibrium: L0 >= 0 required");
    if (!(s.K > 0)) throw DomainError("equilibrium: K > 0 required");
  }
}

// Physical root of PL^2 - (P+L0+K) PL + P*L0 = 0, evaluated in the
// cancellation-free form 2*P*L0 / (b + sqrt(b^2 - 4*P*L0)).
double pair_complex(double pool, double L0, double K) {
  double b = pool + L0 + K;
  double disc = b * b - 4.0 * pool * L0;
  if (disc < 0) {
    throw InternalError("equilibrium: negative discriminant " + std::to_string(disc));
  }
  double denom = b + std::sqrt(disc);
  if (denom == 0.0) return 0.0;
  return 2.0 * pool * L0 / denom;
}

// Newton-polish the free-receptor value on the implicit balance, then
// re-derive the complexes from it. The balance slope is at least one in
// magnitude, so the step recovers full relative accuracy in P_free even when
// P_free << P0, where the running P_avail difference has lost digits.
void polish(const EquilibriumProblem& p, EquilibriumSolution& sol) {
  double x = std::max(sol.P_free, 0.0);
  for (int pass = 0; pass < 4; ++pass) {
    double res = p.P0 - x;
    double slope = -1.0;
    for (const auto& sp : p.species) {
      double denom = x + sp.K;
      res -= sp.L0 * x / denom;
      slope -= sp.L0 * sp.K / (denom * denom);
    }
    double xn = x - res / slope;
    if (!(xn >= 0) || !std::isfinite(xn) || xn > p.P0) break;
    if (xn == x) { x = xn; break; }
    x = xn;
  }
  sol.P_free = x;
  for (size_t j = 0; j < p.species.size(); ++j) {
    sol.PL[j] = p.species[j].L0 * x / (x + p.species[j].K);
    sol.L_free[j] = p.species[j].L0 - sol.PL[j];
  }
  sol.residual = residual(p, sol.P_free);
}

} // namespace

double residual(const EquilibriumProblem& p, double x) {
  if (!(x >= 0)) throw DomainError("equilibrium residual: x >= 0 required");
  double acc = p.P0 - x;
  for (const auto& s : p.species) acc -= s.L0 * x / (x + s.K);
  return acc;
}

// Bracketed Newton on the implicit balance; returns the machine-accurate
// free-receptor value starting from x0 in [0, P0].
static double refine_root(const EquilibriumProblem& p, double x0) {
  double lo = 0.0, hi = p.P0;
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < 60; ++it) {
    double res = p.P0 - x;
    double slope = -1.0;
    for (const auto& sp : p.species) {
      double denom = x + sp.K;
      res -= sp.L0 * x / denom;
      slope -= sp.L0 * sp.K / (denom * denom);
    }
    if (res > 0) lo = x; else hi = x;
    double xn = x - res / slope;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) break;
    x = xn;
  }
  return x;
}

EquilibriumSolution solve_iterative(const EquilibriumProblem& p, double tol, long max_iter) {
  check_problem(p);
  if (!(tol > 0)) throw DomainError("equilibrium: tol > 0 required");
  if (max_iter < 1) throw DomainError("equilibrium: max_iter >= 1 required");

  const size_t n = p.species.size();
  EquilibriumSolution sol;
  sol.PL.assign(n, 0.0);
  sol.L_free.assign(n, 0.0);

  double P_avail = p.P0;
  std::vector<double> PL_old(n, 0.0);
  const double scale = std::max(p.P0, std::numeric_limits<double>::min());

  long iter = 0;
  long refine_at = 64;
  for (; iter < max_iter; ++iter) {
    double max_change = 0.0;
    for (size_t j = 0; j < n; ++j) {
      double pool = P_avail + PL_old[j];
      double PL_new = pair_complex(pool, p.species[j].L0, p.species[j].K);
      P_avail = pool - PL_new;
      max_change = std::max(max_change, std::abs(PL_new - PL_old[j]));
      PL_old[j] = PL_new;
    }
    if (max_change <= tol * scale) {
      ++iter;
      break;
    }
    // nearly-degenerate competition contracts slowly; periodically jump the
    // pool to the balance root and let the sweep criterion confirm it
    if (iter + 1 == refine_at) {
      double x = refine_root(p, std::max(P_avail, 0.0));
      for (size_t j = 0; j < n; ++j) {
        PL_old[j] = p.species[j].L0 * x / (x + p.species[j].K);
      }
      P_avail = x;
      refine_at *= 4;
    }
  }
  sol.iterations = iter;
  sol.P_free = P_avail;
  sol.PL = PL_old;
  for (size_t j = 0; j < n; ++j) sol.L_free[j] = p.species[j].L0 - sol.PL[j];
  sol.residual = residual(p, std::max(sol.P_free, 0.0));

  if (iter >= max_iter) {
    throw ConvergenceError("equilibrium solver did not converge within " +
                               std::to_string(max_iter) + " sweeps",
                           sol.P_free, sol.residual);
  }
  polish(p, sol);
  return sol;
}

EquilibriumSolution solve_bisection(const EquilibriumProblem& p, double tol) {
  check_problem(p);
  const size_t n = p.species.size();
  EquilibriumSolution sol;
  sol.PL.assign(n, 0.0);
  sol.L_free.assign(n, 0.0);

  double lo = 0.0;
  double hi = p.P0;
  // residual(0) = P0 >= 0 and residual(P0) <= 0; strictly decreasing in between.
  long iter = 0;
  while (true) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    if (tol > 0 && (hi - lo) <= tol * std::max(p.P0, 1e-300)) break;
    double r = residual(p, mid);
    if (r >= 0) lo = mid; else hi = mid;
    ++iter;
  }
  double x = 0.5 * (lo + hi);
  sol.P_free = x;
  sol.iterations = iter;
  for (size_t j = 0; j < n; ++j) {
    sol.PL[j] = p.species[j].L0 * x / (x + p.species[j].K);
    sol.L_free[j] = p.species[j].L0 - sol.PL[j];
  }
  sol.residual = residual(p, x);
  return sol;
}

OccupancyFractions occupancy_fractions(const EquilibriumSolution& sol, double P0) {
  if (!(P0 > 0)) throw DomainError("occupancy_fractions: P0 > 0 required");
  OccupancyFractions f;
  f.theta.reserve(sol.PL.size());
  for (double pl : sol.PL) {
    double t = pl / P0;
    f.theta.push_back(t);
    f.theta_sum += t;
  }
  return f;
}

BoundProbability bound_probability(const std::vector<EquilibriumProblem::Species>& species) {
  BoundProbability bp;
  double s = 0.0;
  for (const auto& sp : species) {
    if (!(sp.K > 0)) throw DomainError("bound_probability: K > 0 required");
    s += sp.L0 / sp.K;
  }
  bp.p_B = s / (1.0 + s);
  bp.p_Bj.reserve(species.size());
  for (const auto& sp : species) bp.p_Bj.push_back((sp.L0 / sp.K) / (1.0 + s));
  return bp;
}

} // namespace flexmc
