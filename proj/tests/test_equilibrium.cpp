#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "flexmc/equilibrium.hpp"
#include "flexmc/errors.hpp"

using namespace flexmc;

namespace {

EquilibriumProblem make(double P0, std::vector<EquilibriumProblem::Species> sp) {
  EquilibriumProblem p;
  p.P0 = P0;
  p.species = std::move(sp);
  return p;
}

double rel_diff(double a, double b) {
  double m = std::max(std::abs(a), std::abs(b));
  return m == 0 ? 0.0 : std::abs(a - b) / m;
}

} // namespace

TEST_CASE("empty system: all receptors free in one sweep") {
  EquilibriumSolution s = solve_iterative(make(1.0, {}));
  CHECK(s.P_free == 1.0);
  CHECK(s.PL.empty());
  CHECK(s.iterations == 1);
}

TEST_CASE("single ligand closed form (golden ratio)") {
  // P0=1, L0=1, K=1: x^2 + x - 1 = 0
  const double pl = (3.0 - std::sqrt(5.0)) / 2.0;
  const double pf = (std::sqrt(5.0) - 1.0) / 2.0;
  EquilibriumSolution s = solve_iterative(make(1.0, {{1.0, 1.0}}));
  CHECK(std::abs(s.PL[0] - pl) < 1e-12);
  CHECK(std::abs(s.P_free - pf) < 1e-12);
  CHECK(std::abs(s.L_free[0] - pf) < 1e-12);

  EquilibriumSolution b = solve_bisection(make(1.0, {{1.0, 1.0}}));
  CHECK(std::abs(b.PL[0] - pl) < 1e-12);
  CHECK(std::abs(b.P_free - pf) < 1e-12);
}

TEST_CASE("two symmetric ligands reduce to x^2 + 2x - 1 = 0") {
  const double pf = std::sqrt(2.0) - 1.0;
  const double pl = 1.0 - 1.0 / std::sqrt(2.0);
  EquilibriumSolution s = solve_iterative(make(1.0, {{1.0, 1.0}, {1.0, 1.0}}));
  CHECK(std::abs(s.P_free - pf) < 1e-12);
  CHECK(std::abs(s.PL[0] - pl) < 1e-12);
  CHECK(std::abs(s.PL[1] - pl) < 1e-12);

  EquilibriumSolution b = solve_bisection(make(1.0, {{1.0, 1.0}, {1.0, 1.0}}));
  CHECK(rel_diff(b.P_free, s.P_free) < 1e-10);
}

TEST_CASE("residual basics") {
  EquilibriumProblem p = make(1.0, {{1.0, 1.0}});
  CHECK(residual(p, 0.0) == 1.0);
  CHECK(std::abs(residual(p, (std::sqrt(5.0) - 1.0) / 2.0)) < 1e-12);
  CHECK(residual(p, 1.0) <= 0.0);

  EquilibriumProblem big = make(2.5, {{3.0, 0.7}, {0.5, 9.0}});
  CHECK(residual(big, 0.0) == 2.5);
  CHECK(residual(big, 2.5) <= 0.0);
  CHECK_THROWS_AS(residual(big, -1.0), DomainError);
}

TEST_CASE("bisection handles degenerate and saturating systems") {
  EquilibriumSolution zero = solve_bisection(make(0.0, {{1.0, 1.0}}));
  CHECK(zero.P_free == 0.0);
  CHECK(zero.PL[0] == 0.0);

  EquilibriumSolution sat = solve_bisection(make(1.0, {{1e9, 1e-9}}));
  CHECK(sat.P_free < 1e-6);
  CHECK(sat.PL[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("occupancy fractions") {
  EquilibriumSolution s = solve_iterative(make(1.0, {{1.0, 1.0}}));
  OccupancyFractions f = occupancy_fractions(s, 1.0);
  CHECK(f.theta[0] == doctest::Approx(0.3819660112501051).epsilon(1e-12));
  CHECK(f.theta_sum == doctest::Approx(f.theta[0]));

  EquilibriumSolution e = solve_iterative(make(1.0, {}));
  CHECK(occupancy_fractions(e, 1.0).theta_sum == 0.0);

  EquilibriumSolution sat = solve_iterative(make(1.0, {{1e9, 1e-9}}));
  CHECK(occupancy_fractions(sat, 1.0).theta_sum == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(occupancy_fractions(s, 0.0), DomainError);
}

TEST_CASE("bound probabilities from total concentrations") {
  BoundProbability bal = bound_probability({{1.0, 1.0}});
  CHECK(bal.p_B == doctest::Approx(0.5).epsilon(1e-15));

  CHECK(bound_probability({}).p_B == 0.0);

  BoundProbability two = bound_probability({{1.0, 1.0}, {3.0, 1.0}});
  CHECK(two.p_B == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(two.p_Bj[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(two.p_Bj[1] == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("p_Bj sums to p_B") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int it = 0; it < 200; ++it) {
    std::vector<EquilibriumProblem::Species> sp;
    int n = 1 + static_cast<int>(rng() % 10);
    for (int j = 0; j < n; ++j) sp.push_back({std::pow(10.0, u(rng)), std::pow(10.0, u(rng))});
    BoundProbability bp = bound_probability(sp);
    double sum = 0.0;
    for (double v : bp.p_Bj) sum += v;
    CHECK(rel_diff(sum, bp.p_B) < 1e-14);
  }
}

TEST_CASE("randomized problems: conservation, oracle agreement, detailed balance") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int it = 0; it < 300; ++it) {
    int n = 1 + static_cast<int>(rng() % 10);
    EquilibriumProblem p;
    p.P0 = std::pow(10.0, u(rng));
    for (int j = 0; j < n; ++j) {
      p.species.push_back({std::pow(10.0, u(rng)), std::pow(10.0, u(rng))});
    }
    EquilibriumSolution a = solve_iterative(p);
    EquilibriumSolution b = solve_bisection(p);

    double mass = a.P_free;
    for (double pl : a.PL) mass += pl;
    CHECK(std::abs(mass - p.P0) <= 1e-10 * p.P0);
    for (size_t j = 0; j < p.species.size(); ++j) {
      CHECK(std::abs(a.L_free[j] + a.PL[j] - p.species[j].L0) <=
            1e-10 * std::max(p.species[j].L0, p.P0));
      CHECK(a.PL[j] >= 0.0);
      CHECK(a.PL[j] <= std::min(p.P0, p.species[j].L0) * (1 + 1e-12));
      // K*PL = P_free*L_free
      if (a.PL[j] > 0) {
        CHECK(rel_diff(p.species[j].K * a.PL[j], a.P_free * a.L_free[j]) < 1e-8);
      }
    }
    CHECK(rel_diff(a.P_free, b.P_free) < 1e-8);
  }
}

TEST_CASE("species order does not change the solution") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int it = 0; it < 50; ++it) {
    int n = 2 + static_cast<int>(rng() % 8);
    EquilibriumProblem p;
    p.P0 = std::pow(10.0, u(rng));
    for (int j = 0; j < n; ++j) {
      p.species.push_back({std::pow(10.0, u(rng)), std::pow(10.0, u(rng))});
    }
    EquilibriumProblem q = p;
    std::shuffle(q.species.begin(), q.species.end(), rng);
    EquilibriumSolution sa = solve_iterative(p);
    EquilibriumSolution sb = solve_iterative(q);
    CHECK(rel_diff(sa.P_free, sb.P_free) < 1e-9);
  }
}

TEST_CASE("competition monotonicity") {
  EquilibriumProblem p = make(2.0, {{1.5, 0.8}, {0.6, 2.0}, {3.0, 5.0}});
  EquilibriumSolution base = solve_iterative(p);
  const double slack = 1e-12;

  SUBCASE("raising one ligand weakly lowers P_free and the other complexes") {
    for (size_t j = 0; j < p.species.size(); ++j) {
      EquilibriumProblem q = p;
      q.species[j].L0 *= 2.0;
      EquilibriumSolution s = solve_iterative(q);
      CHECK(s.P_free <= base.P_free + slack);
      for (size_t i = 0; i < p.species.size(); ++i) {
        if (i != j) CHECK(s.PL[i] <= base.PL[i] + slack * base.PL[i]);
      }
    }
  }
  SUBCASE("raising one K weakly raises P_free") {
    for (size_t j = 0; j < p.species.size(); ++j) {
      EquilibriumProblem q = p;
      q.species[j].K *= 2.0;
      EquilibriumSolution s = solve_iterative(q);
      CHECK(s.P_free >= base.P_free - slack);
    }
  }
}

TEST_CASE("solver rejects invalid arguments") {
  CHECK_THROWS_AS(solve_iterative(make(1.0, {{1.0, 1.0}}), 0.0), DomainError);
  CHECK_THROWS_AS(solve_iterative(make(1.0, {{1.0, 1.0}}), 1e-12, 0), DomainError);
  CHECK_THROWS_AS(solve_iterative(make(-1.0, {{1.0, 1.0}})), DomainError);
  CHECK_THROWS_AS(solve_iterative(make(1.0, {{1.0, -1.0}})), DomainError);
  CHECK_THROWS_AS(solve_iterative(make(1.0, {{1.0, 1e9}}), 1e-12, 1), ConvergenceError);
}
