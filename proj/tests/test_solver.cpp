#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "coldopt/rng.hpp"
#include "coldopt/solver.hpp"
#include "test_support.hpp"

using namespace coldopt;
using test::baseline_model;
using test::baseline_params;
using test::interior_params;
using test::table4_model;

namespace {

// Test-side brute force for the lot subproblem: plain refined grid, written
// independently of solve_lot and grid_oracle.
double brute_force_lot_total(const ScenarioParameters& p, double cycle_fixed, int res = 400,
                             int rounds = 5) {
    double qlo = p.annual_demand / p.max_orders;
    double qhi = p.capacity / p.space_per_unit - p.reorder_lower;
    double rlo = p.reorder_lower, rhi = p.reorder_upper;
    const double qlo0 = qlo, qhi0 = qhi, rlo0 = rlo, rhi0 = rhi;
    double best = std::numeric_limits<double>::infinity();
    double bq = 0.0, br = 0.0;
    for (int round = 0; round < rounds; ++round) {
        for (int i = 0; i < res; ++i) {
            const double q = qlo + (qhi - qlo) * i / double(res - 1);
            if (!(q > 0.0)) continue;
            for (int j = 0; j < res; ++j) {
                const double r = rlo + (rhi - rlo) * j / double(res - 1);
                if (p.annual_demand / q > p.max_orders + 1e-9 * p.max_orders) continue;
                if (p.space_per_unit * (q + r) > p.capacity + 1e-9 * p.capacity) continue;
                const double s = expected_shortage_extended(r, p.demand);
                if (p.annual_demand / q * s >
                    p.max_avg_shortage + constraint_tolerance(p.max_avg_shortage))
                    continue;
                const double total = p.annual_demand / q * (cycle_fixed + p.shortage_penalty * s) +
                                     p.holding_cost * (0.5 * q + r - p.demand.mean());
                if (total < best) {
                    best = total;
                    bq = q;
                    br = r;
                }
            }
        }
        const double qw = 0.05 * (qhi - qlo), rw = 0.05 * (rhi - rlo);
        qlo = std::max(qlo0, bq - qw);
        qhi = std::min(qhi0, bq + qw);
        rlo = std::max(rlo0, br - rw);
        rhi = std::min(rhi0, br + rw);
    }
    return best;
}

double solution_total(const SolveResult& r) {
    return std::get<Solution>(r).breakdown.total;
}

} // namespace

TEST_CASE("climate solve finds the cheapest vertex") {
    const ScenarioParameters p = baseline_params();
    const QualityModel m = baseline_model();

    SUBCASE("binding quality floor pushes T below the ceiling") {
        const auto cs = solve_climate(p, m, 1, 1);
        REQUIRE(std::holds_alternative<ClimateResult>(cs));
        const auto& c = std::get<ClimateResult>(cs);
        CHECK(c.temperature == doctest::Approx(-0.75));
        CHECK(c.humidity == doctest::Approx(90.0));
        CHECK(c.variable_cycle_cost == doctest::Approx(86.25));
        CHECK(c.quality_binding);
    }

    SUBCASE("slack floor keeps the ideal corner") {
        ScenarioParameters loose = p;
        loose.min_quality = -1e6;
        const auto cs = solve_climate(loose, m, 1, 1);
        REQUIRE(std::holds_alternative<ClimateResult>(cs));
        const auto& c = std::get<ClimateResult>(cs);
        CHECK(c.temperature == doctest::Approx(5.0));
        CHECK(c.humidity == doctest::Approx(90.0));
        CHECK(c.variable_cycle_cost == doctest::Approx(0.0));
        CHECK_FALSE(c.quality_binding);
    }

    SUBCASE("unreachable floor reports the corner witness") {
        ScenarioParameters tight = p;
        tight.min_quality = 200.0;
        const auto cs = solve_climate(tight, m, 1, 1);
        REQUIRE(std::holds_alternative<ClimateInfeasible>(cs));
        CHECK(std::get<ClimateInfeasible>(cs).max_quality == doctest::Approx(93.5));
    }

    SUBCASE("vertex beats a sample of feasible points") {
        const auto cs = solve_climate(p, m, 2, 3);
        REQUIRE(std::holds_alternative<ClimateResult>(cs));
        const auto& c = std::get<ClimateResult>(cs);
        const double qmin = p.min_quality - m.intercept - m.packaging_coef * 2 -
                            m.environment_coef * 3;
        const RandomStream rng(3, 9);
        for (int i = 0; i < 2000; ++i) {
            const double t = rng.uniform(2 * i, p.temp_lower, p.temp_upper);
            const double hu = rng.uniform(2 * i + 1, p.hum_lower, p.hum_upper);
            if (m.temp_coef * t + m.hum_coef * hu < qmin) continue;
            const double cost =
                p.temp_var_cost * (p.temp_upper - t) + p.hum_var_cost * (p.hum_upper - hu);
            CHECK(c.variable_cycle_cost <= cost + 1e-9);
        }
    }
}

TEST_CASE("lot solve: interior optimum matches the closed form and brute force") {
    const ScenarioParameters p = interior_params();
    const auto ls = solve_lot(p, 125.0);
    REQUIRE(std::holds_alternative<LotResult>(ls));
    const auto& lot = std::get<LotResult>(ls);
    CHECK(lot.lot_size == doctest::Approx(std::sqrt(25000.0 / 0.9)).epsilon(1e-7));
    CHECK(lot.reorder_point == doctest::Approx(200.0 - std::sqrt(25000.0 / 0.9) / 10.0).epsilon(1e-7));
    CHECK(lot.total == doctest::Approx(2000.0).epsilon(1e-9));
    CHECK(lot.active_set.empty());
    CHECK(lot.total == doctest::Approx(brute_force_lot_total(p, 125.0)).epsilon(1e-6));
}

TEST_CASE("lot solve: frequency cap binds and R is re-optimized") {
    ScenarioParameters p = interior_params();
    p.max_orders = 1000.0 / 300.0; // forces Q >= 300
    const auto ls = solve_lot(p, 125.0);
    REQUIRE(std::holds_alternative<LotResult>(ls));
    const auto& lot = std::get<LotResult>(ls);
    CHECK(lot.lot_size == doctest::Approx(300.0).epsilon(1e-9));
    CHECK(lot.reorder_point == doctest::Approx(170.0).epsilon(1e-9)); // 200 - 0.1*300
    CHECK(lot.total == doctest::Approx(2266.0 + 2.0 / 3.0).epsilon(1e-9));
    CHECK(lot.total > 2000.0);
    REQUIRE(lot.active_set.size() == 1);
    CHECK(lot.active_set[0] == LotConstraint::Frequency);
    CHECK(lot.total == doctest::Approx(brute_force_lot_total(p, 125.0)).epsilon(1e-6));
}

TEST_CASE("lot solve: frequency floor colliding with space is infeasible") {
    ScenarioParameters p = interior_params();
    p.max_orders = 2.0;        // Q >= 500
    p.capacity = 550.0;        // Q + R <= 550 with R >= 100
    const auto ls = solve_lot(p, 125.0);
    REQUIRE(std::holds_alternative<LotInfeasible>(ls));
    CHECK(std::get<LotInfeasible>(ls).reason.find("capacity") != std::string::npos);
}

TEST_CASE("lot solve: zero shortage penalty pins R to its floor") {
    ScenarioParameters p = interior_params();
    p.shortage_penalty = 0.0;
    const auto ls = solve_lot(p, 125.0);
    REQUIRE(std::holds_alternative<LotResult>(ls));
    const auto& lot = std::get<LotResult>(ls);
    CHECK(lot.reorder_point == doctest::Approx(100.0));
    CHECK(lot.lot_size == doctest::Approx(std::sqrt(2.0 * 1000.0 * 125.0 / 10.0)).epsilon(1e-9));
    CHECK(lot.total == doctest::Approx(brute_force_lot_total(p, 125.0)).epsilon(1e-6));
}

TEST_CASE("lot solve: baseline-style constrained instance agrees with brute force") {
    const ScenarioParameters p = baseline_params();
    const auto ls = solve_lot(p, 1886.25);
    REQUIRE(std::holds_alternative<LotResult>(ls));
    const auto& lot = std::get<LotResult>(ls);
    CHECK(lot.total == doctest::Approx(brute_force_lot_total(p, 1886.25)).epsilon(1e-6));
    // space and shortage both bind here
    CHECK(std::count(lot.active_set.begin(), lot.active_set.end(), LotConstraint::Space) == 1);
    CHECK(std::count(lot.active_set.begin(), lot.active_set.end(), LotConstraint::AvgShortage) ==
          1);
}

TEST_CASE("lot solve: thin feasible wedge with the optimum at a reorder corner") {
    // High holding cost and a weak shortage penalty leave no interior point;
    // the shortage limit forces R upward until the feasible set pinches at
    // (D S(Ru) / B, Ru). The refinement lattice must not lose that corner.
    ScenarioParameters p;
    p.annual_demand = 1815.5;
    p.ordering_cost = 637.7;
    p.holding_cost = 49.76;
    p.shortage_penalty = 1.632;
    p.max_avg_shortage = 19.95;
    p.min_quality = 0.0;
    p.space_per_unit = 0.3375;
    p.capacity = 7241.0;
    p.max_orders = 7.5975;
    p.temp_lower = -5.0;
    p.temp_upper = 5.0;
    p.hum_lower = 60.0;
    p.hum_upper = 90.0;
    p.reorder_lower = 282.9;
    p.reorder_upper = 344.5;
    p.demand = {218.6, 418.4};
    const QualityModel m{0.0, 0.0, 0.0, 0.0, 50.0};

    const double s_ru = expected_shortage_per_cycle(p.reorder_upper, p.demand);
    const double q_tip = p.annual_demand * s_ru / p.max_avg_shortage;
    const double expected_total =
        p.annual_demand / q_tip * (p.ordering_cost + p.shortage_penalty * s_ru) +
        p.holding_cost * (0.5 * q_tip + p.reorder_upper - p.demand.mean());

    const auto ls = solve_lot(p, p.ordering_cost);
    REQUIRE(std::holds_alternative<LotResult>(ls));
    const auto& lot = std::get<LotResult>(ls);
    CHECK(lot.lot_size == doctest::Approx(q_tip).epsilon(1e-9));
    CHECK(lot.reorder_point == doctest::Approx(p.reorder_upper).epsilon(1e-12));
    CHECK(lot.total == doctest::Approx(expected_total).epsilon(1e-9));
    CHECK(std::count(lot.active_set.begin(), lot.active_set.end(),
                     LotConstraint::AvgShortage) == 1);
    CHECK(std::count(lot.active_set.begin(), lot.active_set.end(),
                     LotConstraint::ReorderUpper) == 1);

    const SolveResult o = grid_oracle(p, m, {OracleOptions::Mode::Climate2d, 128, 5});
    REQUIRE(std::holds_alternative<Solution>(o));
    CHECK(std::abs(std::get<Solution>(o).breakdown.total - expected_total) <=
          1e-3 * expected_total);
}

TEST_CASE("full solve on the baseline scenario") {
    const ScenarioParameters p = baseline_params();
    const QualityModel m = baseline_model();
    const SolveResult r = solve(p, m);
    REQUIRE(std::holds_alternative<Solution>(r));
    const Solution& s = std::get<Solution>(r);

    CHECK(s.constraints.all_satisfied());
    CHECK(s.combinations.size() == 9);
    CHECK(s.decision.packaging >= 1);
    CHECK(s.decision.packaging <= 3);
    CHECK(s.decision.environment >= 1);
    CHECK(s.decision.environment <= 3);
    CHECK(s.kkt_residual <= 1e-6);

    const SolveResult o = grid_oracle(p, m, {OracleOptions::Mode::Climate2d, 128, 4});
    REQUIRE(std::holds_alternative<Solution>(o));
    const Solution& os = std::get<Solution>(o);
    CHECK(std::abs(s.breakdown.total - os.breakdown.total) <=
          1e-3 * std::abs(os.breakdown.total));
    CHECK(s.decision.packaging == os.decision.packaging);
    CHECK(s.decision.environment == os.decision.environment);

    // solver can only be cheaper-or-equal up to lattice resolution
    CHECK(s.breakdown.total <= os.breakdown.total + 1e-9 * os.breakdown.total);
}

TEST_CASE("full solve reports quality infeasibility with the corner witness") {
    const SolveResult r = solve(baseline_params(), table4_model());
    REQUIRE(std::holds_alternative<InfeasibilityDiagnosis>(r));
    const auto& d = std::get<InfeasibilityDiagnosis>(r);
    REQUIRE(d.causes.size() == 1);
    CHECK(d.causes[0].cause == InfeasibilityCause::QualityUnreachable);
    CHECK(d.causes[0].witness == doctest::Approx(-1848.15));
}

TEST_CASE("symmetric tariffs break ties lexicographically") {
    ScenarioParameters p = baseline_params();
    p.packaging_costs = {800.0, 800.0, 800.0};
    p.environment_costs = {900.0, 900.0, 900.0};
    QualityModel m = baseline_model();
    m.packaging_coef = 0.0;
    m.environment_coef = 0.0;
    m.intercept = 113.5; // keep the same feasibility profile
    const SolveResult r = solve(p, m);
    REQUIRE(std::holds_alternative<Solution>(r));
    CHECK(std::get<Solution>(r).decision.packaging == 1);
    CHECK(std::get<Solution>(r).decision.environment == 1);
}

TEST_CASE("grid oracle: 2-D mode reproduces the interior optimum") {
    ScenarioParameters p = interior_params();
    p.ordering_cost = 125.0;
    p.temp_fixed_cost = 0.0;
    p.hum_fixed_cost = 0.0;
    p.temp_var_cost = 0.0;
    p.hum_var_cost = 0.0;
    p.packaging_costs = {0.0, 0.0, 0.0};
    p.environment_costs = {0.0, 0.0, 0.0};
    p.min_quality = 0.0;
    const QualityModel m{0.0, 0.0, 0.0, 0.0, 50.0};

    const SolveResult o = grid_oracle(p, m, {OracleOptions::Mode::Climate2d, 64, 4});
    REQUIRE(std::holds_alternative<Solution>(o));
    CHECK(solution_total(o) == doctest::Approx(2000.0).epsilon(1e-4));

    const SolveResult s = solve(p, m);
    REQUIRE(std::holds_alternative<Solution>(s));
    CHECK(solution_total(s) == doctest::Approx(2000.0).epsilon(1e-9));
}

TEST_CASE("grid oracle: 4-D and 2-D modes agree on the baseline") {
    const ScenarioParameters p = baseline_params();
    const QualityModel m = baseline_model();
    const SolveResult o2 = grid_oracle(p, m, {OracleOptions::Mode::Climate2d, 128, 4});
    const SolveResult o4 = grid_oracle(p, m, {OracleOptions::Mode::Full4d, 32, 4});
    REQUIRE(std::holds_alternative<Solution>(o2));
    REQUIRE(std::holds_alternative<Solution>(o4));
    const Solution& s2 = std::get<Solution>(o2);
    const Solution& s4 = std::get<Solution>(o4);
    CHECK(s2.decision.packaging == s4.decision.packaging);
    CHECK(s2.decision.environment == s4.decision.environment);
    CHECK(std::abs(s2.breakdown.total - s4.breakdown.total) <=
          5e-3 * std::abs(s2.breakdown.total));
}

TEST_CASE("grid oracle: infeasible scenario reports the same diagnosis as solve") {
    const SolveResult o = grid_oracle(baseline_params(), table4_model());
    REQUIRE(std::holds_alternative<InfeasibilityDiagnosis>(o));
    const auto& d = std::get<InfeasibilityDiagnosis>(o);
    REQUIRE(d.causes.size() == 1);
    CHECK(d.causes[0].cause == InfeasibilityCause::QualityUnreachable);
}

TEST_CASE("grid oracle rejects out-of-contract options") {
    CHECK_THROWS_AS(
        grid_oracle(baseline_params(), baseline_model(), {OracleOptions::Mode::Climate2d, 16, 4}),
        std::domain_error);
    CHECK_THROWS_AS(
        grid_oracle(baseline_params(), baseline_model(), {OracleOptions::Mode::Climate2d, 64, 0}),
        std::domain_error);
}

TEST_CASE("kkt residual certifies optima and flags perturbations") {
    ScenarioParameters p = interior_params();
    p.ordering_cost = 125.0;
    p.temp_fixed_cost = 0.0;
    p.hum_fixed_cost = 0.0;
    p.packaging_costs = {0.0, 0.0, 0.0};
    p.environment_costs = {0.0, 0.0, 0.0};
    p.min_quality = 0.0;
    const QualityModel m{0.0, 0.0, 0.0, 0.0, 50.0};

    const double q_star = std::sqrt(25000.0 / 0.9);
    const DecisionVector opt{q_star, 200.0 - q_star / 10.0, 5.0, 90.0, 1, 1};
    CHECK(kkt_residual(p, m, opt) <= 1e-6);

    const DecisionVector off{200.0, 200.0 - q_star / 10.0, 5.0, 90.0, 1, 1};
    CHECK(kkt_residual(p, m, off) > 1e-2);

    ScenarioParameters capped = p;
    capped.max_orders = 1000.0 / 300.0;
    const auto ls = solve_lot(capped, 125.0);
    REQUIRE(std::holds_alternative<LotResult>(ls));
    const auto& lot = std::get<LotResult>(ls);
    const DecisionVector boundary{lot.lot_size, lot.reorder_point, 5.0, 90.0, 1, 1};
    CHECK(kkt_residual(capped, m, boundary) <= 1e-6);

    // infeasible input is rejected
    const DecisionVector bad{10.0, 100.0, 5.0, 90.0, 1, 1}; // frequency violated
    CHECK_THROWS_AS(kkt_residual(capped, m, bad), std::domain_error);
}

TEST_CASE("infeasibility diagnosis causes") {
    SUBCASE("unreachable quality") {
        const InfeasibilityDiagnosis d =
            diagnose_infeasibility(baseline_params(), table4_model());
        REQUIRE(d.causes.size() == 1);
        CHECK(d.causes[0].cause == InfeasibilityCause::QualityUnreachable);
        CHECK(d.causes[0].witness == doctest::Approx(-1848.15));
    }
    SUBCASE("frequency floor vs space ceiling") {
        ScenarioParameters p = baseline_params();
        p.space_per_unit = 3.0;
        p.capacity = 1000.0;
        p.annual_demand = 15000.0;
        p.max_orders = 10.0;
        const InfeasibilityDiagnosis d = diagnose_infeasibility(p, baseline_model());
        REQUIRE(!d.causes.empty());
        bool found = false;
        for (const auto& c : d.causes)
            if (c.cause == InfeasibilityCause::FrequencyVsSpace) {
                found = true;
                CHECK(c.witness == doctest::Approx(4800.0));
            }
        CHECK(found);
    }
    SUBCASE("huge shortage allowance is never blamed") {
        ScenarioParameters p = baseline_params();
        p.max_avg_shortage = 1e9;
        const InfeasibilityDiagnosis d = diagnose_infeasibility(p, baseline_model());
        for (const auto& c : d.causes)
            CHECK(c.cause != InfeasibilityCause::ShortageUnreachable);
    }
    SUBCASE("unreachable shortage bound") {
        ScenarioParameters p = baseline_params();
        p.max_avg_shortage = 0.0;
        p.reorder_upper = 199.0; // S(R) >= S(199) > 0 everywhere
        const SolveResult r = solve(p, baseline_model());
        REQUIRE(std::holds_alternative<InfeasibilityDiagnosis>(r));
        const auto& d = std::get<InfeasibilityDiagnosis>(r);
        bool found = false;
        for (const auto& c : d.causes)
            found = found || c.cause == InfeasibilityCause::ShortageUnreachable;
        CHECK(found);
    }
}

TEST_CASE("solutions re-verify against the model evaluators") {
    const SolveResult r = solve(baseline_params(), baseline_model());
    const Solution& s = std::get<Solution>(r);
    const ConstraintReport fresh =
        evaluate_constraints(baseline_params(), baseline_model(), s.decision);
    CHECK(fresh.all_satisfied());
    const CostBreakdown fresh_cost = cost_breakdown(baseline_params(), s.decision);
    CHECK(fresh_cost.total == doctest::Approx(s.breakdown.total).epsilon(1e-12));
}

TEST_CASE("climate argmin ignores lot-side parameters") {
    const QualityModel m = baseline_model();
    ScenarioParameters a = baseline_params();
    ScenarioParameters b = a;
    b.annual_demand = 7777.0;
    b.ordering_cost = 50.0;
    b.holding_cost = 23.0;
    b.shortage_penalty = 4.0;
    b.max_orders = 11.0;
    b.space_per_unit = 1.0;
    b.capacity = 1900.0;
    b.max_avg_shortage = 5.0;
    for (int pkg = 1; pkg <= 3; ++pkg)
        for (int env = 1; env <= 3; ++env) {
            const auto ca = solve_climate(a, m, pkg, env);
            const auto cb = solve_climate(b, m, pkg, env);
            REQUIRE(std::holds_alternative<ClimateResult>(ca));
            REQUIRE(std::holds_alternative<ClimateResult>(cb));
            CHECK(std::get<ClimateResult>(ca).temperature ==
                  std::get<ClimateResult>(cb).temperature);
            CHECK(std::get<ClimateResult>(ca).humidity ==
                  std::get<ClimateResult>(cb).humidity);
        }
}

TEST_CASE("lot objective is midpoint convex on the feasible set") {
    const ScenarioParameters p = baseline_params();
    const double cycle_fixed = 1886.25;
    const auto objective = [&](double q, double r) {
        return p.annual_demand / q *
                   (cycle_fixed + p.shortage_penalty * expected_shortage_extended(r, p.demand)) +
               p.holding_cost * (0.5 * q + r - p.demand.mean());
    };
    const RandomStream rng(31, 13);
    int checked = 0;
    for (int i = 0; checked < 100 && i < 10000; ++i) {
        const double q1 = rng.uniform(4 * i, 500.0, 650.0);
        const double q2 = rng.uniform(4 * i + 1, 500.0, 650.0);
        const double r1 = rng.uniform(4 * i + 2, 100.0, 200.0);
        const double r2 = rng.uniform(4 * i + 3, 100.0, 200.0);
        const double mid = objective(0.5 * (q1 + q2), 0.5 * (r1 + r2));
        const double avg = 0.5 * (objective(q1, r1) + objective(q2, r2));
        CHECK(mid <= avg + 1e-9 * std::max(1.0, std::abs(avg)));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("optimal total responds monotonically to parameters") {
    const ScenarioParameters base = baseline_params();
    const QualityModel m = baseline_model();
    const double base_total = solution_total(solve(base, m));

    const auto total_with = [&](auto&& tweak) {
        ScenarioParameters p = base;
        tweak(p);
        return solution_total(solve(p, m));
    };

    // costlier parameters never reduce the optimum
    CHECK(total_with([](auto& p) { p.shortage_penalty *= 1.5; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.ordering_cost *= 1.5; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.temp_fixed_cost *= 1.5; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.hum_fixed_cost *= 1.5; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.temp_var_cost *= 1.5; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.hum_var_cost *= 1.5; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.packaging_costs[0] += 100.0; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.environment_costs[0] += 100.0; }) >= base_total - 1e-9);
    CHECK(total_with([](auto& p) { p.min_quality = 90.0; }) >= base_total - 1e-9);

    // looser limits never raise it
    CHECK(total_with([](auto& p) { p.max_avg_shortage *= 2.0; }) <= base_total + 1e-9);
    CHECK(total_with([](auto& p) { p.capacity *= 1.5; }) <= base_total + 1e-9);
    CHECK(total_with([](auto& p) { p.max_orders *= 1.5; }) <= base_total + 1e-9);

    // holding cost, conditioned on nonnegative on-hand at the new optimum
    {
        ScenarioParameters p = base;
        p.holding_cost *= 1.5;
        const SolveResult r = solve(p, m);
        const Solution& s = std::get<Solution>(r);
        if (expected_on_hand(s.decision.lot_size, s.decision.reorder_point, p.demand) >= 0.0)
            CHECK(s.breakdown.total >= base_total - 1e-9);
    }
}

TEST_CASE("randomized scenarios: solver matches oracle and stays feasible") {
    const QualityModel m = baseline_model();
    const RandomStream rng(404, 55);
    int solved = 0;
    for (int i = 0; solved < 5 && i < 60; ++i) {
        ScenarioParameters p = baseline_params();
        const std::uint64_t k = std::uint64_t(i) * 16;
        p.max_avg_shortage = rng.uniform(k, 0.0, 6.0);
        p.min_quality = rng.uniform(k + 1, 40.0, 100.0);
        p.space_per_unit = rng.uniform(k + 2, 1.0, 3.0);
        p.annual_demand = rng.uniform(k + 3, 5000.0, 15000.0);
        p.ordering_cost = rng.uniform(k + 4, 100.0, 500.0);
        p.capacity = rng.uniform(k + 5, 1000.0, 2000.0);
        p.holding_cost = rng.uniform(k + 6, 12.0, 24.0);
        p.shortage_penalty = rng.uniform(k + 7, 4.0, 10.0);
        p.temp_var_cost = rng.uniform(k + 8, 10.0, 20.0);
        p.hum_var_cost = rng.uniform(k + 9, 10.0, 20.0);
        p.temp_fixed_cost = rng.uniform(k + 10, 100.0, 400.0);
        p.hum_fixed_cost = rng.uniform(k + 11, 100.0, 400.0);

        const SolveResult r = solve(p, m);
        const auto* s = std::get_if<Solution>(&r);
        if (!s) continue;
        ++solved;

        CHECK(evaluate_constraints(p, m, s->decision).all_satisfied());
        CHECK(s->kkt_residual <= 1e-6);

        const SolveResult o = grid_oracle(p, m, {OracleOptions::Mode::Climate2d, 128, 4});
        REQUIRE(std::holds_alternative<Solution>(o));
        const Solution& os = std::get<Solution>(o);
        CHECK(std::abs(s->breakdown.total - os.breakdown.total) <=
              1e-3 * std::max(1.0, std::abs(os.breakdown.total)));
        CHECK(s->decision.packaging == os.decision.packaging);
        CHECK(s->decision.environment == os.decision.environment);
    }
    CHECK(solved == 5);
}
