#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace coldopt {

/// Lead-time demand X ~ Uniform(lower, upper), in kg.
struct LeadTimeDemand {
    double lower = 0.0;
    double upper = 0.0;

    double mean() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
    bool valid() const { return lower >= 0.0 && upper > lower; }
};

/// Full problem instance: every cost rate, limit and bound needed to evaluate
/// the objective and the constraints. validate() throws std::domain_error
/// naming the first violated invariant.
struct ScenarioParameters {
    double annual_demand = 0.0;    // kg/year
    double ordering_cost = 0.0;    // currency/order
    double holding_cost = 0.0;     // currency/(kg*year)
    double shortage_penalty = 0.0; // currency/kg
    double temp_var_cost = 0.0;    // currency/(degC*cycle)
    double hum_var_cost = 0.0;     // currency/(%*cycle)
    double temp_fixed_cost = 0.0;  // currency/cycle
    double hum_fixed_cost = 0.0;   // currency/cycle
    std::array<double, 3> packaging_costs{};   // currency/cycle, level 1..3
    std::array<double, 3> environment_costs{}; // currency/cycle, level 1..3
    double max_avg_shortage = 0.0; // kg/year
    double min_quality = 0.0;      // score
    double space_per_unit = 0.0;   // m^2/kg
    double capacity = 0.0;         // m^2
    double max_orders = 0.0;       // orders/year
    double temp_lower = 0.0;       // degC
    double temp_upper = 0.0;       // degC
    double hum_lower = 0.0;        // %
    double hum_upper = 0.0;        // %
    double reorder_lower = 0.0;    // kg
    double reorder_upper = 0.0;    // kg
    LeadTimeDemand demand;

    void validate() const;
};

/// Affine quality predictor: score = temp_coef*T + hum_coef*HU
/// + packaging_coef*pkg + environment_coef*env + intercept,
/// with pkg/env entering ordinally as their level 1..3.
struct QualityModel {
    double temp_coef = 0.0;        // score/degC
    double hum_coef = 0.0;         // score/%
    double packaging_coef = 0.0;   // score/level
    double environment_coef = 0.0; // score/level
    double intercept = 0.0;        // score
};

/// A candidate operating point. Packaging and environment each hold exactly
/// one level in {1,2,3}; the one-choice selection rule is structural.
struct DecisionVector {
    double lot_size = 0.0;      // kg/order
    double reorder_point = 0.0; // kg
    double temperature = 0.0;   // degC
    double humidity = 0.0;      // %
    int packaging = 1;
    int environment = 1;
};

/// Per-term annual costs. total is always the sum of the seven components.
struct CostBreakdown {
    double ordering = 0.0;
    double holding = 0.0;
    double shortage = 0.0;
    double temperature = 0.0;
    double humidity = 0.0;
    double packaging = 0.0;
    double environment = 0.0;
    double total = 0.0;
};

enum class ConstraintId {
    Quality,
    AvgShortage,
    Space,
    Frequency,
    TempBox,
    HumBox,
    ReorderBox,
    Positivity,
};

std::string_view to_string(ConstraintId id);

struct ConstraintEntry {
    ConstraintId id{};
    double lhs = 0.0;
    double bound = 0.0;
    double slack = 0.0; // >= 0 means satisfied, up to tolerance
    bool satisfied = false;
};

struct ConstraintReport {
    std::vector<ConstraintEntry> entries;

    bool all_satisfied() const;
    const ConstraintEntry& at(ConstraintId id) const;
};

/// Feasibility slack tolerance used everywhere: 1e-6 scaled by the bound.
double constraint_tolerance(double bound);

/// E[(X - R)+] for X ~ Uniform(lower, upper): (upper-R)^2 / (2*(upper-lower)).
/// Valid only for R inside the support; throws std::domain_error otherwise.
double expected_shortage_per_cycle(double reorder_point, const LeadTimeDemand& demand);

/// Exact E[(X - R)+] for any reorder point: mean()-R below the support,
/// the quadratic form inside it, 0 above it. Agrees with
/// expected_shortage_per_cycle on the support.
double expected_shortage_extended(double reorder_point, const LeadTimeDemand& demand);

/// Average on-hand stock Q/2 + R - mean lead-time demand. Deliberately
/// unclamped; callers see negative values when R sits far below the mean.
double expected_on_hand(double lot_size, double reorder_point, const LeadTimeDemand& demand);

/// Predicted quality score; levels must be in {1,2,3}.
double quality_score(const QualityModel& model, double temperature, double humidity,
                     int packaging, int environment);

/// Annual cost of a decision, term by term. Requires lot_size > 0 and valid
/// levels. The shortage term uses the exact expectation so any reorder point
/// can be costed.
CostBreakdown cost_breakdown(const ScenarioParameters& params, const DecisionVector& decision);

/// Evaluates every constraint at a decision and reports lhs/bound/slack per
/// entry; never rejects a (well-formed) decision, only reports.
ConstraintReport evaluate_constraints(const ScenarioParameters& params, const QualityModel& model,
                                      const DecisionVector& decision);

struct QualityMaximum {
    double score = 0.0;
    double temperature = 0.0;
    double humidity = 0.0;
    int packaging = 1;
    int environment = 1;
};

/// Highest quality reachable over the climate boxes and level sets. The score
/// is affine in (T, HU), so scanning box corners and levels is exact.
QualityMaximum max_achievable_quality(const QualityModel& model, const ScenarioParameters& params);

} // namespace coldopt
