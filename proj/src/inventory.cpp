#include "coldopt/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coldopt {
namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void check_level(int level, const char* what) {
    if (level < 1 || level > 3)
        throw std::domain_error(std::string(what) + " level must be 1, 2 or 3");
}

ConstraintEntry one_sided_max(ConstraintId id, double lhs, double bound) {
    // lhs <= bound
    ConstraintEntry e{id, lhs, bound, bound - lhs, false};
    e.satisfied = e.slack >= -constraint_tolerance(bound);
    return e;
}

ConstraintEntry one_sided_min(ConstraintId id, double lhs, double bound) {
    // lhs >= bound
    ConstraintEntry e{id, lhs, bound, lhs - bound, false};
    e.satisfied = e.slack >= -constraint_tolerance(bound);
    return e;
}

ConstraintEntry box(ConstraintId id, double value, double lo, double hi) {
    const double slack_lo = value - lo;
    const double slack_hi = hi - value;
    ConstraintEntry e{id, value, slack_lo <= slack_hi ? lo : hi,
                      std::min(slack_lo, slack_hi), false};
    e.satisfied = e.slack >= -constraint_tolerance(e.bound);
    return e;
}

} // namespace

std::string_view to_string(ConstraintId id) {
    switch (id) {
        case ConstraintId::Quality: return "quality";
        case ConstraintId::AvgShortage: return "avg_shortage";
        case ConstraintId::Space: return "space";
        case ConstraintId::Frequency: return "frequency";
        case ConstraintId::TempBox: return "temp_box";
        case ConstraintId::HumBox: return "hum_box";
        case ConstraintId::ReorderBox: return "reorder_box";
        case ConstraintId::Positivity: return "positivity";
    }
    return "?";
}

bool ConstraintReport::all_satisfied() const {
    for (const auto& e : entries)
        if (!e.satisfied) return false;
    return true;
}

const ConstraintEntry& ConstraintReport::at(ConstraintId id) const {
    for (const auto& e : entries)
        if (e.id == id) return e;
    throw std::out_of_range("no such constraint entry");
}

double constraint_tolerance(double bound) {
    return 1e-6 * std::max(1.0, std::abs(bound));
}

void ScenarioParameters::validate() const {
    require(demand.valid(), "lead-time demand needs upper > lower >= 0");
    require(annual_demand > 0.0, "annual_demand must be > 0");
    require(ordering_cost >= 0.0, "ordering_cost must be >= 0");
    require(holding_cost > 0.0, "holding_cost must be > 0");
    require(shortage_penalty >= 0.0, "shortage_penalty must be >= 0");
    require(temp_var_cost >= 0.0, "temp_var_cost must be >= 0");
    require(hum_var_cost >= 0.0, "hum_var_cost must be >= 0");
    require(temp_fixed_cost >= 0.0, "temp_fixed_cost must be >= 0");
    require(hum_fixed_cost >= 0.0, "hum_fixed_cost must be >= 0");
    for (double m : packaging_costs) require(m >= 0.0, "packaging costs must be >= 0");
    for (double n : environment_costs) require(n >= 0.0, "environment costs must be >= 0");
    require(max_avg_shortage >= 0.0, "max_avg_shortage must be >= 0");
    require(space_per_unit > 0.0, "space_per_unit must be > 0");
    require(capacity > 0.0, "capacity must be > 0");
    require(max_orders > 0.0, "max_orders must be > 0");
    require(temp_lower < temp_upper, "temperature bounds need lower < upper");
    require(hum_lower < hum_upper, "humidity bounds need lower < upper");
    require(reorder_lower < reorder_upper, "reorder bounds need lower < upper");
    // The shortage expectation formula is only exact inside the demand
    // support, so the reorder window must live there.
    require(reorder_lower >= demand.lower && reorder_upper <= demand.upper,
            "reorder bounds must lie inside the lead-time demand support");
}

double expected_shortage_per_cycle(double reorder_point, const LeadTimeDemand& demand) {
    require(demand.valid(), "lead-time demand needs upper > lower >= 0");
    if (reorder_point < demand.lower || reorder_point > demand.upper)
        throw std::domain_error("reorder point outside the lead-time demand support");
    const double excess = demand.upper - reorder_point;
    return excess * excess / (2.0 * demand.width());
}

double expected_shortage_extended(double reorder_point, const LeadTimeDemand& demand) {
    require(demand.valid(), "lead-time demand needs upper > lower >= 0");
    if (reorder_point >= demand.upper) return 0.0;
    if (reorder_point <= demand.lower) return demand.mean() - reorder_point;
    const double excess = demand.upper - reorder_point;
    return excess * excess / (2.0 * demand.width());
}

double expected_on_hand(double lot_size, double reorder_point, const LeadTimeDemand& demand) {
    require(demand.valid(), "lead-time demand needs upper > lower >= 0");
    if (!(lot_size > 0.0)) throw std::domain_error("lot size must be > 0");
    return 0.5 * lot_size + reorder_point - demand.mean();
}

double quality_score(const QualityModel& model, double temperature, double humidity,
                     int packaging, int environment) {
    check_level(packaging, "packaging");
    check_level(environment, "environment");
    return model.temp_coef * temperature + model.hum_coef * humidity +
           model.packaging_coef * packaging + model.environment_coef * environment +
           model.intercept;
}

CostBreakdown cost_breakdown(const ScenarioParameters& params, const DecisionVector& decision) {
    if (!(decision.lot_size > 0.0)) throw std::domain_error("lot size must be > 0");
    check_level(decision.packaging, "packaging");
    check_level(decision.environment, "environment");

    const double cycles = params.annual_demand / decision.lot_size;
    CostBreakdown c;
    c.ordering = cycles * params.ordering_cost;
    c.holding = params.holding_cost *
                expected_on_hand(decision.lot_size, decision.reorder_point, params.demand);
    c.shortage = cycles * params.shortage_penalty *
                 expected_shortage_extended(decision.reorder_point, params.demand);
    c.temperature = cycles * (params.temp_fixed_cost +
                              params.temp_var_cost * (params.temp_upper - decision.temperature));
    c.humidity = cycles * (params.hum_fixed_cost +
                           params.hum_var_cost * (params.hum_upper - decision.humidity));
    c.packaging = cycles * params.packaging_costs[decision.packaging - 1];
    c.environment = cycles * params.environment_costs[decision.environment - 1];
    c.total = c.ordering + c.holding + c.shortage + c.temperature + c.humidity +
              c.packaging + c.environment;
    return c;
}

ConstraintReport evaluate_constraints(const ScenarioParameters& params, const QualityModel& model,
                                      const DecisionVector& decision) {
    if (!(decision.lot_size > 0.0)) throw std::domain_error("lot size must be > 0");
    const double cycles = params.annual_demand / decision.lot_size;

    ConstraintReport r;
    r.entries.push_back(one_sided_min(
        ConstraintId::Quality,
        quality_score(model, decision.temperature, decision.humidity, decision.packaging,
                      decision.environment),
        params.min_quality));
    r.entries.push_back(one_sided_max(
        ConstraintId::AvgShortage,
        cycles * expected_shortage_extended(decision.reorder_point, params.demand),
        params.max_avg_shortage));
    r.entries.push_back(one_sided_max(
        ConstraintId::Space,
        params.space_per_unit * (decision.lot_size + decision.reorder_point),
        params.capacity));
    r.entries.push_back(one_sided_max(ConstraintId::Frequency, cycles, params.max_orders));
    r.entries.push_back(
        box(ConstraintId::TempBox, decision.temperature, params.temp_lower, params.temp_upper));
    r.entries.push_back(
        box(ConstraintId::HumBox, decision.humidity, params.hum_lower, params.hum_upper));
    r.entries.push_back(box(ConstraintId::ReorderBox, decision.reorder_point,
                            params.reorder_lower, params.reorder_upper));
    r.entries.push_back(one_sided_min(ConstraintId::Positivity,
                                      std::min(decision.lot_size, decision.reorder_point), 0.0));
    return r;
}

QualityMaximum max_achievable_quality(const QualityModel& model, const ScenarioParameters& params) {
    QualityMaximum best;
    bool first = true;
    for (double t : {params.temp_lower, params.temp_upper})
        for (double hu : {params.hum_lower, params.hum_upper})
            for (int pkg = 1; pkg <= 3; ++pkg)
                for (int env = 1; env <= 3; ++env) {
                    const double s = quality_score(model, t, hu, pkg, env);
                    if (first || s > best.score) {
                        best = {s, t, hu, pkg, env};
                        first = false;
                    }
                }
    return best;
}

} // namespace coldopt
