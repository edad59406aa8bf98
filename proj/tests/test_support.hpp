#pragma once

#include <string>

#include "coldopt/inventory.hpp"

namespace coldopt::test {

inline ScenarioParameters baseline_params() {
    ScenarioParameters p;
    p.annual_demand = 10000.0;
    p.ordering_cost = 300.0;
    p.holding_cost = 18.0;
    p.shortage_penalty = 7.0;
    p.temp_var_cost = 15.0;
    p.hum_var_cost = 15.0;
    p.temp_fixed_cost = 250.0;
    p.hum_fixed_cost = 250.0;
    p.packaging_costs = {500.0, 1000.0, 1500.0};
    p.environment_costs = {500.0, 1200.0, 2000.0};
    p.max_avg_shortage = 3.0;
    p.min_quality = 70.0;
    p.space_per_unit = 2.0;
    p.capacity = 1500.0;
    p.max_orders = 20.0;
    p.temp_lower = -5.0;
    p.temp_upper = 5.0;
    p.hum_lower = 60.0;
    p.hum_upper = 90.0;
    p.reorder_lower = 100.0;
    p.reorder_upper = 200.0;
    p.demand = {100.0, 200.0};
    return p;
}

inline QualityModel baseline_model() { return {-2.0, -0.5, 3.0, 3.0, 107.5}; }

// Raw published regression coefficients; infeasible against any quality
// floor in (40, 100).
inline QualityModel table4_model() { return {-12.88, -33.56, 2.86, 4.28, 79.63}; }

// Loose-limit instance whose lot subproblem has the closed-form interior
// optimum Q = sqrt(25000/0.9), R = 200 - Q/10.
inline ScenarioParameters interior_params() {
    ScenarioParameters p = baseline_params();
    p.annual_demand = 1000.0;
    p.holding_cost = 10.0;
    p.shortage_penalty = 10.0;
    p.max_avg_shortage = 1e6;
    p.space_per_unit = 1.0;
    p.capacity = 5000.0;
    p.max_orders = 100.0;
    return p;
}

inline std::string scenario_path(const char* name) {
    return std::string(COLDOPT_SOURCE_DIR) + "/scenarios/" + name;
}

} // namespace coldopt::test
