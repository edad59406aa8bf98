#include "coldopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coldopt/csv.hpp"
#include "coldopt/rng.hpp"
#include "coldopt/threading.hpp"

namespace coldopt {
namespace {

struct ParamField {
    const char* id;
    double ScenarioParameters::* field;
};

constexpr ParamField kScalarFields[] = {
    {"D", &ScenarioParameters::annual_demand},
    {"A", &ScenarioParameters::ordering_cost},
    {"h", &ScenarioParameters::holding_cost},
    {"pi", &ScenarioParameters::shortage_penalty},
    {"e", &ScenarioParameters::temp_var_cost},
    {"k", &ScenarioParameters::hum_var_cost},
    {"b", &ScenarioParameters::temp_fixed_cost},
    {"d", &ScenarioParameters::hum_fixed_cost},
    {"B", &ScenarioParameters::max_avg_shortage},
    {"Qual", &ScenarioParameters::min_quality},
    {"f", &ScenarioParameters::space_per_unit},
    {"F", &ScenarioParameters::capacity},
    {"n", &ScenarioParameters::max_orders},
    {"Tl", &ScenarioParameters::temp_lower},
    {"Tu", &ScenarioParameters::temp_upper},
    {"HUl", &ScenarioParameters::hum_lower},
    {"HUu", &ScenarioParameters::hum_upper},
    {"Rl", &ScenarioParameters::reorder_lower},
    {"Ru", &ScenarioParameters::reorder_upper},
};

} // namespace

void SweepSpec::validate() const {
    if (parameter.empty()) throw std::domain_error("sweep parameter id is empty");
    if (!(from != to)) throw std::domain_error("sweep needs from != to");
    if (steps < 2) throw std::domain_error("sweep needs at least 2 steps");
}

const std::vector<std::string>& sweepable_parameters() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& fld : kScalarFields) v.push_back(fld.id);
        for (int j = 1; j <= 3; ++j) v.push_back("M" + std::to_string(j));
        for (int j = 1; j <= 3; ++j) v.push_back("N" + std::to_string(j));
        return v;
    }();
    return ids;
}

bool apply_parameter(ScenarioParameters& params, const std::string& id, double value) {
    for (const auto& fld : kScalarFields)
        if (id == fld.id) {
            params.*(fld.field) = value;
            return true;
        }
    if (id.size() == 2 && (id[0] == 'M' || id[0] == 'N') && id[1] >= '1' && id[1] <= '3') {
        const int j = id[1] - '1';
        (id[0] == 'M' ? params.packaging_costs : params.environment_costs)[j] = value;
        return true;
    }
    return false;
}

SweepResult sweep(const ScenarioParameters& params, const QualityModel& model,
                  const SweepSpec& spec) {
    spec.validate();
    {
        ScenarioParameters probe = params;
        if (!apply_parameter(probe, spec.parameter, spec.from))
            throw std::domain_error("unknown sweep parameter id '" + spec.parameter + "'");
    }

    std::vector<double> values(spec.steps);
    for (int i = 0; i < spec.steps; ++i)
        values[i] = spec.from + (spec.to - spec.from) * double(i) / double(spec.steps - 1);
    std::sort(values.begin(), values.end());

    SweepResult result;
    result.parameter = spec.parameter;
    result.points.resize(values.size());

    parallel_chunks(values.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            ScenarioParameters local = params;
            apply_parameter(local, spec.parameter, values[i]);
            local.validate();
            SweepPoint& pt = result.points[i];
            pt.value = values[i];
            const SolveResult r = solve(local, model);
            if (const auto* sol = std::get_if<Solution>(&r)) {
                pt.status = PointStatus::Optimal;
                pt.decision = sol->decision;
                pt.breakdown = sol->breakdown;
                pt.kkt_residual = sol->kkt_residual;
                pt.on_hand = expected_on_hand(sol->decision.lot_size,
                                              sol->decision.reorder_point, local.demand);
            } else {
                pt.status = PointStatus::Infeasible;
            }
        }
    });
    return result;
}

TrendVerdict check_trend(const SweepResult& result, TrendDirection direction) {
    std::vector<std::size_t> optimal;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < result.points.size(); ++i)
        if (result.points[i].status == PointStatus::Optimal) {
            optimal.push_back(i);
            max_abs = std::max(max_abs, std::abs(result.points[i].breakdown.total));
        }
    if (optimal.size() < 2)
        throw std::domain_error("trend check needs at least 2 optimal sweep points");

    TrendVerdict v;
    v.holds = true;
    v.optimal_points = optimal.size();
    v.slack = 1e-6 * max_abs;
    for (std::size_t k = 1; k < optimal.size(); ++k) {
        const double prev = result.points[optimal[k - 1]].breakdown.total;
        const double cur = result.points[optimal[k]].breakdown.total;
        const bool bad = direction == TrendDirection::NonDecreasing ? cur < prev - v.slack
                                                                    : cur > prev + v.slack;
        if (bad) {
            v.holds = false;
            v.first_violation = optimal[k];
            break;
        }
    }
    return v;
}

McReport mc_shortage(double reorder_point, const LeadTimeDemand& demand, std::size_t n,
                     std::uint64_t seed) {
    if (!demand.valid()) throw std::domain_error("lead-time demand needs upper > lower >= 0");
    if (n < 1) throw std::domain_error("mc_shortage needs at least one sample");
    const double analytic = expected_shortage_per_cycle(reorder_point, demand);

    const RandomStream stream(seed, stream_tag::kMcShortage);
    double mean = 0.0, m2 = 0.0; // Welford
    for (std::size_t i = 0; i < n; ++i) {
        const double x = stream.uniform(i, demand.lower, demand.upper);
        const double v = std::max(0.0, x - reorder_point);
        const double delta = v - mean;
        mean += delta / double(i + 1);
        m2 += delta * (v - mean);
    }

    McReport r;
    r.estimate = mean;
    r.n_samples = n;
    r.analytic = analytic;
    r.std_error = n > 1 ? std::sqrt(m2 / double(n - 1) / double(n)) : 0.0;
    if (r.std_error > 0.0)
        r.z_score = (r.estimate - r.analytic) / r.std_error;
    else
        r.z_score = r.estimate == r.analytic ? 0.0
                    : r.estimate > r.analytic
                        ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
    return r;
}

std::string sweep_csv_text(const SweepResult& result) {
    std::string out =
        "param,value,status,total,Q,R,T,HU,packaging,environment,"
        "ordering,holding,shortage,temperature,humidity,pack_cost,env_cost,kkt_residual\n";
    for (const auto& pt : result.points) {
        out += result.parameter;
        out += ',';
        out += format_double(pt.value);
        if (pt.status == PointStatus::Infeasible) {
            out += ",infeasible,,,,,,,,,,,,,,,\n";
            continue;
        }
        out += ",optimal,";
        out += format_double(pt.breakdown.total) + ',';
        out += format_double(pt.decision.lot_size) + ',';
        out += format_double(pt.decision.reorder_point) + ',';
        out += format_double(pt.decision.temperature) + ',';
        out += format_double(pt.decision.humidity) + ',';
        out += std::to_string(pt.decision.packaging) + ',';
        out += std::to_string(pt.decision.environment) + ',';
        out += format_double(pt.breakdown.ordering) + ',';
        out += format_double(pt.breakdown.holding) + ',';
        out += format_double(pt.breakdown.shortage) + ',';
        out += format_double(pt.breakdown.temperature) + ',';
        out += format_double(pt.breakdown.humidity) + ',';
        out += format_double(pt.breakdown.packaging) + ',';
        out += format_double(pt.breakdown.environment) + ',';
        out += format_double(pt.kkt_residual) + '\n';
    }
    return out;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
    atomic_write_file(path, sweep_csv_text(result));
}

} // namespace coldopt
