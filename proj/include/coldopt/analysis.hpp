#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coldopt/inventory.hpp"
#include "coldopt/solver.hpp"

namespace coldopt {

/// One-parameter sweep: `steps` equally spaced values of `parameter` from
/// `from` to `to`, solving the full model at each value.
struct SweepSpec {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;

    void validate() const;
};

enum class PointStatus { Optimal, Infeasible };

struct SweepPoint {
    double value = 0.0;
    PointStatus status = PointStatus::Infeasible;
    DecisionVector decision;  // meaningful only when Optimal
    CostBreakdown breakdown;  // meaningful only when Optimal
    double kkt_residual = 0.0;
    double on_hand = 0.0;     // average on-hand stock at the optimum
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepPoint> points; // sorted by parameter value
};

enum class TrendDirection { NonDecreasing, NonIncreasing };

struct TrendVerdict {
    bool holds = false;
    std::size_t optimal_points = 0;
    /// Index into SweepResult::points of the first point breaking the trend.
    std::optional<std::size_t> first_violation;
    double slack = 0.0;
};

/// Parameter ids accepted by sweep().
const std::vector<std::string>& sweepable_parameters();

/// Overwrites one scalar field of a parameter set; returns false for an
/// unknown id.
bool apply_parameter(ScenarioParameters& params, const std::string& id, double value);

/// Re-solves the model at every sweep value. Infeasible points are recorded
/// with their status, never dropped. Points run in parallel; ordering and
/// content are independent of scheduling.
SweepResult sweep(const ScenarioParameters& params, const QualityModel& model,
                  const SweepSpec& spec);

/// Checks the direction of optimal totals along a sweep, with slack
/// 1e-6 * max |total|. Needs at least two optimal points.
TrendVerdict check_trend(const SweepResult& result, TrendDirection direction);

struct McReport {
    double estimate = 0.0;   // kg
    double std_error = 0.0;  // kg
    std::size_t n_samples = 0;
    double analytic = 0.0;   // kg
    double z_score = 0.0;
};

/// Monte Carlo check of the closed-form per-cycle shortage: draws n uniform
/// lead-time demands and compares mean (X - R)+ against the analytic value.
/// Fully determined by the seed.
McReport mc_shortage(double reorder_point, const LeadTimeDemand& demand, std::size_t n,
                     std::uint64_t seed);

std::string sweep_csv_text(const SweepResult& result);
void write_sweep_csv(const SweepResult& result, const std::string& path);

} // namespace coldopt
