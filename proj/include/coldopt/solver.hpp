#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coldopt/inventory.hpp"

namespace coldopt {

/// Optimal storage climate for one (packaging, environment) choice.
struct ClimateResult {
    double temperature = 0.0;
    double humidity = 0.0;
    /// Per-cycle cost of running below the ideal corner:
    /// e*(Tu - T) + k*(HUu - HU). Nonnegative inside the boxes.
    double variable_cycle_cost = 0.0;
    /// Whether the quality constraint holds with equality at the optimum.
    bool quality_binding = false;
};

struct ClimateInfeasible {
    /// Best quality reachable with this (packaging, environment) choice.
    double max_quality = 0.0;
};

using ClimateSolve = std::variant<ClimateResult, ClimateInfeasible>;

enum class LotConstraint { Frequency, Space, AvgShortage, ReorderLower, ReorderUpper };
std::string_view to_string(LotConstraint c);

struct LotResult {
    double lot_size = 0.0;
    double reorder_point = 0.0;
    /// Full annual cost (D/Q)(A_cycle + pi*S(R)) + h*(Q/2 + R - mu) at the
    /// optimum, where A_cycle is the per-cycle fixed cost handed in.
    double total = 0.0;
    std::vector<LotConstraint> active_set;
};

struct LotInfeasible {
    std::string reason;
};

using LotSolve = std::variant<LotResult, LotInfeasible>;

enum class InfeasibilityCause { QualityUnreachable, FrequencyVsSpace, ShortageUnreachable };
std::string_view to_string(InfeasibilityCause c);

struct InfeasibilityWitness {
    InfeasibilityCause cause{};
    double witness = 0.0;
    std::string detail;
};

/// Why no (packaging, environment) combination admits a feasible decision.
struct InfeasibilityDiagnosis {
    std::vector<InfeasibilityWitness> causes;
};

enum class CombinationStatus { Optimal, ClimateInfeasible, LotInfeasible };
std::string_view to_string(CombinationStatus s);

struct CombinationOutcome {
    int packaging = 1;
    int environment = 1;
    CombinationStatus status = CombinationStatus::Optimal;
    double total = 0.0; // meaningful only when status == Optimal
    std::optional<ClimateResult> climate;
    std::optional<LotResult> lot;
    std::string note;
};

struct Solution {
    DecisionVector decision;
    CostBreakdown breakdown;
    ConstraintReport constraints;
    double kkt_residual = 0.0;
    /// All nine (packaging, environment) subproblems, lexicographic order.
    std::vector<CombinationOutcome> combinations;
};

using SolveResult = std::variant<Solution, InfeasibilityDiagnosis>;

/// Raised when a numeric routine cannot certify its own result (for example
/// the grid oracle finds no feasible lattice point even though the relaxation
/// checks say one exists at a finer resolution).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cheapest in-box climate meeting the quality floor for a fixed
/// (packaging, environment) pair. The feasible set is a box cut by one
/// halfplane, so the minimum of the linear cost sits on a vertex; all
/// candidate vertices are enumerated exactly. Ties go to warmer T, then
/// higher HU.
ClimateSolve solve_climate(const ScenarioParameters& params, const QualityModel& model,
                           int packaging, int environment);

/// Globally minimizes (D/Q)(cycle_fixed_cost + pi*S(R)) + h*(Q/2 + R - mu)
/// over the frequency, space, shortage and reorder-window constraints.
/// The objective and feasible set are convex, so the optimum is a KKT point;
/// every active set of the five constraints is enumerated (interior fixed
/// point, five single-constraint reduced problems solved by bisection on the
/// stationarity condition, nine two-constraint vertices) and the cheapest
/// feasible candidate wins.
LotSolve solve_lot(const ScenarioParameters& params, double cycle_fixed_cost);

/// Full solve: for each of the nine (packaging, environment) pairs run
/// solve_climate, fold the result into the per-cycle fixed cost, run
/// solve_lot, and keep the cheapest feasible combination (lexicographic
/// tie-break). Returns a diagnosis when all nine fail.
SolveResult solve(const ScenarioParameters& params, const QualityModel& model);

struct OracleOptions {
    enum class Mode {
        Full4d,   // grid (Q, R, T, HU); wholly independent of solve()
        Climate2d // exact climate per combination, grid only (Q, R)
    };
    Mode mode = Mode::Climate2d;
    /// Lattice points per axis; 0 picks the mode default (128 for 2-D,
    /// 32 for 4-D). Minimum 32.
    int resolution = 0;
    /// Window refinements; each round shrinks the search box 10x around the
    /// incumbent. Minimum 1.
    int rounds = 4;
};

/// Brute-force reference: exhaustively grids the decision space per
/// combination and refines around the incumbent. Used to cross-check solve().
SolveResult grid_oracle(const ScenarioParameters& params, const QualityModel& model,
                        const OracleOptions& options = {});

/// Normalized stationarity defect at a feasible decision:
/// min over multipliers lambda >= 0 on the active constraints of
/// ||grad f + sum lambda_i grad g_i|| / max(1, ||grad f||), taken over the
/// continuous variables (Q, R, T, HU). Zero at a true KKT point.
double kkt_residual(const ScenarioParameters& params, const QualityModel& model,
                    const DecisionVector& decision);

/// Relaxation checks explaining joint infeasibility: quality ceiling below
/// the floor, frequency floor colliding with the space ceiling, or the
/// smallest reachable average shortage exceeding its limit.
InfeasibilityDiagnosis diagnose_infeasibility(const ScenarioParameters& params,
                                              const QualityModel& model);

} // namespace coldopt
