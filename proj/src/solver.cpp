#include "coldopt/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "coldopt/threading.hpp"

namespace coldopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void check_level(int level, const char* what) {
    if (level < 1 || level > 3)
        throw std::domain_error(std::string(what) + " level must be 1, 2 or 3");
}

// ---------------------------------------------------------------------------
// Lot subproblem. Works on the smooth quadratic extension of the shortage
// expectation while locating stationary points; every candidate is then
// feasibility-checked and costed with the exact expectation, and feasible
// candidates always carry R inside the demand support where the two agree.
// ---------------------------------------------------------------------------

struct LotContext {
    double D, h, pi, B, f, F, n;
    double W;  // space ceiling on Q + R: F / f
    double Qf; // frequency floor on Q: D / n
    double Rl, Ru;
    double Du, dd, mu; // demand upper bound, support width, mean
    double a;          // per-cycle fixed cost
    LeadTimeDemand demand;

    double shortage_smooth(double R) const {
        const double excess = Du - R;
        return excess * excess / (2.0 * dd);
    }
    double shortage_slope_smooth(double R) const { return -(Du - R) / dd; }

    double objective(double Q, double R) const {
        return D / Q * (a + pi * expected_shortage_extended(R, demand)) +
               h * (0.5 * Q + R - mu);
    }

    bool feasible(double Q, double R) const {
        if (!(Q > 0.0)) return false;
        const double cyc = D / Q;
        if (cyc > n + constraint_tolerance(n)) return false;
        if (f * (Q + R) > F + constraint_tolerance(F)) return false;
        if (cyc * expected_shortage_extended(R, demand) > B + constraint_tolerance(B))
            return false;
        if (R < Rl - constraint_tolerance(Rl)) return false;
        if (R > Ru + constraint_tolerance(Ru)) return false;
        return true;
    }

    // EOQ-style stationary lot size for a pinned reorder point.
    double stationary_q(double R) const {
        return std::sqrt(std::max(0.0, 2.0 * D * (a + pi * expected_shortage_extended(R, demand)) / h));
    }

    // Stationary reorder point for a pinned lot size (needs pi > 0).
    double stationary_r(double Q) const { return Du - dd * h * Q / (D * pi); }
};

LotContext make_lot_context(const ScenarioParameters& p, double cycle_fixed_cost) {
    LotContext c;
    c.D = p.annual_demand;
    c.h = p.holding_cost;
    c.pi = p.shortage_penalty;
    c.B = p.max_avg_shortage;
    c.f = p.space_per_unit;
    c.F = p.capacity;
    c.n = p.max_orders;
    c.W = p.capacity / p.space_per_unit;
    c.Qf = p.annual_demand / p.max_orders;
    c.Rl = p.reorder_lower;
    c.Ru = p.reorder_upper;
    c.Du = p.demand.upper;
    c.dd = p.demand.width();
    c.mu = p.demand.mean();
    c.a = cycle_fixed_cost;
    c.demand = p.demand;
    return c;
}

// Root of an increasing derivative on [lo, hi]; nullopt when the sign never
// flips (the reduced minimum then sits on a boundary handled by the vertex
// candidates).
template <class F>
std::optional<double> bisect_stationary(F&& deriv, double lo, double hi) {
    if (!(lo < hi)) return std::nullopt;
    double dlo = deriv(lo);
    double dhi = deriv(hi);
    if (!(dlo < 0.0) || !(dhi > 0.0)) return std::nullopt;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (deriv(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Interior stationary point of the joint objective, when it exists. The
// fixed point Q <- sqrt(2 D (a + pi S(R(Q))) / h) with R(Q) = Du - dd h Q/(D pi)
// contracts exactly when gamma = dd h / (D pi) < 1; gamma >= 1 means the
// R-derivative never vanishes and there is no interior point. The map is
// affine in Q^2, so the iteration is seeded at its algebraic limit
// Q^2 = (2 D a / h) / (1 - gamma) and stops at |dQ| < 1e-9 Q.
std::optional<std::array<double, 2>> interior_fixed_point(const LotContext& c) {
    if (!(c.pi > 0.0)) return std::nullopt;
    const double gamma = c.dd * c.h / (c.D * c.pi);
    if (gamma >= 1.0 - 1e-12) return std::nullopt;
    double q = std::sqrt(2.0 * c.D * c.a / c.h / (1.0 - gamma));
    if (!(q > 0.0)) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double r = c.stationary_r(q);
        const double next = std::sqrt(2.0 * c.D * (c.a + c.pi * c.shortage_smooth(r)) / c.h);
        const bool done = std::abs(next - q) < 1e-9 * std::max(1.0, q);
        q = next;
        if (done) break;
    }
    if (!(q > 0.0) || !std::isfinite(q)) return std::nullopt;
    return std::array<double, 2>{q, c.stationary_r(q)};
}

struct LotRelaxation {
    bool freq_vs_space = false;
    double freq_space_lhs = 0.0;   // f * (D/n + Rl)
    bool shortage_unreachable = false;
    double min_avg_shortage = 0.0; // least average annual shortage over the polytope
    double min_shortage_r = 0.0;
};

// Feasibility of the (Q, R) polytope regardless of combination. The smallest
// reachable average shortage takes Q as large as space allows; over R that
// ratio is unimodal with an interior stationary point at 2W - Du, so three
// closed-form candidates give the exact minimum.
LotRelaxation analyze_lot_feasibility(const ScenarioParameters& p) {
    LotRelaxation out;
    const LotContext c = make_lot_context(p, 0.0);
    out.freq_space_lhs = p.space_per_unit * (c.Qf + c.Rl);
    if (out.freq_space_lhs > p.capacity + constraint_tolerance(p.capacity)) {
        out.freq_vs_space = true;
        return out;
    }
    const double r_hi = std::min(c.Ru, c.W - c.Qf);
    double best = kInf, best_r = c.Rl;
    for (double r : {c.Rl, r_hi, std::clamp(2.0 * c.W - c.Du, c.Rl, r_hi)}) {
        const double q = c.W - r;
        if (!(q > 0.0)) continue;
        const double v = c.D / q * expected_shortage_extended(r, c.demand);
        if (v < best) {
            best = v;
            best_r = r;
        }
    }
    out.min_avg_shortage = best;
    out.min_shortage_r = best_r;
    if (best > p.max_avg_shortage + constraint_tolerance(p.max_avg_shortage))
        out.shortage_unreachable = true;
    return out;
}

std::vector<LotConstraint> detect_active_set(const LotContext& c, double Q, double R) {
    std::vector<LotConstraint> active;
    if (std::abs(c.D / Q - c.n) <= constraint_tolerance(c.n))
        active.push_back(LotConstraint::Frequency);
    if (std::abs(c.f * (Q + R) - c.F) <= constraint_tolerance(c.F))
        active.push_back(LotConstraint::Space);
    if (std::abs(c.D / Q * expected_shortage_extended(R, c.demand) - c.B) <=
        constraint_tolerance(c.B))
        active.push_back(LotConstraint::AvgShortage);
    if (std::abs(R - c.Rl) <= constraint_tolerance(c.Rl))
        active.push_back(LotConstraint::ReorderLower);
    if (std::abs(R - c.Ru) <= constraint_tolerance(c.Ru))
        active.push_back(LotConstraint::ReorderUpper);
    return active;
}

} // namespace

std::string_view to_string(LotConstraint c) {
    switch (c) {
        case LotConstraint::Frequency: return "frequency";
        case LotConstraint::Space: return "space";
        case LotConstraint::AvgShortage: return "avg_shortage";
        case LotConstraint::ReorderLower: return "reorder_lower";
        case LotConstraint::ReorderUpper: return "reorder_upper";
    }
    return "?";
}

std::string_view to_string(InfeasibilityCause c) {
    switch (c) {
        case InfeasibilityCause::QualityUnreachable: return "quality_unreachable";
        case InfeasibilityCause::FrequencyVsSpace: return "frequency_vs_space";
        case InfeasibilityCause::ShortageUnreachable: return "shortage_unreachable";
    }
    return "?";
}

std::string_view to_string(CombinationStatus s) {
    switch (s) {
        case CombinationStatus::Optimal: return "optimal";
        case CombinationStatus::ClimateInfeasible: return "climate_infeasible";
        case CombinationStatus::LotInfeasible: return "lot_infeasible";
    }
    return "?";
}

ClimateSolve solve_climate(const ScenarioParameters& params, const QualityModel& model,
                           int packaging, int environment) {
    check_level(packaging, "packaging");
    check_level(environment, "environment");
    params.validate();

    const double x1 = model.temp_coef;
    const double x2 = model.hum_coef;
    const double level_part = model.intercept + model.packaging_coef * packaging +
                              model.environment_coef * environment;
    // Quality floor rewritten over the climate pair: x1 T + x2 HU >= qmin.
    const double qmin = params.min_quality - level_part;
    const double qtol = constraint_tolerance(params.min_quality);
    const double tl = params.temp_lower, tu = params.temp_upper;
    const double hl = params.hum_lower, hu = params.hum_upper;

    std::vector<std::array<double, 2>> candidates = {
        {tl, hl}, {tl, hu}, {tu, hl}, {tu, hu}};
    const double t_eps = 1e-9 * (tu - tl);
    const double h_eps = 1e-9 * (hu - hl);
    if (x1 != 0.0) {
        for (double edge : {hl, hu}) {
            const double t = (qmin - x2 * edge) / x1;
            if (t >= tl - t_eps && t <= tu + t_eps)
                candidates.push_back({std::clamp(t, tl, tu), edge});
        }
    }
    if (x2 != 0.0) {
        for (double edge : {tl, tu}) {
            const double v = (qmin - x1 * edge) / x2;
            if (v >= hl - h_eps && v <= hu + h_eps)
                candidates.push_back({edge, std::clamp(v, hl, hu)});
        }
    }

    const auto cost = [&](double t, double v) {
        return params.temp_var_cost * (tu - t) + params.hum_var_cost * (hu - v);
    };

    bool found = false;
    double best_t = 0.0, best_hu = 0.0, best_cost = kInf;
    for (const auto& [t, v] : candidates) {
        if (x1 * t + x2 * v < qmin - qtol) continue;
        const double c = cost(t, v);
        if (!found) {
            found = true;
            best_t = t;
            best_hu = v;
            best_cost = c;
            continue;
        }
        const double ctol = 1e-9 * std::max({1.0, std::abs(c), std::abs(best_cost)});
        const bool tie = std::abs(c - best_cost) <= ctol;
        if (c < best_cost - ctol ||
            (tie && (t > best_t || (t == best_t && v > best_hu)))) {
            best_t = t;
            best_hu = v;
            best_cost = c;
        }
    }

    if (!found) {
        double max_q = -kInf;
        for (double t : {tl, tu})
            for (double v : {hl, hu})
                max_q = std::max(max_q, x1 * t + x2 * v + level_part);
        return ClimateInfeasible{max_q};
    }

    ClimateResult r;
    r.temperature = best_t;
    r.humidity = best_hu;
    r.variable_cycle_cost = std::max(0.0, best_cost);
    r.quality_binding = std::abs(x1 * best_t + x2 * best_hu + level_part - params.min_quality) <= qtol;
    return r;
}

LotSolve solve_lot(const ScenarioParameters& params, double cycle_fixed_cost) {
    params.validate();
    if (!(cycle_fixed_cost >= 0.0))
        throw std::domain_error("cycle fixed cost must be >= 0");

    const LotContext c = make_lot_context(params, cycle_fixed_cost);
    std::vector<std::array<double, 2>> candidates;
    const auto push = [&](double q, double r) {
        if (std::isfinite(q) && std::isfinite(r) && q > 0.0) candidates.push_back({q, r});
    };

    // Active set {}: interior stationary point.
    if (auto p = interior_fixed_point(c)) push((*p)[0], (*p)[1]);

    // Single active constraint, reduced to one dimension.
    if (c.pi > 0.0) push(c.Qf, c.stationary_r(c.Qf)); // frequency
    push(c.stationary_q(c.Rl), c.Rl);                 // reorder lower
    push(c.stationary_q(c.Ru), c.Ru);                 // reorder upper

    { // space: R = W - Q
        const auto deriv = [&](double q) {
            const double r = c.W - q;
            return -c.D / (q * q) * (c.a + c.pi * c.shortage_smooth(r)) -
                   c.D / q * c.pi * c.shortage_slope_smooth(r) - 0.5 * c.h;
        };
        if (auto q = bisect_stationary(deriv, 1e-9 * std::max(1.0, c.W), c.W))
            push(*q, c.W - *q);
    }
    { // average shortage at its limit: R(Q) = Du - sqrt(cc Q)
        const double cc = 2.0 * c.dd * c.B / c.D;
        const double q_hi =
            10.0 * (c.W + c.Qf + c.stationary_q(c.Rl) + c.Du + cc + 1.0);
        const auto deriv = [&](double q) {
            const double droot = cc > 0.0 ? std::sqrt(cc) / (2.0 * std::sqrt(q)) : 0.0;
            return -c.D * c.a / (q * q) + c.h * (0.5 - droot);
        };
        if (auto q = bisect_stationary(deriv, 1e-9 * std::max(1.0, q_hi), q_hi))
            push(*q, c.Du - std::sqrt(cc * *q));
    }

    // Two active constraints: closed-form vertices.
    push(c.Qf, c.W - c.Qf);                     // frequency + space
    {                                           // frequency + shortage
        const double cc = 2.0 * c.dd * c.B / c.D;
        push(c.Qf, c.Du - std::sqrt(cc * c.Qf));
    }
    push(c.Qf, c.Rl);                           // frequency + reorder bounds
    push(c.Qf, c.Ru);
    {                                           // space + shortage
        const double cc = 2.0 * c.dd * c.B / c.D;
        const double off = c.Du - c.W;
        const double b = 2.0 * off - cc;
        const double disc = b * b - 4.0 * off * off;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            push(0.5 * (-b + root), c.W - 0.5 * (-b + root));
            push(0.5 * (-b - root), c.W - 0.5 * (-b - root));
        }
    }
    push(c.W - c.Rl, c.Rl);                     // space + reorder bounds
    push(c.W - c.Ru, c.Ru);
    if (c.B > 0.0) {                            // shortage + reorder bounds
        push(c.D * c.shortage_smooth(c.Rl) / c.B, c.Rl);
        push(c.D * c.shortage_smooth(c.Ru) / c.B, c.Ru);
    }

    bool found = false;
    double best_q = 0.0, best_r = 0.0, best_total = kInf;
    for (const auto& [q, r] : candidates) {
        if (!c.feasible(q, r)) continue;
        const double total = c.objective(q, r);
        if (!found || total < best_total) {
            found = true;
            best_q = q;
            best_r = r;
            best_total = total;
        }
    }

    if (!found) {
        const LotRelaxation rel = analyze_lot_feasibility(params);
        if (rel.freq_vs_space)
            return LotInfeasible{"frequency floor times space per unit " + fmt(rel.freq_space_lhs) +
                                 " exceeds capacity " + fmt(params.capacity)};
        if (rel.shortage_unreachable)
            return LotInfeasible{"least reachable average shortage " + fmt(rel.min_avg_shortage) +
                                 " exceeds limit " + fmt(params.max_avg_shortage)};
        throw NumericalError("lot subproblem: no candidate was feasible yet relaxations pass");
    }

    LotResult r;
    r.lot_size = best_q;
    r.reorder_point = best_r;
    r.total = best_total;
    r.active_set = detect_active_set(c, best_q, best_r);
    return r;
}

SolveResult solve(const ScenarioParameters& params, const QualityModel& model) {
    params.validate();

    std::vector<CombinationOutcome> table;
    table.reserve(9);
    int best = -1;
    double best_total = kInf;
    for (int pkg = 1; pkg <= 3; ++pkg) {
        for (int env = 1; env <= 3; ++env) {
            CombinationOutcome out;
            out.packaging = pkg;
            out.environment = env;
            const ClimateSolve cs = solve_climate(params, model, pkg, env);
            if (const auto* inf = std::get_if<ClimateInfeasible>(&cs)) {
                out.status = CombinationStatus::ClimateInfeasible;
                out.total = kInf;
                out.note = "max achievable quality " + fmt(inf->max_quality) + " below floor " +
                           fmt(params.min_quality);
            } else {
                const auto& climate = std::get<ClimateResult>(cs);
                out.climate = climate;
                const double cycle_fixed = params.ordering_cost + params.temp_fixed_cost +
                                           params.hum_fixed_cost + climate.variable_cycle_cost +
                                           params.packaging_costs[pkg - 1] +
                                           params.environment_costs[env - 1];
                const LotSolve ls = solve_lot(params, cycle_fixed);
                if (const auto* li = std::get_if<LotInfeasible>(&ls)) {
                    out.status = CombinationStatus::LotInfeasible;
                    out.total = kInf;
                    out.note = li->reason;
                } else {
                    out.lot = std::get<LotResult>(ls);
                    out.status = CombinationStatus::Optimal;
                    out.total = out.lot->total;
                    if (out.total < best_total) {
                        best_total = out.total;
                        best = int(table.size());
                    }
                }
            }
            table.push_back(std::move(out));
        }
    }

    if (best < 0) return diagnose_infeasibility(params, model);

    const CombinationOutcome& win = table[best];
    Solution s;
    s.decision = DecisionVector{win.lot->lot_size,      win.lot->reorder_point,
                                win.climate->temperature, win.climate->humidity,
                                win.packaging,           win.environment};
    s.breakdown = cost_breakdown(params, s.decision);
    s.constraints = evaluate_constraints(params, model, s.decision);
    s.combinations = std::move(table);
    s.kkt_residual = kkt_residual(params, model, s.decision);
    return s;
}

InfeasibilityDiagnosis diagnose_infeasibility(const ScenarioParameters& params,
                                              const QualityModel& model) {
    params.validate();
    InfeasibilityDiagnosis d;
    const QualityMaximum qm = max_achievable_quality(model, params);
    if (qm.score < params.min_quality - constraint_tolerance(params.min_quality)) {
        d.causes.push_back(
            {InfeasibilityCause::QualityUnreachable, qm.score,
             "max achievable quality " + fmt(qm.score) + " at (T=" + fmt(qm.temperature) +
                 ", HU=" + fmt(qm.humidity) + ", packaging=" + std::to_string(qm.packaging) +
                 ", environment=" + std::to_string(qm.environment) + ") below floor " +
                 fmt(params.min_quality)});
    }
    const LotRelaxation rel = analyze_lot_feasibility(params);
    if (rel.freq_vs_space) {
        d.causes.push_back({InfeasibilityCause::FrequencyVsSpace, rel.freq_space_lhs,
                            "space needed at the frequency floor " + fmt(rel.freq_space_lhs) +
                                " exceeds capacity " + fmt(params.capacity)});
    } else if (rel.shortage_unreachable) {
        d.causes.push_back({InfeasibilityCause::ShortageUnreachable, rel.min_avg_shortage,
                            "least reachable average shortage " + fmt(rel.min_avg_shortage) +
                                " (at R=" + fmt(rel.min_shortage_r) + ") exceeds limit " +
                                fmt(params.max_avg_shortage)});
    }
    return d;
}

// ---------------------------------------------------------------------------
// KKT residual.
// ---------------------------------------------------------------------------

namespace {

struct ActiveGradient {
    std::array<double, 4> g; // d/d(Q, R, T, HU) of the <=0 constraint function
};

// Smallest ||grad_f + G lambda|| over lambda >= 0, by enumerating candidate
// supports (at most 4 independent columns matter in a 4-dimensional space)
// and solving each tiny least-squares system directly.
double nnls_residual(const std::array<double, 4>& grad_f, const std::vector<ActiveGradient>& gs) {
    const auto norm = [](const std::array<double, 4>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    };
    double best = norm(grad_f);
    const int m = int(gs.size());
    if (m == 0) return best;

    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        int idx[4];
        int k = 0;
        bool too_big = false;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) {
                if (k == 4) {
                    too_big = true;
                    break;
                }
                idx[k++] = i;
            }
        if (too_big) continue;

        // Normal equations (G'G) lambda = -G' grad_f for the selected columns.
        double a[4][5] = {};
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j)
                for (int d = 0; d < 4; ++d) a[i][j] += gs[idx[i]].g[d] * gs[idx[j]].g[d];
            for (int d = 0; d < 4; ++d) a[i][k] -= gs[idx[i]].g[d] * grad_f[d];
        }
        bool singular = false;
        for (int col = 0; col < k && !singular; ++col) {
            int piv = col;
            for (int row = col + 1; row < k; ++row)
                if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
            if (std::abs(a[piv][col]) < 1e-12) {
                singular = true;
                break;
            }
            if (piv != col)
                for (int j = 0; j <= k; ++j) std::swap(a[col][j], a[piv][j]);
            for (int row = col + 1; row < k; ++row) {
                const double f = a[row][col] / a[col][col];
                for (int j = col; j <= k; ++j) a[row][j] -= f * a[col][j];
            }
        }
        if (singular) continue;
        double lambda[4];
        for (int i = k - 1; i >= 0; --i) {
            double s = a[i][k];
            for (int j = i + 1; j < k; ++j) s -= a[i][j] * lambda[j];
            lambda[i] = s / a[i][i];
        }
        double max_l = 0.0;
        for (int i = 0; i < k; ++i) max_l = std::max(max_l, std::abs(lambda[i]));
        bool nonneg = true;
        for (int i = 0; i < k; ++i)
            if (lambda[i] < -1e-7 * std::max(1.0, max_l)) {
                nonneg = false;
                break;
            }
        if (!nonneg) continue;

        std::array<double, 4> res = grad_f;
        for (int i = 0; i < k; ++i)
            for (int d = 0; d < 4; ++d) res[d] += std::max(0.0, lambda[i]) * gs[idx[i]].g[d];
        best = std::min(best, norm(res));
    }
    return best;
}

} // namespace

double kkt_residual(const ScenarioParameters& params, const QualityModel& model,
                    const DecisionVector& decision) {
    params.validate();
    const ConstraintReport report = evaluate_constraints(params, model, decision);
    if (!report.all_satisfied())
        throw std::domain_error("kkt_residual requires a feasible decision");

    const double Q = decision.lot_size;
    const double R = decision.reorder_point;
    const double cyc = params.annual_demand / Q;
    const LeadTimeDemand& dem = params.demand;
    const double S = expected_shortage_extended(R, dem);
    double dS; // slope of the exact expectation
    if (R <= dem.lower)
        dS = -1.0;
    else if (R >= dem.upper)
        dS = 0.0;
    else
        dS = -(dem.upper - R) / dem.width();

    const double cycle_cost = params.ordering_cost + params.temp_fixed_cost +
                              params.hum_fixed_cost +
                              params.temp_var_cost * (params.temp_upper - decision.temperature) +
                              params.hum_var_cost * (params.hum_upper - decision.humidity) +
                              params.packaging_costs[decision.packaging - 1] +
                              params.environment_costs[decision.environment - 1] +
                              params.shortage_penalty * S;
    const std::array<double, 4> grad_f = {
        -cyc / Q * cycle_cost + 0.5 * params.holding_cost,
        cyc * params.shortage_penalty * dS + params.holding_cost,
        -cyc * params.temp_var_cost,
        -cyc * params.hum_var_cost,
    };

    const auto active = [&](ConstraintId id) {
        const ConstraintEntry& e = report.at(id);
        return std::abs(e.slack) <= constraint_tolerance(e.bound);
    };

    std::vector<ActiveGradient> gs;
    if (active(ConstraintId::Quality))
        gs.push_back({{0.0, 0.0, -model.temp_coef, -model.hum_coef}});
    if (active(ConstraintId::AvgShortage))
        gs.push_back({{-cyc / Q * S, cyc * dS, 0.0, 0.0}});
    if (active(ConstraintId::Space))
        gs.push_back({{params.space_per_unit, params.space_per_unit, 0.0, 0.0}});
    if (active(ConstraintId::Frequency)) gs.push_back({{-cyc / Q, 0.0, 0.0, 0.0}});
    const double t_tol = constraint_tolerance(params.temp_upper);
    if (std::abs(decision.temperature - params.temp_upper) <= t_tol)
        gs.push_back({{0.0, 0.0, 1.0, 0.0}});
    if (std::abs(decision.temperature - params.temp_lower) <=
        constraint_tolerance(params.temp_lower))
        gs.push_back({{0.0, 0.0, -1.0, 0.0}});
    if (std::abs(decision.humidity - params.hum_upper) <= constraint_tolerance(params.hum_upper))
        gs.push_back({{0.0, 0.0, 0.0, 1.0}});
    if (std::abs(decision.humidity - params.hum_lower) <= constraint_tolerance(params.hum_lower))
        gs.push_back({{0.0, 0.0, 0.0, -1.0}});
    if (std::abs(R - params.reorder_upper) <= constraint_tolerance(params.reorder_upper))
        gs.push_back({{0.0, 1.0, 0.0, 0.0}});
    if (std::abs(R - params.reorder_lower) <= constraint_tolerance(params.reorder_lower))
        gs.push_back({{0.0, -1.0, 0.0, 0.0}});
    if (std::abs(Q) <= constraint_tolerance(0.0)) gs.push_back({{-1.0, 0.0, 0.0, 0.0}});

    const double grad_norm = std::sqrt(grad_f[0] * grad_f[0] + grad_f[1] * grad_f[1] +
                                       grad_f[2] * grad_f[2] + grad_f[3] * grad_f[3]);
    return nnls_residual(grad_f, gs) / std::max(1.0, grad_norm);
}

// ---------------------------------------------------------------------------
// Grid oracle.
// ---------------------------------------------------------------------------

namespace {

struct Axis {
    double lo = 0.0, hi = 0.0; // current window
    double full_lo = 0.0, full_hi = 0.0;

    // Lattice for one round: linspace over the window, plus the original
    // bounds once the window has pulled away from them. Keeping the bounds
    // sampled stops the refinement from locking out an optimum that sits on
    // them (thin feasible wedges can strand the first incumbent many cells
    // away from such a corner).
    std::vector<double> values(int res) const {
        if (hi <= lo) return {lo};
        std::vector<double> v;
        v.reserve(std::size_t(res) + 2);
        for (int i = 0; i < res; ++i)
            v.push_back(lo + (hi - lo) * double(i) / double(res - 1));
        if (lo > full_lo) v.push_back(full_lo);
        if (hi < full_hi) v.push_back(full_hi);
        return v;
    }

    // 10x contraction around the incumbent. When the incumbent hugs a window
    // edge that is not an original bound, the optimum may lie just outside,
    // so the window slides to recenter at full width instead of shrinking.
    void shrink_around(double center, int res) {
        const double width = hi - lo;
        const double spacing = res > 1 ? width / double(res - 1) : 0.0;
        const bool hugs_moving_lo = lo > full_lo && center - lo <= spacing;
        const bool hugs_moving_hi = hi < full_hi && hi - center <= spacing;
        const double half = (hugs_moving_lo || hugs_moving_hi) ? 0.5 * width : 0.05 * width;
        lo = std::max(full_lo, center - half);
        hi = std::min(full_hi, center + half);
    }
};

Axis make_axis(double lo, double hi) { return Axis{lo, hi, lo, hi}; }

struct GridBest {
    double cost = kInf;
    long flat = -1;
    double q = 0.0, r = 0.0, t = 0.0, hu = 0.0;

    bool better_than(const GridBest& o) const {
        if (cost != o.cost) return cost < o.cost;
        return flat >= 0 && (o.flat < 0 || flat < o.flat);
    }
};

} // namespace

SolveResult grid_oracle(const ScenarioParameters& params, const QualityModel& model,
                        const OracleOptions& options) {
    params.validate();
    const bool full4d = options.mode == OracleOptions::Mode::Full4d;
    int res = options.resolution;
    if (res == 0) res = full4d ? 32 : 128;
    if (res < 32) throw std::domain_error("oracle resolution must be >= 32");
    if (options.rounds < 1) throw std::domain_error("oracle needs at least one refinement round");

    const double qf = params.annual_demand / params.max_orders;
    const double q_cap = params.capacity / params.space_per_unit - params.reorder_lower;
    const double qtol = constraint_tolerance(params.min_quality);
    const double ntol = constraint_tolerance(params.max_orders);
    const double ftol = constraint_tolerance(params.capacity);
    const double btol = constraint_tolerance(params.max_avg_shortage);

    std::vector<CombinationOutcome> table;
    table.reserve(9);
    int best_combo = -1;
    GridBest overall;

    for (int pkg = 1; pkg <= 3; ++pkg) {
        for (int env = 1; env <= 3; ++env) {
            CombinationOutcome out;
            out.packaging = pkg;
            out.environment = env;
            out.total = kInf;

            double fixed_t = 0.0, fixed_hu = 0.0;
            if (!full4d) {
                const ClimateSolve cs = solve_climate(params, model, pkg, env);
                if (const auto* inf = std::get_if<ClimateInfeasible>(&cs)) {
                    out.status = CombinationStatus::ClimateInfeasible;
                    out.note = "max achievable quality " + fmt(inf->max_quality) +
                               " below floor " + fmt(params.min_quality);
                    table.push_back(std::move(out));
                    continue;
                }
                const auto& cr = std::get<ClimateResult>(cs);
                out.climate = cr;
                fixed_t = cr.temperature;
                fixed_hu = cr.humidity;
            }
            if (qf > q_cap + ftol / params.space_per_unit) {
                out.status = CombinationStatus::LotInfeasible;
                out.note = "frequency floor exceeds the space ceiling";
                table.push_back(std::move(out));
                continue;
            }

            Axis qa = make_axis(qf, std::max(qf, q_cap));
            Axis ra = make_axis(params.reorder_lower, params.reorder_upper);
            Axis ta = full4d ? make_axis(params.temp_lower, params.temp_upper)
                             : make_axis(fixed_t, fixed_t);
            Axis ha = full4d ? make_axis(params.hum_lower, params.hum_upper)
                             : make_axis(fixed_hu, fixed_hu);
            const int res_t = full4d ? res : 1;
            const int res_h = full4d ? res : 1;

            const double level_part = model.intercept + model.packaging_coef * pkg +
                                      model.environment_coef * env;
            const double fixed_cycle = params.ordering_cost + params.temp_fixed_cost +
                                       params.hum_fixed_cost + params.packaging_costs[pkg - 1] +
                                       params.environment_costs[env - 1];

            GridBest incumbent;
            for (int round = 0; round < options.rounds; ++round) {
                const std::vector<double> q_vals = qa.values(res);
                const std::vector<double> t_vals = ta.values(res_t);
                const std::vector<double> hu_vals = ha.values(res_h);
                const std::size_t n_t = t_vals.size(), n_h = hu_vals.size();

                // Per-cell climate cost, +inf where the quality floor fails.
                std::vector<double> climate_cost(n_t * n_h);
                for (std::size_t i = 0; i < n_t; ++i)
                    for (std::size_t j = 0; j < n_h; ++j) {
                        const double t = t_vals[i], v = hu_vals[j];
                        const bool ok = model.temp_coef * t + model.hum_coef * v + level_part >=
                                        params.min_quality - qtol;
                        climate_cost[i * n_h + j] =
                            ok ? params.temp_var_cost * (params.temp_upper - t) +
                                     params.hum_var_cost * (params.hum_upper - v)
                               : kInf;
                    }

                const std::vector<double> r_vals = ra.values(res);
                std::vector<double> r_short(r_vals.size());
                for (std::size_t j = 0; j < r_vals.size(); ++j)
                    r_short[j] = expected_shortage_extended(r_vals[j], params.demand);

                std::vector<GridBest> chunk_best(thread_budget());
                parallel_chunks(q_vals.size(), [&](std::size_t chunk, std::size_t b,
                                                   std::size_t e) {
                    GridBest local;
                    for (std::size_t iq = b; iq < e; ++iq) {
                        const double q = q_vals[iq];
                        if (!(q > 0.0)) continue;
                        const double cyc = params.annual_demand / q;
                        if (cyc > params.max_orders + ntol) continue;
                        for (std::size_t ir = 0; ir < r_vals.size(); ++ir) {
                            const double r = r_vals[ir];
                            if (params.space_per_unit * (q + r) > params.capacity + ftol) continue;
                            const double s = r_short[ir];
                            if (cyc * s > params.max_avg_shortage + btol) continue;
                            const double base =
                                cyc * (fixed_cycle + params.shortage_penalty * s) +
                                params.holding_cost * (0.5 * q + r - params.demand.mean());
                            const long flat0 =
                                (long(iq) * long(r_vals.size()) + long(ir)) * long(n_t * n_h);
                            for (std::size_t cell = 0; cell < climate_cost.size(); ++cell) {
                                const double cc = climate_cost[cell];
                                if (cc == kInf) continue;
                                const double total = base + cyc * cc;
                                const GridBest cand{total, flat0 + long(cell), q, r,
                                                    t_vals[cell / n_h], hu_vals[cell % n_h]};
                                if (cand.better_than(local)) local = cand;
                            }
                        }
                    }
                    chunk_best[chunk] = local;
                });
                for (const auto& cb : chunk_best)
                    if (cb.flat >= 0 && cb.better_than(incumbent)) incumbent = cb;

                if (incumbent.flat < 0) break; // full window held nothing feasible
                qa.shrink_around(incumbent.q, res);
                ra.shrink_around(incumbent.r, res);
                if (full4d) {
                    ta.shrink_around(incumbent.t, res_t);
                    ha.shrink_around(incumbent.hu, res_h);
                }
            }

            if (incumbent.flat < 0) {
                out.status = CombinationStatus::LotInfeasible;
                out.note = "no feasible lattice point at this resolution";
                table.push_back(std::move(out));
                continue;
            }
            out.status = CombinationStatus::Optimal;
            out.total = incumbent.cost;
            if (full4d)
                out.climate = ClimateResult{
                    incumbent.t, incumbent.hu,
                    params.temp_var_cost * (params.temp_upper - incumbent.t) +
                        params.hum_var_cost * (params.hum_upper - incumbent.hu),
                    false};
            LotResult lot;
            lot.lot_size = incumbent.q;
            lot.reorder_point = incumbent.r;
            lot.total = incumbent.cost;
            lot.active_set =
                detect_active_set(make_lot_context(params, 0.0), incumbent.q, incumbent.r);
            out.lot = lot;
            if (best_combo < 0 || incumbent.cost < overall.cost) {
                overall = incumbent;
                best_combo = int(table.size());
            }
            table.push_back(std::move(out));
        }
    }

    if (best_combo < 0) {
        InfeasibilityDiagnosis diag = diagnose_infeasibility(params, model);
        if (diag.causes.empty())
            throw NumericalError(
                "grid oracle found no feasible lattice point but the relaxation checks pass; "
                "increase the resolution");
        return diag;
    }

    const CombinationOutcome& win = table[best_combo];
    Solution s;
    s.decision = DecisionVector{win.lot->lot_size,      win.lot->reorder_point,
                                win.climate->temperature, win.climate->humidity,
                                win.packaging,           win.environment};
    s.breakdown = cost_breakdown(params, s.decision);
    s.constraints = evaluate_constraints(params, model, s.decision);
    s.combinations = std::move(table);
    s.kkt_residual = kkt_residual(params, model, s.decision);
    return s;
}

} // namespace coldopt
