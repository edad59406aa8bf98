#include "coldopt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coldopt/analysis.hpp"
#include "coldopt/csv.hpp"
#include "coldopt/errors.hpp"
#include "coldopt/scenario.hpp"
#include "coldopt/solver.hpp"

namespace coldopt::cli {
namespace {

std::string pr(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void print_breakdown(const CostBreakdown& c) {
    std::cout << "annual cost:\n";
    std::cout << "  ordering     = " << pr(c.ordering) << "\n";
    std::cout << "  holding      = " << pr(c.holding) << "\n";
    std::cout << "  shortage     = " << pr(c.shortage) << "\n";
    std::cout << "  temperature  = " << pr(c.temperature) << "\n";
    std::cout << "  humidity     = " << pr(c.humidity) << "\n";
    std::cout << "  packaging    = " << pr(c.packaging) << "\n";
    std::cout << "  environment  = " << pr(c.environment) << "\n";
    std::cout << "  total        = " << pr(c.total) << "\n";
}

void print_solution(const Solution& s) {
    std::cout << "status: optimal\n";
    std::cout << "decision:\n";
    std::cout << "  lot size Q        = " << pr(s.decision.lot_size) << " kg/order\n";
    std::cout << "  reorder point R   = " << pr(s.decision.reorder_point) << " kg\n";
    std::cout << "  temperature T     = " << pr(s.decision.temperature) << " degC\n";
    std::cout << "  humidity HU       = " << pr(s.decision.humidity) << " %\n";
    std::cout << "  packaging level   = " << s.decision.packaging << "\n";
    std::cout << "  environment level = " << s.decision.environment << "\n";
    print_breakdown(s.breakdown);
    std::cout << "constraints:\n";
    for (const auto& e : s.constraints.entries) {
        std::cout << "  " << to_string(e.id) << ": lhs=" << pr(e.lhs) << " bound=" << pr(e.bound)
                  << " slack=" << pr(e.slack) << (e.satisfied ? "" : "  VIOLATED") << "\n";
    }
    std::cout << "kkt residual = " << pr(s.kkt_residual) << "\n";
    std::cout << "combinations:\n";
    for (const auto& c : s.combinations) {
        std::cout << "  (" << c.packaging << "," << c.environment << ") " << to_string(c.status);
        if (c.status == CombinationStatus::Optimal)
            std::cout << " total=" << pr(c.total);
        else
            std::cout << " [" << c.note << "]";
        const bool selected = c.packaging == s.decision.packaging &&
                              c.environment == s.decision.environment &&
                              c.status == CombinationStatus::Optimal;
        if (selected) std::cout << "  <= selected";
        std::cout << "\n";
    }
}

void print_diagnosis(const InfeasibilityDiagnosis& d) {
    std::cout << "status: infeasible\n";
    for (const auto& cause : d.causes)
        std::cout << "  " << to_string(cause.cause) << ": witness " << pr(cause.witness) << " ("
                  << cause.detail << ")\n";
}

std::string solution_csv_text(const ScenarioParameters& params, const QualityModel& model,
                              const Solution& s) {
    std::string out =
        "packaging,environment,status,total,Q,R,T,HU,"
        "ordering,holding,shortage,temperature,humidity,pack_cost,env_cost,kkt_residual,selected\n";
    for (const auto& c : s.combinations) {
        out += std::to_string(c.packaging) + ',' + std::to_string(c.environment) + ',';
        out += to_string(c.status);
        if (c.status != CombinationStatus::Optimal) {
            out += ",,,,,,,,,,,,,,0\n";
            continue;
        }
        const DecisionVector dec{c.lot->lot_size,      c.lot->reorder_point,
                                 c.climate->temperature, c.climate->humidity,
                                 c.packaging,           c.environment};
        const CostBreakdown b = cost_breakdown(params, dec);
        const bool selected = c.packaging == s.decision.packaging &&
                              c.environment == s.decision.environment;
        out += ',' + format_double(b.total) + ',';
        out += format_double(dec.lot_size) + ',';
        out += format_double(dec.reorder_point) + ',';
        out += format_double(dec.temperature) + ',';
        out += format_double(dec.humidity) + ',';
        out += format_double(b.ordering) + ',';
        out += format_double(b.holding) + ',';
        out += format_double(b.shortage) + ',';
        out += format_double(b.temperature) + ',';
        out += format_double(b.humidity) + ',';
        out += format_double(b.packaging) + ',';
        out += format_double(b.environment) + ',';
        out += format_double(kkt_residual(params, model, dec)) + ',';
        out += selected ? "1\n" : "0\n";
    }
    return out;
}

int cmd_solve(const std::string& scenario_path, const std::string& out_path) {
    const ScenarioFile sc = parse_scenario(scenario_path);
    const SolveResult r = solve(sc.params, sc.quality_model);
    if (const auto* diag = std::get_if<InfeasibilityDiagnosis>(&r)) {
        print_diagnosis(*diag);
        return 3;
    }
    const Solution& s = std::get<Solution>(r);
    print_solution(s);
    atomic_write_file(out_path, solution_csv_text(sc.params, sc.quality_model, s));
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const SweepSpec& spec,
              const std::string& out_path) {
    const ScenarioFile sc = parse_scenario(scenario_path);
    const SweepResult result = sweep(sc.params, sc.quality_model, spec);
    write_sweep_csv(result, out_path);

    std::size_t optimal = 0;
    for (const auto& pt : result.points)
        if (pt.status == PointStatus::Optimal) ++optimal;
    std::cout << "sweep " << spec.parameter << " over [" << pr(spec.from) << ", " << pr(spec.to)
              << "] in " << spec.steps << " steps: " << optimal << " optimal, "
              << result.points.size() - optimal << " infeasible\n";
    if (optimal >= 2) {
        const TrendVerdict up = check_trend(result, TrendDirection::NonDecreasing);
        const TrendVerdict down = check_trend(result, TrendDirection::NonIncreasing);
        std::cout << "trend non_decreasing=" << (up.holds ? "true" : "false");
        if (up.first_violation)
            std::cout << " (first violation at value "
                      << pr(result.points[*up.first_violation].value) << ")";
        std::cout << "\n";
        std::cout << "trend non_increasing=" << (down.holds ? "true" : "false");
        if (down.first_violation)
            std::cout << " (first violation at value "
                      << pr(result.points[*down.first_violation].value) << ")";
        std::cout << "\n";
    } else {
        std::cout << "trend: undetermined (fewer than 2 optimal points)\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_gen_data(const std::string& scenario_path, std::size_t n, const std::string& out_path) {
    const ScenarioFile sc = parse_scenario(scenario_path);
    const GeneratorSpec gen = sc.generator_or_default();
    const QualityDataset data = generate_dataset(gen, n);
    write_dataset_csv(data, out_path);
    std::cout << "wrote " << data.rows.size() << " rows to " << out_path << " (seed " << gen.seed
              << ", noise_std " << pr(gen.noise_std) << ")\n";
    return 0;
}

int cmd_fit(const std::string& data_path, const std::string& out_path) {
    const QualityDataset data = read_dataset_csv(data_path);
    const FitReport report = fit_ols(data);
    std::cout << "fit on " << report.n_rows << " rows:\n";
    std::cout << "  temp        = " << pr(report.model.temp_coef) << "\n";
    std::cout << "  hum         = " << pr(report.model.hum_coef) << "\n";
    std::cout << "  packaging   = " << pr(report.model.packaging_coef) << "\n";
    std::cout << "  environment = " << pr(report.model.environment_coef) << "\n";
    std::cout << "  intercept   = " << pr(report.model.intercept) << "\n";
    std::cout << "  r_squared   = " << pr(report.r_squared) << "\n";
    std::cout << "  residual_std= " << pr(report.residual_std) << "\n";
    atomic_write_file(out_path, quality_model_fragment(report.model));
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

struct ValidateCheck {
    std::string name;
    bool pass = false;
    std::string observed;
    std::string threshold;
};

int cmd_validate(const std::string& scenario_path, const std::string& out_path) {
    const ScenarioFile sc = parse_scenario(scenario_path);
    std::vector<ValidateCheck> checks;
    const auto add = [&](const std::string& name, bool pass, const std::string& observed,
                         const std::string& threshold) {
        checks.push_back({name, pass, observed, threshold});
    };

    const SolveResult solved = solve(sc.params, sc.quality_model);
    const SolveResult o2 = grid_oracle(sc.params, sc.quality_model,
                                       {OracleOptions::Mode::Climate2d, 128, 4});
    const SolveResult o4 = grid_oracle(sc.params, sc.quality_model,
                                       {OracleOptions::Mode::Full4d, 32, 4});

    const bool infeasible = std::holds_alternative<InfeasibilityDiagnosis>(solved);
    if (!infeasible) {
        const Solution& s = std::get<Solution>(solved);
        const auto* s2 = std::get_if<Solution>(&o2);
        const auto* s4 = std::get_if<Solution>(&o4);
        add("oracle_2d_feasible", s2 != nullptr, s2 ? "optimal" : "infeasible", "optimal");
        add("oracle_4d_feasible", s4 != nullptr, s4 ? "optimal" : "infeasible", "optimal");
        if (s2) {
            const double rel = std::abs(s.breakdown.total - s2->breakdown.total) /
                               std::max(1.0, std::abs(s2->breakdown.total));
            add("solve_vs_oracle_2d_total", rel <= 1e-3, pr(rel), "<= 0.001");
            add("solve_vs_oracle_2d_combo",
                s.decision.packaging == s2->decision.packaging &&
                    s.decision.environment == s2->decision.environment,
                "(" + std::to_string(s2->decision.packaging) + "," +
                    std::to_string(s2->decision.environment) + ")",
                "(" + std::to_string(s.decision.packaging) + "," +
                    std::to_string(s.decision.environment) + ")");
        }
        if (s2 && s4) {
            const double rel = std::abs(s4->breakdown.total - s2->breakdown.total) /
                               std::max(1.0, std::abs(s2->breakdown.total));
            add("oracle_4d_vs_2d_total", rel <= 5e-3, pr(rel), "<= 0.005");
            add("oracle_4d_vs_2d_combo",
                s4->decision.packaging == s2->decision.packaging &&
                    s4->decision.environment == s2->decision.environment,
                "(" + std::to_string(s4->decision.packaging) + "," +
                    std::to_string(s4->decision.environment) + ")",
                "(" + std::to_string(s2->decision.packaging) + "," +
                    std::to_string(s2->decision.environment) + ")");
        }
        add("kkt_residual", s.kkt_residual <= 1e-6, pr(s.kkt_residual), "<= 1e-06");
        add("constraints_satisfied",
            evaluate_constraints(sc.params, sc.quality_model, s.decision).all_satisfied(), "checked",
            "all satisfied");
    } else {
        const auto& diag = std::get<InfeasibilityDiagnosis>(solved);
        const auto causes_of = [](const SolveResult& r) {
            std::vector<std::string> names;
            if (const auto* d = std::get_if<InfeasibilityDiagnosis>(&r))
                for (const auto& c : d->causes) names.emplace_back(to_string(c.cause));
            std::sort(names.begin(), names.end());
            return names;
        };
        const auto expect = causes_of(solved);
        add("oracle_2d_matches_diagnosis", causes_of(o2) == expect, "compared", "same causes");
        add("oracle_4d_matches_diagnosis", causes_of(o4) == expect, "compared", "same causes");
        add("diagnosis_nonempty", !diag.causes.empty(), std::to_string(diag.causes.size()),
            ">= 1 cause");
    }

    // Closed-form shortage vs Monte Carlo across the reorder window.
    for (int i = 0; i < 5; ++i) {
        const double r = sc.params.reorder_lower +
                         (sc.params.reorder_upper - sc.params.reorder_lower) * double(i) / 4.0;
        const McReport mc = mc_shortage(r, sc.params.demand, 1000000, sc.seed);
        add("mc_shortage_R" + pr(r), std::abs(mc.z_score) <= 4.0, pr(mc.z_score), "|z| <= 4");
    }

    std::string csv = "check,result,observed,threshold\n";
    bool all_pass = true;
    std::cout << "validation checks:\n";
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        std::cout << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << " (observed "
                  << c.observed << ", expected " << c.threshold << ")\n";
        csv += c.name + ',' + (c.pass ? "pass" : "fail") + ',' + c.observed + ',' + c.threshold +
               '\n';
    }
    atomic_write_file(out_path, csv);
    std::cout << "wrote " << out_path << "\n";

    if (!all_pass) return 4;
    if (infeasible) {
        print_diagnosis(std::get<InfeasibilityDiagnosis>(solved));
        return 3;
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"cold-warehouse lot size, reorder point and storage-condition optimizer"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, data_path;
    SweepSpec spec;
    std::size_t n_rows = 10000;

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve a scenario and report the optimum");
    solve_cmd->add_option("scenario", scenario_path, "scenario TOML file")->required();
    solve_cmd->add_option("--out", out_path, "combination table CSV")->default_val("solution.csv");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "re-solve while varying one parameter; write a CSV");
    sweep_cmd->add_option("scenario", scenario_path, "scenario TOML file")->required();
    sweep_cmd->add_option("--param", spec.parameter, "parameter id (see docs)")->required();
    sweep_cmd->add_option("--from", spec.from, "first value")->required();
    sweep_cmd->add_option("--to", spec.to, "last value")->required();
    sweep_cmd->add_option("--steps", spec.steps, "number of points")->default_val(13);
    sweep_cmd->add_option("--out", out_path, "sweep CSV")->default_val("sweep.csv");

    CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic quality dataset");
    gen_cmd->add_option("scenario", scenario_path, "scenario TOML file")->required();
    gen_cmd->add_option("--n", n_rows, "rows to generate")->default_val(10000);
    gen_cmd->add_option("--out", out_path, "dataset CSV")->default_val("dataset.csv");

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit the quality model to a dataset CSV");
    fit_cmd->add_option("data", data_path, "dataset CSV")->required();
    fit_cmd->add_option("--out", out_path, "model fragment TOML")->default_val("model_fit.toml");

    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "cross-check the solver against the grid oracle and Monte Carlo");
    validate_cmd->add_option("scenario", scenario_path, "scenario TOML file")->required();
    validate_cmd->add_option("--out", out_path, "report CSV")->default_val("validate_report.csv");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*solve_cmd) return cmd_solve(scenario_path, out_path);
        if (*sweep_cmd) return cmd_sweep(scenario_path, spec, out_path);
        if (*gen_cmd) return cmd_gen_data(scenario_path, n_rows, out_path);
        if (*fit_cmd) return cmd_fit(data_path, out_path);
        if (*validate_cmd) return cmd_validate(scenario_path, out_path);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace coldopt::cli
