#include "coldopt/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "coldopt/csv.hpp"
#include "coldopt/toml_lite.hpp"

namespace coldopt {
namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg, int line) {
    throw ValidationError(origin + ":" + std::to_string(line) + ": " + msg);
}

/// Consumes keys from one table and rejects anything left over.
class SectionReader {
public:
    SectionReader(const std::string& origin, std::string name, const TomlTable* table)
        : origin_(origin), name_(std::move(name)), table_(table) {}

    bool present() const { return table_ != nullptr; }

    double number(const char* key) {
        const TomlValue& v = get(key);
        if (v.kind != TomlValue::Kind::Number)
            fail(origin_, locate(key) + " must be a number", v.line);
        return v.number;
    }

    std::optional<double> optional_number(const char* key) {
        if (!table_ || !table_->values.count(key)) return std::nullopt;
        return number(key);
    }

    std::array<double, 3> triple(const char* key) {
        const TomlValue& v = get(key);
        if (v.kind != TomlValue::Kind::Array || v.array.size() != 3)
            fail(origin_, locate(key) + " must be an array of 3 numbers", v.line);
        return {v.array[0], v.array[1], v.array[2]};
    }

    std::uint64_t seed(const char* key) {
        const TomlValue& v = get(key);
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.raw.data(), v.raw.data() + v.raw.size(), out);
        if (v.kind != TomlValue::Kind::Number || ec != std::errc{} ||
            ptr != v.raw.data() + v.raw.size())
            fail(origin_, locate(key) + " must be a non-negative 64-bit integer", v.line);
        return out;
    }

    void finish() {
        if (!table_) return;
        for (const auto& [key, value] : table_->values)
            if (!consumed_.count(key))
                fail(origin_, "unknown key " + locate(key.c_str()), value.line);
    }

private:
    const TomlValue& get(const char* key) {
        if (!table_) fail(origin_, "missing section [" + name_ + "]", 1);
        const auto it = table_->values.find(key);
        if (it == table_->values.end())
            fail(origin_, "missing key " + locate(key), table_->line);
        consumed_.insert(key);
        return it->second;
    }

    std::string locate(const char* key) const {
        return name_.empty() ? std::string("'") + key + "'"
                             : "'" + std::string(key) + "' in [" + name_ + "]";
    }

    const std::string& origin_;
    std::string name_;
    const TomlTable* table_;
    std::set<std::string> consumed_;
};

const TomlTable* find_section(const TomlDocument& doc, const char* name) {
    const auto it = doc.sections.find(name);
    return it == doc.sections.end() ? nullptr : &it->second;
}

QualityModel read_model(SectionReader& r) {
    QualityModel m;
    m.temp_coef = r.number("temp");
    m.hum_coef = r.number("hum");
    m.packaging_coef = r.number("packaging");
    m.environment_coef = r.number("environment");
    m.intercept = r.number("intercept");
    return m;
}

} // namespace

GeneratorSpec ScenarioFile::generator_or_default() const {
    if (generator) return *generator;
    GeneratorSpec g;
    g.true_model = quality_model;
    g.noise_std = 2.0;
    g.temp_lower = params.temp_lower;
    g.temp_upper = params.temp_upper;
    g.hum_lower = params.hum_lower;
    g.hum_upper = params.hum_upper;
    g.seed = seed;
    return g;
}

ScenarioFile parse_scenario_text(std::string_view text, const std::string& origin) {
    TomlDocument doc;
    try {
        doc = parse_toml(text);
    } catch (const TomlError& e) {
        throw ValidationError(origin + ": " + e.what());
    }

    static const std::set<std::string> known_sections = {
        "demand", "costs", "limits", "climate", "quality_model", "generator", "rng"};
    for (const auto& [name, table] : doc.sections)
        if (!known_sections.count(name))
            fail(origin, "unknown section [" + name + "]", table.line);

    ScenarioFile sc;

    SectionReader root(origin, "", &doc.root);
    const double schema = root.number("schema");
    if (schema != 1.0) fail(origin, "unsupported schema version (expected 1)", 1);
    root.finish();

    SectionReader demand(origin, "demand", find_section(doc, "demand"));
    sc.params.annual_demand = demand.number("annual");
    sc.params.demand.lower = demand.number("lead_time_lower");
    sc.params.demand.upper = demand.number("lead_time_upper");
    demand.finish();

    SectionReader costs(origin, "costs", find_section(doc, "costs"));
    sc.params.ordering_cost = costs.number("ordering");
    sc.params.holding_cost = costs.number("holding");
    sc.params.shortage_penalty = costs.number("shortage");
    sc.params.temp_var_cost = costs.number("temp_var");
    sc.params.hum_var_cost = costs.number("hum_var");
    sc.params.temp_fixed_cost = costs.number("temp_fixed");
    sc.params.hum_fixed_cost = costs.number("hum_fixed");
    sc.params.packaging_costs = costs.triple("packaging");
    sc.params.environment_costs = costs.triple("environment");
    costs.finish();

    SectionReader limits(origin, "limits", find_section(doc, "limits"));
    sc.params.max_avg_shortage = limits.number("max_avg_shortage");
    sc.params.min_quality = limits.number("min_quality");
    sc.params.space_per_unit = limits.number("space_per_unit");
    sc.params.capacity = limits.number("capacity");
    sc.params.max_orders = limits.number("max_orders");
    sc.params.reorder_lower = limits.number("reorder_lower");
    sc.params.reorder_upper = limits.number("reorder_upper");
    limits.finish();

    SectionReader climate(origin, "climate", find_section(doc, "climate"));
    sc.params.temp_lower = climate.number("temp_lower");
    sc.params.temp_upper = climate.number("temp_upper");
    sc.params.hum_lower = climate.number("hum_lower");
    sc.params.hum_upper = climate.number("hum_upper");
    climate.finish();

    SectionReader model(origin, "quality_model", find_section(doc, "quality_model"));
    sc.quality_model = read_model(model);
    model.finish();

    SectionReader rng(origin, "rng", find_section(doc, "rng"));
    sc.seed = rng.seed("seed");
    rng.finish();

    if (const TomlTable* gen_table = find_section(doc, "generator")) {
        SectionReader gen(origin, "generator", gen_table);
        GeneratorSpec g;
        g.true_model.temp_coef = gen.optional_number("temp").value_or(sc.quality_model.temp_coef);
        g.true_model.hum_coef = gen.optional_number("hum").value_or(sc.quality_model.hum_coef);
        g.true_model.packaging_coef =
            gen.optional_number("packaging").value_or(sc.quality_model.packaging_coef);
        g.true_model.environment_coef =
            gen.optional_number("environment").value_or(sc.quality_model.environment_coef);
        g.true_model.intercept =
            gen.optional_number("intercept").value_or(sc.quality_model.intercept);
        g.noise_std = gen.optional_number("noise_std").value_or(2.0);
        g.temp_lower = gen.optional_number("temp_lower").value_or(sc.params.temp_lower);
        g.temp_upper = gen.optional_number("temp_upper").value_or(sc.params.temp_upper);
        g.hum_lower = gen.optional_number("hum_lower").value_or(sc.params.hum_lower);
        g.hum_upper = gen.optional_number("hum_upper").value_or(sc.params.hum_upper);
        g.seed = sc.seed;
        gen.finish();
        try {
            g.validate();
        } catch (const std::domain_error& e) {
            fail(origin, std::string("invalid [generator]: ") + e.what(), gen_table->line);
        }
        sc.generator = g;
    }

    try {
        sc.params.validate();
    } catch (const std::domain_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    return sc;
}

ScenarioFile parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed on '" + path + "'");
    return parse_scenario_text(buf.str(), path);
}

std::string quality_model_fragment(const QualityModel& model) {
    std::string out = "[quality_model]\n";
    out += "temp = " + format_double(model.temp_coef) + "\n";
    out += "hum = " + format_double(model.hum_coef) + "\n";
    out += "packaging = " + format_double(model.packaging_coef) + "\n";
    out += "environment = " + format_double(model.environment_coef) + "\n";
    out += "intercept = " + format_double(model.intercept) + "\n";
    return out;
}

} // namespace coldopt
