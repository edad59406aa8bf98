#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "coldopt/errors.hpp"
#include "coldopt/inventory.hpp"
#include "coldopt/quality_data.hpp"

namespace coldopt {

/// A fully validated scenario: problem parameters, the quality model used by
/// the constraint, an optional dataset generator, and the master seed that
/// feeds every random stream.
struct ScenarioFile {
    ScenarioParameters params;
    QualityModel quality_model;
    std::optional<GeneratorSpec> generator;
    std::uint64_t seed = 0;

    /// The [generator] section when present, otherwise a generator built from
    /// the quality model, the climate boxes and the default noise level.
    GeneratorSpec generator_or_default() const;
};

/// Loads and validates a scenario TOML file. Unknown keys or sections,
/// missing required keys, type mismatches and invariant violations are all
/// reported with key and line; a missing/unreadable file is an IoError.
ScenarioFile parse_scenario(const std::string& path);

/// Same as parse_scenario for in-memory text; origin labels error messages.
ScenarioFile parse_scenario_text(std::string_view text, const std::string& origin);

/// Renders a quality model as a [quality_model] scenario fragment.
std::string quality_model_fragment(const QualityModel& model);

} // namespace coldopt
