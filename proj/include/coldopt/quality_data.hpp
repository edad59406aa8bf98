#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coldopt/inventory.hpp"

namespace coldopt {

/// Recipe for a synthetic quality dataset: an affine ground-truth model plus
/// Gaussian noise, sampled uniformly over the climate ranges and the level
/// set {1,2,3} for packaging and environment.
struct GeneratorSpec {
    QualityModel true_model;
    double noise_std = 2.0; // score
    double temp_lower = 0.0;
    double temp_upper = 0.0;
    double hum_lower = 0.0;
    double hum_upper = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct QualityRow {
    double temperature = 0.0;
    double humidity = 0.0;
    int packaging = 1;
    int environment = 1;
    double quality = 0.0;
};

struct QualityDataset {
    std::vector<QualityRow> rows;
};

struct FitReport {
    QualityModel model;
    double r_squared = 0.0;
    double residual_std = 0.0;
    std::size_t n_rows = 0;
};

/// Thrown when the regression design matrix is rank-deficient; column() names
/// the feature that caused it.
class SingularFitError : public std::domain_error {
public:
    explicit SingularFitError(std::string column)
        : std::domain_error("singular fit: column '" + column + "' carries no independent information"),
          column_(std::move(column)) {}

    const std::string& column() const { return column_; }

private:
    std::string column_;
};

/// Draws n rows. Each column comes from its own counter-based stream derived
/// from the seed, so the output is bit-reproducible across runs and thread
/// schedules, and adding a column later cannot disturb the existing ones.
QualityDataset generate_dataset(const GeneratorSpec& spec, std::size_t n);

/// Ordinary least squares on (T, HU, packaging, environment) + intercept.
/// Normal equations, equilibrated, solved with partial pivoting. Needs at
/// least 5 rows and a full-rank design.
FitReport fit_ols(const QualityDataset& dataset);

} // namespace coldopt
