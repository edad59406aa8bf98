#include "coldopt/quality_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "coldopt/rng.hpp"

namespace coldopt {
namespace {

constexpr std::array<const char*, 5> kColumnNames = {"T", "HU", "packaging", "environment",
                                                     "intercept"};

// Feature row in fit order: T, HU, packaging, environment, 1.
std::array<double, 5> features(const QualityRow& r) {
    return {r.temperature, r.humidity, double(r.packaging), double(r.environment), 1.0};
}

void check_rows(const QualityDataset& d) {
    for (const auto& r : d.rows) {
        if (r.packaging < 1 || r.packaging > 3 || r.environment < 1 || r.environment > 3)
            throw std::domain_error("dataset level outside {1,2,3}");
        if (!std::isfinite(r.temperature) || !std::isfinite(r.humidity) ||
            !std::isfinite(r.quality))
            throw std::domain_error("dataset contains a non-finite value");
    }
}

} // namespace

void GeneratorSpec::validate() const {
    if (!(noise_std >= 0.0)) throw std::domain_error("noise_std must be >= 0");
    if (!(temp_lower < temp_upper)) throw std::domain_error("generator temperature range is degenerate");
    if (!(hum_lower < hum_upper)) throw std::domain_error("generator humidity range is degenerate");
    if (!std::isfinite(true_model.temp_coef) || !std::isfinite(true_model.hum_coef) ||
        !std::isfinite(true_model.packaging_coef) || !std::isfinite(true_model.environment_coef) ||
        !std::isfinite(true_model.intercept))
        throw std::domain_error("generator model has a non-finite coefficient");
}

QualityDataset generate_dataset(const GeneratorSpec& spec, std::size_t n) {
    spec.validate();
    const RandomStream t_stream(spec.seed, stream_tag::kTemperature);
    const RandomStream hu_stream(spec.seed, stream_tag::kHumidity);
    const RandomStream pkg_stream(spec.seed, stream_tag::kPackaging);
    const RandomStream env_stream(spec.seed, stream_tag::kEnvironment);
    const RandomStream noise_stream(spec.seed, stream_tag::kNoise);

    QualityDataset d;
    d.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        QualityRow& r = d.rows[i];
        r.temperature = t_stream.uniform(i, spec.temp_lower, spec.temp_upper);
        r.humidity = hu_stream.uniform(i, spec.hum_lower, spec.hum_upper);
        r.packaging = pkg_stream.level3(i);
        r.environment = env_stream.level3(i);
        r.quality = quality_score(spec.true_model, r.temperature, r.humidity, r.packaging,
                                  r.environment) +
                    spec.noise_std * noise_stream.normal(i);
    }
    return d;
}

FitReport fit_ols(const QualityDataset& dataset) {
    const std::size_t n = dataset.rows.size();
    if (n < 5) throw std::domain_error("fit needs at least 5 rows");
    check_rows(dataset);

    // A feature column with zero spread can never be separated from the
    // intercept; report it by name before the generic rank check.
    for (int j = 0; j < 4; ++j) {
        const double first = features(dataset.rows.front())[j];
        bool varies = false;
        for (const auto& r : dataset.rows)
            if (features(r)[j] != first) {
                varies = true;
                break;
            }
        if (!varies) throw SingularFitError(kColumnNames[j]);
    }

    // Normal equations M beta = v with M = X'X, v = X'y.
    double m[5][5] = {};
    double v[5] = {};
    for (const auto& r : dataset.rows) {
        const auto x = features(r);
        for (int i = 0; i < 5; ++i) {
            v[i] += x[i] * r.quality;
            for (int j = 0; j < 5; ++j) m[i][j] += x[i] * x[j];
        }
    }

    // Jacobi equilibration keeps the pivot threshold meaningful across very
    // different column scales.
    double scale[5];
    for (int i = 0; i < 5; ++i) {
        if (!(m[i][i] > 0.0)) throw SingularFitError(kColumnNames[i]);
        scale[i] = std::sqrt(m[i][i]);
    }
    double a[5][6];
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) a[i][j] = m[i][j] / (scale[i] * scale[j]);
        a[i][5] = v[i] / scale[i];
    }

    // Gaussian elimination with partial (row) pivoting. Columns stay in
    // place, so a vanishing pivot at step k names column k.
    for (int k = 0; k < 5; ++k) {
        int piv = k;
        for (int i = k + 1; i < 5; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) < 1e-10) throw SingularFitError(kColumnNames[k]);
        if (piv != k)
            for (int j = 0; j < 6; ++j) std::swap(a[k][j], a[piv][j]);
        for (int i = k + 1; i < 5; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int j = k; j < 6; ++j) a[i][j] -= f * a[k][j];
        }
    }
    double beta[5];
    for (int k = 4; k >= 0; --k) {
        double s = a[k][5];
        for (int j = k + 1; j < 5; ++j) s -= a[k][j] * beta[j];
        beta[k] = s / a[k][k];
    }
    for (int i = 0; i < 5; ++i) beta[i] /= scale[i];

    FitReport report;
    report.model = {beta[0], beta[1], beta[2], beta[3], beta[4]};
    report.n_rows = n;

    double mean_y = 0.0;
    for (const auto& r : dataset.rows) mean_y += r.quality;
    mean_y /= double(n);

    double ssr = 0.0, sst = 0.0;
    for (const auto& r : dataset.rows) {
        const double pred = quality_score(report.model, r.temperature, r.humidity, r.packaging,
                                          r.environment);
        ssr += (r.quality - pred) * (r.quality - pred);
        sst += (r.quality - mean_y) * (r.quality - mean_y);
    }
    report.residual_std = std::sqrt(ssr / double(std::max<std::size_t>(1, n - 5)));
    if (sst > 0.0)
        report.r_squared = std::clamp(1.0 - ssr / sst, 0.0, 1.0);
    else
        report.r_squared = ssr <= 1e-12 ? 1.0 : 0.0;
    return report;
}

} // namespace coldopt
