#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "coldopt/quality_data.hpp"
#include "coldopt/rng.hpp"
#include "test_support.hpp"

using namespace coldopt;

namespace {

GeneratorSpec baseline_generator(double noise = 2.0, std::uint64_t seed = 42) {
    GeneratorSpec g;
    g.true_model = test::baseline_model();
    g.noise_std = noise;
    g.temp_lower = -5.0;
    g.temp_upper = 5.0;
    g.hum_lower = 60.0;
    g.hum_upper = 90.0;
    g.seed = seed;
    return g;
}

bool identical(const QualityDataset& a, const QualityDataset& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (x.temperature != y.temperature || x.humidity != y.humidity ||
            x.packaging != y.packaging || x.environment != y.environment ||
            x.quality != y.quality)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("generation basics") {
    CHECK(generate_dataset(baseline_generator(), 0).rows.empty());

    const QualityDataset a = generate_dataset(baseline_generator(), 500);
    const QualityDataset b = generate_dataset(baseline_generator(), 500);
    CHECK(identical(a, b));

    // A longer run is a prefix-extension of a shorter one: streams are
    // counter-based per row.
    const QualityDataset c = generate_dataset(baseline_generator(), 200);
    for (std::size_t i = 0; i < c.rows.size(); ++i)
        CHECK(c.rows[i].quality == a.rows[i].quality);

    GeneratorSpec bad = baseline_generator();
    bad.noise_std = -1.0;
    CHECK_THROWS_AS(generate_dataset(bad, 10), std::domain_error);
    bad = baseline_generator();
    bad.temp_lower = bad.temp_upper;
    CHECK_THROWS_AS(generate_dataset(bad, 10), std::domain_error);
}

TEST_CASE("seeded sample mean of T sits near the range midpoint") {
    const QualityDataset d = generate_dataset(baseline_generator(), 10000);
    double mean_t = 0.0;
    for (const auto& r : d.rows) mean_t += r.temperature;
    mean_t /= double(d.rows.size());
    CHECK(std::abs(mean_t - 0.0) <= 0.15);

    for (const auto& r : d.rows) {
        CHECK(r.temperature >= -5.0);
        CHECK(r.temperature < 5.0);
        CHECK(r.humidity >= 60.0);
        CHECK(r.humidity < 90.0);
        CHECK(r.packaging >= 1);
        CHECK(r.packaging <= 3);
    }
}

TEST_CASE("noiseless generate-then-fit recovers the model exactly") {
    const RandomStream rng(2024, 17);
    for (int trial = 0; trial < 20; ++trial) {
        GeneratorSpec g = baseline_generator(0.0, 1000 + trial);
        g.true_model = {rng.uniform(5 * trial, -5.0, 5.0),
                        rng.uniform(5 * trial + 1, -2.0, 2.0),
                        rng.uniform(5 * trial + 2, -4.0, 4.0),
                        rng.uniform(5 * trial + 3, -4.0, 4.0),
                        rng.uniform(5 * trial + 4, -50.0, 150.0)};
        const FitReport fit = fit_ols(generate_dataset(g, 50));
        CHECK(fit.model.temp_coef == doctest::Approx(g.true_model.temp_coef).epsilon(1e-8));
        CHECK(fit.model.hum_coef == doctest::Approx(g.true_model.hum_coef).epsilon(1e-8));
        CHECK(fit.model.packaging_coef ==
              doctest::Approx(g.true_model.packaging_coef).epsilon(1e-8));
        CHECK(fit.model.environment_coef ==
              doctest::Approx(g.true_model.environment_coef).epsilon(1e-8));
        CHECK(fit.model.intercept == doctest::Approx(g.true_model.intercept).epsilon(1e-8));
        CHECK(fit.r_squared == doctest::Approx(1.0));
    }
}

TEST_CASE("seeded noisy fit lands inside the stated tolerance band") {
    const GeneratorSpec g = baseline_generator(2.0, 42);
    const FitReport fit = fit_ols(generate_dataset(g, 10000));
    CHECK(std::abs(fit.model.temp_coef - g.true_model.temp_coef) <= 0.05);
    CHECK(std::abs(fit.model.hum_coef - g.true_model.hum_coef) <= 0.05);
    CHECK(std::abs(fit.model.packaging_coef - g.true_model.packaging_coef) <= 0.05);
    CHECK(std::abs(fit.model.environment_coef - g.true_model.environment_coef) <= 0.05);
    CHECK(std::abs(fit.model.intercept - g.true_model.intercept) <= 1.5);
    CHECK(fit.residual_std == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("rank deficiency names the offending column") {
    QualityDataset d;
    const RandomStream rng(5, 21);
    for (int i = 0; i < 50; ++i) {
        QualityRow r;
        r.temperature = 3.0; // constant
        r.humidity = rng.uniform(3 * i, 60.0, 90.0);
        r.packaging = rng.level3(3 * i + 1);
        r.environment = rng.level3(3 * i + 2);
        r.quality = 10.0 + r.humidity;
        d.rows.push_back(r);
    }
    CHECK_THROWS_WITH_AS(fit_ols(d), doctest::Contains("'T'"), SingularFitError);

    // Collinear (but non-constant) pair
    QualityDataset d2;
    for (int i = 0; i < 50; ++i) {
        QualityRow r;
        r.temperature = rng.uniform(100 + 3 * i, -5.0, 5.0);
        r.humidity = rng.uniform(100 + 3 * i + 1, 60.0, 90.0);
        r.packaging = 1 + (i % 3);
        r.environment = r.packaging; // identical to packaging
        r.quality = r.temperature + r.humidity;
        d2.rows.push_back(r);
    }
    CHECK_THROWS_AS(fit_ols(d2), SingularFitError);
}

TEST_CASE("too few rows") {
    const QualityDataset d = generate_dataset(baseline_generator(), 4);
    CHECK_THROWS_AS(fit_ols(d), std::domain_error);
}

TEST_CASE("least-squares optimality and residual orthogonality") {
    const GeneratorSpec g = baseline_generator(2.0, 7);
    const QualityDataset d = generate_dataset(g, 2000);
    const FitReport fit = fit_ols(d);

    double ssr_fit = 0.0, ssr_true = 0.0, mean_res = 0.0;
    double dot[4] = {};
    for (const auto& r : d.rows) {
        const double res = r.quality - quality_score(fit.model, r.temperature, r.humidity,
                                                     r.packaging, r.environment);
        const double res_true = r.quality - quality_score(g.true_model, r.temperature,
                                                          r.humidity, r.packaging, r.environment);
        ssr_fit += res * res;
        ssr_true += res_true * res_true;
        mean_res += res;
        dot[0] += res * r.temperature;
        dot[1] += res * r.humidity;
        dot[2] += res * r.packaging;
        dot[3] += res * r.environment;
    }
    const double n = double(d.rows.size());
    CHECK(ssr_fit <= ssr_true + 1e-9);
    CHECK(std::abs(mean_res / n) <= 1e-9 * fit.residual_std * std::sqrt(n));
    for (double v : dot) CHECK(std::abs(v) <= 1e-6 * n * fit.residual_std);
}
