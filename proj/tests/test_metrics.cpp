#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dvs/errors.hpp"
#include "dvs/metrics.hpp"
#include "dvs/rng.hpp"

using namespace dvs;

TEST_CASE("perfect forecast gives all-zero metrics") {
    MetricReport r = evaluate_metrics({4, 7}, {4, 7});
    CHECK(r.mad == 0.0);
    CHECK(r.mape == 0.0);
    CHECK(r.smape == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.nrmse == 0.0);
    CHECK(r.flags().empty());
}

TEST_CASE("hand-evaluated report") {
    MetricReport r = evaluate_metrics({2, 3}, {1, 3});
    CHECK(r.mad == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.mape == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.smape == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.rmse == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r.nrmse == doctest::Approx(std::sqrt(0.5) / 2.0).epsilon(1e-12));
}

TEST_CASE("zero-range actuals flag NRMSE but keep the rest") {
    MetricReport r = evaluate_metrics({4, 6}, {5, 5});
    CHECK_FALSE(r.nrmse_defined);
    CHECK(r.mad == 1.0);
    CHECK(r.rmse == 1.0);
    auto flags = r.flags();
    CHECK(std::find(flags.begin(), flags.end(), "nrmse_undefined_zero_range") != flags.end());
}

TEST_CASE("zero actual flags MAPE") {
    MetricReport r = evaluate_metrics({1, 2}, {0, 2});
    CHECK_FALSE(r.mape_defined);
    CHECK(r.smape_defined);
}

TEST_CASE("cancelling denominator flags SMAPE, negative denominator is reported") {
    MetricReport r = evaluate_metrics({1, 2}, {-1, 2});
    CHECK_FALSE(r.smape_defined);

    MetricReport neg = evaluate_metrics({1, 2}, {-3, 2});
    CHECK(neg.smape_defined);
    CHECK(neg.negative_denominator);
}

TEST_CASE("strict smape mode uses absolute denominators") {
    MetricReport strict = evaluate_metrics({1, 2}, {-3, 2}, SmapeMode::Absolute);
    CHECK_FALSE(strict.negative_denominator);
    // |1-(-3)|/(1+3) = 1, second term 0, times 2/N
    CHECK(strict.smape == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("length mismatch and empty input throw") {
    CHECK_THROWS_AS(evaluate_metrics({1, 2}, {1}), LengthMismatchError);
    CHECK_THROWS_AS(evaluate_metrics({}, {}), LengthMismatchError);
}

TEST_CASE("joint permutation leaves every metric unchanged") {
    Rng rng(17);
    std::vector<double> p(40), a(40);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform(1, 10);
        a[i] = rng.uniform(1, 10);
    }
    MetricReport before = evaluate_metrics(p, a);
    for (std::size_t i = p.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(p[i - 1], p[j]);
        std::swap(a[i - 1], a[j]);
    }
    MetricReport after = evaluate_metrics(p, a);
    CHECK(after.mad == doctest::Approx(before.mad).epsilon(1e-12));
    CHECK(after.mape == doctest::Approx(before.mape).epsilon(1e-12));
    CHECK(after.smape == doctest::Approx(before.smape).epsilon(1e-12));
    CHECK(after.rmse == doctest::Approx(before.rmse).epsilon(1e-12));
    CHECK(after.nrmse == doctest::Approx(before.nrmse).epsilon(1e-12));
}

TEST_CASE("positive scaling moves MAD and RMSE, fixes the relative metrics") {
    Rng rng(23);
    std::vector<double> p(25), a(25), ps(25), as(25);
    const double alpha = 3.25;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform(1, 10);
        a[i] = rng.uniform(1, 10);
        ps[i] = alpha * p[i];
        as[i] = alpha * a[i];
    }
    MetricReport base = evaluate_metrics(p, a);
    MetricReport scaled = evaluate_metrics(ps, as);
    CHECK(scaled.mad == doctest::Approx(alpha * base.mad).epsilon(1e-12));
    CHECK(scaled.rmse == doctest::Approx(alpha * base.rmse).epsilon(1e-12));
    CHECK(scaled.mape == doctest::Approx(base.mape).epsilon(1e-12));
    CHECK(scaled.smape == doctest::Approx(base.smape).epsilon(1e-12));
    CHECK(scaled.nrmse == doctest::Approx(base.nrmse).epsilon(1e-12));
}

TEST_CASE("RMSE dominates MAD") {
    Rng rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> p(1 + rng.below(30)), a(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = rng.uniform(-100, 100);
            a[i] = rng.uniform(1, 100);
        }
        MetricReport r = evaluate_metrics(p, a);
        CHECK(r.rmse >= r.mad - 1e-12);
    }
}

TEST_CASE("report json carries flags") {
    std::string j = metrics_to_json(evaluate_metrics({4, 6}, {5, 5}));
    CHECK(j.find("nrmse_undefined_zero_range") != std::string::npos);
    CHECK(j.find("\"nrmse\": null") != std::string::npos);
}
