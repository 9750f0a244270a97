#include <doctest.h>

#include <cmath>

#include "frontlab/errors.hpp"
#include "frontlab/threshold.hpp"

using namespace frontlab;

namespace {

model::ModelSpec hr_model(double s) {
    return {model::ScalarLocal{model::NonlinearityFamily::hadeler_rothe(s)}};
}

threshold::ParameterFamily hr_family() {
    return {"s", [](double s) { return hr_model(s); }};
}

}  // namespace

TEST_SUITE("threshold") {

TEST_CASE("scalar verdicts at pinned parameters") {
    auto linear = threshold::selection_verdict(hr_model(1.0), threshold::Method::tw_bisection);
    CHECK(linear.verdict == threshold::Verdict::linear);
    CHECK(linear.linear_speed == doctest::Approx(2.0));

    auto nonlinear =
        threshold::selection_verdict(hr_model(3.0), threshold::Method::tw_bisection);
    CHECK(nonlinear.verdict == threshold::Verdict::nonlinear);
    CHECK(nonlinear.c_hat == doctest::Approx(2.041241452319315).epsilon(1e-3));
}

TEST_CASE("lv verdict under the LLW sufficient condition") {
    model::ModelSpec lv{model::LVSystem{model::LVParams(0.5, 0.5, 1.0, 1.0)}};
    auto rec = threshold::selection_verdict(lv, threshold::Method::tw_bisection);
    CHECK(rec.verdict == threshold::Verdict::linear);
    CHECK(rec.linear_speed == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("hadeler-rothe threshold bisects to s* = 2") {
    auto result = threshold::find_threshold(hr_family(), 1.0, 3.0, 1e-2,
                                            threshold::Method::tw_bisection);
    CHECK(result.p_star == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(result.p_hi - result.p_lo <= 1e-2);
    CHECK(result.log.size() >= 8);

    // Reproducibility: bit-identical rerun.
    auto again = threshold::find_threshold(hr_family(), 1.0, 3.0, 1e-2,
                                           threshold::Method::tw_bisection);
    CHECK(again.p_star == result.p_star);
    CHECK(again.p_lo == result.p_lo);

    // Log verdicts are monotone in the parameter.
    for (const auto& rec : result.log) {
        if (rec.parameter <= result.p_lo) {
            CHECK(rec.verdict == threshold::Verdict::linear);
        }
        if (rec.parameter >= result.p_hi) {
            CHECK(rec.verdict == threshold::Verdict::nonlinear);
        }
    }
}

TEST_CASE("degenerate bracket raises") {
    CHECK_THROWS_AS(threshold::find_threshold(hr_family(), 0.5, 1.5, 1e-2,
                                              threshold::Method::tw_bisection),
                    bracket_error);
}

TEST_CASE("sweep runs measurements in grid order and records failures") {
    threshold::SweepOptions options;
    options.workers = 2;
    options.verdict.run.grid = sim::Grid1D(0.0, 120.0, 1201);
    options.verdict.run.t_end = 40.0;
    options.verdict.run.comoving = false;

    // Empty measurement list: parameters only.
    auto bare = threshold::sweep(hr_family(), {1.0, 2.0}, {}, options);
    REQUIRE(bare.size() == 2);
    CHECK(bare[0].parameter == 1.0);
    CHECK(bare[1].parameter == 2.0);
    CHECK(bare[0].values.empty());

    // Speed measurements on a coarse but fast configuration.
    auto pts = threshold::sweep(hr_family(), {0.0, 1.0}, {"c_hat", "linear_speed"}, options);
    REQUIRE(pts.size() == 2);
    for (const auto& pt : pts) {
        REQUIRE_FALSE(pt.failed);
        CHECK(pt.values.at("linear_speed") == doctest::Approx(2.0));
        CHECK(pt.values.at("c_hat") == doctest::Approx(2.0).epsilon(0.08));
    }

    // Per-point failures are recorded without aborting the sweep.
    threshold::ParameterFamily lv_family{
        "a", [](double a) {
            return model::ModelSpec{model::LVSystem{model::LVParams(a, 2.0, 1.0, 1.0)}};
        }};
    auto mixed = threshold::sweep(lv_family, {0.5, 1.5}, {"linear_speed"}, options);
    REQUIRE(mixed.size() == 2);
    CHECK_FALSE(mixed[0].failed);
    CHECK(mixed[1].failed);  // a >= 1 has no LV linear speed
    CHECK_FALSE(mixed[1].error.empty());
}

}  // TEST_SUITE
