#include <doctest.h>

#include <cmath>

#include "frontlab/dispersion.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/waves.hpp"

using namespace frontlab;

namespace {

/// Synthetic profile with a prescribed plus-infinity gap law.
waves::WaveProfile synthetic_scalar(const std::function<double(double)>& gap, double xi_min,
                                    double xi_max, double h) {
    waves::WaveProfile prof;
    prof.left_limit = {1.0};
    prof.right_limit = {0.0};
    prof.comps.resize(1);
    for (double xi = xi_min; xi <= xi_max + 1e-12; xi += h) {
        prof.xi.push_back(xi);
        prof.comps[0].push_back(gap(xi));
    }
    return prof;
}

}  // namespace

TEST_SUITE("waves") {

TEST_CASE("shooting classifies super- and subcritical speeds") {
    auto kpp = model::NonlinearityFamily::fisher_kpp();
    CHECK(waves::scalar_wave_shoot(kpp, 2.5).outcome == waves::ShootOutcome::connected);
    CHECK(waves::scalar_wave_shoot(kpp, 1.5).outcome != waves::ShootOutcome::connected);

    auto hr8 = model::NonlinearityFamily::hadeler_rothe(8.0);
    CHECK(waves::scalar_wave_shoot(hr8, 2.4).outcome != waves::ShootOutcome::connected);
    CHECK(waves::scalar_wave_shoot(hr8, 2.6).outcome == waves::ShootOutcome::connected);
}

TEST_CASE("connected profile is monotone with small defect") {
    auto kpp = model::NonlinearityFamily::fisher_kpp();
    auto result = waves::scalar_wave_shoot(kpp, 2.5);
    REQUIRE(result.outcome == waves::ShootOutcome::connected);
    const auto& prof = result.profile;
    CHECK(prof.monotone);
    CHECK(prof.residual_sup < 1e-6);
    // Anchor W(0) = 1/2.
    for (size_t i = 0; i + 1 < prof.xi.size(); ++i) {
        if (prof.xi[i] <= 0.0 && prof.xi[i + 1] > 0.0) {
            CHECK(prof.comps[0][i] == doctest::Approx(0.5).epsilon(5e-3));
        }
    }
}

TEST_CASE("minimal speeds match the closed form") {
    auto kpp = model::NonlinearityFamily::fisher_kpp();
    CHECK(waves::scalar_min_speed(kpp, 1e-4) == doctest::Approx(2.0).epsilon(5e-4));

    auto hr1 = model::NonlinearityFamily::hadeler_rothe(1.0);
    CHECK(waves::scalar_min_speed(hr1, 1e-4) == doctest::Approx(2.0).epsilon(5e-4));

    auto hr3 = model::NonlinearityFamily::hadeler_rothe(3.0);
    CHECK(waves::scalar_min_speed(hr3, 1e-4) ==
          doctest::Approx(2.041241452319315).epsilon(5e-4));
}

TEST_CASE("monotone existence predicate in c") {
    auto hr3 = model::NonlinearityFamily::hadeler_rothe(3.0);
    bool exists_prev = false;
    for (double c = 1.8; c < 2.6; c += 0.1) {
        const bool exists = waves::scalar_wave_exists(hr3, c);
        if (exists_prev) CHECK(exists);  // once a wave exists it persists at c+0.1
        exists_prev = exists;
    }
    CHECK(exists_prev);
}

TEST_CASE("tail fit recovers synthetic laws") {
    // Pulled: g = xi e^{-xi}.
    auto pulled = synthetic_scalar([](double xi) { return xi * std::exp(-xi); }, 2.0, 40.0, 0.02);
    auto fit1 = waves::fit_tail(pulled, 0, waves::TailSide::plus_inf, {1.0, {}});
    CHECK(std::abs(fit1.lambda_hat - 1.0) / 1.0 < 1e-3);
    CHECK(fit1.p_hat == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(fit1.cls == waves::TailClass::pulled);

    // Pushed: g = e^{-2 xi} with the double rate at 1.
    auto pushed = synthetic_scalar([](double xi) { return std::exp(-2.0 * xi); }, 1.0, 20.0, 0.01);
    auto fit2 = waves::fit_tail(pushed, 0, waves::TailSide::plus_inf, {1.0, 2.0});
    CHECK(std::abs(fit2.lambda_hat - 2.0) / 2.0 < 1e-3);
    CHECK(fit2.cls == waves::TailClass::pushed);

    // Transition: g = e^{-xi}.
    auto trans = synthetic_scalar([](double xi) { return std::exp(-xi); }, 2.0, 25.0, 0.01);
    auto fit3 = waves::fit_tail(trans, 0, waves::TailSide::plus_inf, {1.0, {}});
    CHECK(std::abs(fit3.lambda_hat - 1.0) < 1e-3);
    CHECK(fit3.p_hat < 0.4);
    CHECK(fit3.cls == waves::TailClass::transition);

    // Algebraic: g = 1/|xi| on a log-spaced minus-side grid.
    waves::WaveProfile alg;
    alg.left_limit = {0.0};
    alg.right_limit = {1.0};
    alg.comps.resize(1);
    for (int k = 0; k < 400; ++k) {
        const double z = std::exp(std::log(1e2) + k * (std::log(1e9) - std::log(1e2)) / 399.0);
        alg.xi.push_back(-z);
        alg.comps[0].push_back(1.0 / z);
    }
    std::reverse(alg.xi.begin(), alg.xi.end());
    std::reverse(alg.comps[0].begin(), alg.comps[0].end());
    auto fit4 = waves::fit_tail(alg, 0, waves::TailSide::minus_inf, {1.0, {}});
    CHECK(fit4.cls == waves::TailClass::algebraic);
    CHECK(std::abs(fit4.loglog_slope + 1.0) < 0.05);
}

TEST_CASE("pushed minimal wave decays at the fast rate") {
    // c*(8) = 2.5 exactly; the wave launched at that speed carries the
    // lambda_s^+ = 2 tail.
    auto hr8 = model::NonlinearityFamily::hadeler_rothe(8.0);
    auto result = waves::scalar_wave_shoot(hr8, 2.5);
    REQUIRE(result.outcome == waves::ShootOutcome::connected);
    const double fast = dispersion::scalar_fast_rate(2.5);
    CHECK(fast == doctest::Approx(2.0).epsilon(1e-12));
    auto fit = waves::fit_tail(result.profile, 0, waves::TailSide::plus_inf,
                               {1.0, fast});
    CHECK(fit.cls == waves::TailClass::pushed);
    CHECK(std::abs(fit.lambda_hat - fast) / fast < 0.05);
}

TEST_CASE("pulled minimal wave at the linear speed has p = 1") {
    auto hr1 = model::NonlinearityFamily::hadeler_rothe(1.0);
    auto result = waves::scalar_wave_shoot(hr1, 2.0);
    REQUIRE(result.outcome == waves::ShootOutcome::connected);
    auto fit = waves::fit_tail(result.profile, 0, waves::TailSide::plus_inf, {1.0, {}});
    CHECK(fit.cls == waves::TailClass::pulled);
    CHECK(std::abs(fit.lambda_hat - 1.0) < 0.05);
    CHECK(fit.p_hat > 0.5);
}

TEST_CASE("lv bvp: b=0 limit decouples to the scalar equation") {
    // At b=0, V == 1 and U solves U'' + cU' + U(1-a-U) = 0, a scaled KPP
    // front with minimal speed 2 sqrt(1-a).
    const double a = 0.5;
    model::LVParams p(a, 1e-12, 1.0, 1.0);
    sim::Grid1D grid(-60.0, 240.0, 6001);
    auto prof = waves::lv_wave_minimal(p, grid);
    CHECK(prof.residual_sup < 1e-6);
    CHECK(prof.monotone);
    CHECK(prof.c == doctest::Approx(2.0 * std::sqrt(1.0 - a)).epsilon(2e-3));
    for (double v : prof.comps[1]) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

    // Cross-solver oracle: the U-component satisfies the decoupled scalar
    // equation at the selected speed.
    const double h = grid.h();
    double sup = 0.0;
    for (int i = 1; i < grid.n - 1; ++i) {
        const auto& U = prof.comps[0];
        const double res = (U[i - 1] - 2.0 * U[i] + U[i + 1]) / (h * h) +
                           prof.c * (U[i + 1] - U[i - 1]) / (2.0 * h) +
                           U[i] * (1.0 - a - U[i]);
        sup = std::max(sup, std::abs(res));
    }
    CHECK(sup < 1e-6);
}

TEST_CASE("lv bvp translation invariance") {
    model::LVParams p(0.5, 0.4, 1.0, 1.0);
    const double c = 2.0 * std::sqrt(1.0 - p.a);
    sim::Grid1D grid(-80.0, 245.0, 6501);
    auto p1 = waves::lv_wave_bvp(p, c, grid);

    // A guess translated by 12 cells must converge to the same anchored
    // profile: the phase condition removes the translation freedom.
    waves::WaveProfile guess = p1;
    for (int i = 0; i < grid.n; ++i) {
        const int j = std::min(grid.n - 1, i + 12);
        guess.comps[0][i] = p1.comps[0][j];
        guess.comps[1][i] = p1.comps[1][j];
    }
    auto p2 = waves::lv_wave_bvp(p, c, grid, &guess);
    CHECK(std::abs(p1.c - p2.c) < 5e-6);
    double sup = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        sup = std::max(sup, std::abs(p1.comps[0][i] - p2.comps[0][i]));
        sup = std::max(sup, std::abs(p1.comps[1][i] - p2.comps[1][i]));
    }
    CHECK(sup < 1e-6);

    // Shifting the whole domain by 5 cells re-selects the finite-interval
    // speed only at the boundary-effect scale.
    sim::Grid1D g2(-80.25, 244.75, 6501);
    auto p3 = waves::lv_wave_bvp(p, c, g2);
    CHECK(p3.c == doctest::Approx(p1.c).epsilon(1e-5));
    double sup2 = 0.0;
    for (int i = 10; i < grid.n - 15; ++i) {
        sup2 = std::max(sup2, std::abs(p1.comps[0][i] - p3.comps[0][i + 5]));
    }
    CHECK(sup2 < 5e-5);
}

TEST_CASE("lv bvp monotone profile at the linear speed") {
    model::LVParams p(0.5, 0.3, 1.0, 1.0);
    const double c = 2.0 * std::sqrt(0.5);
    auto grid = waves::recommended_lv_grid(p, c);
    auto prof = waves::lv_wave_bvp(p, c, grid);
    CHECK(prof.monotone);
    CHECK(prof.residual_sup < 1e-6);
    const auto [us, vs] = p.equilibrium();
    CHECK(prof.comps[0].front() == doctest::Approx(us).epsilon(1e-10));
    CHECK(prof.comps[1].front() == doctest::Approx(vs).epsilon(1e-10));
    CHECK(prof.comps[0].back() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(prof.comps[1].back() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pushed integral basics") {
    model::LVParams p(0.5, 0.3, 1.0, 1.0);
    const double c = 2.0 * std::sqrt(0.5);

    // Degenerate input U == 0 gives I = 0.
    waves::WaveProfile zero;
    zero.c = c;
    zero.left_limit = {0.0, 1.0};
    zero.right_limit = {0.0, 1.0};
    zero.comps.resize(2);
    for (double xi = -40.0; xi <= 40.0; xi += 0.1) {
        zero.xi.push_back(xi);
        zero.comps[0].push_back(0.0);
        zero.comps[1].push_back(1.0);
    }
    auto crit0 = waves::pushed_integral(zero, p);
    CHECK(crit0.integral == 0.0);
    CHECK(crit0.lambda_u == doctest::Approx(std::sqrt(0.5)));

    // Contract: profile must be at the linear speed.
    zero.c = 1.6;
    CHECK_THROWS_AS(waves::pushed_integral(zero, p), contract_error);

    // Sign and nonzero verdict are translation invariant.
    auto grid = waves::recommended_lv_grid(p, c);
    auto prof = waves::lv_wave_bvp(p, c, grid);
    auto crit = waves::pushed_integral(prof, p);
    waves::WaveProfile shifted = prof;
    for (auto& xi : shifted.xi) xi += 3.0;
    auto crit_shift = waves::pushed_integral(shifted, p);
    CHECK((crit.integral > 0) == (crit_shift.integral > 0));
    CHECK((std::abs(crit.integral) > crit.error_bound) ==
          (std::abs(crit_shift.integral) > crit_shift.error_bound));
    // e^{lambda shift} scaling of both integral and bound.
    const double scale = std::exp(crit.lambda_u * 3.0);
    CHECK(crit_shift.integral == doctest::Approx(crit.integral * scale).epsilon(1e-9));
}

TEST_CASE("nonlocal wave extraction settles and satisfies the equation") {
    auto fam = model::NonlinearityFamily::fisher_kpp();
    auto kernel = model::KernelSpec::uniform(1.0, 0.05);
    auto nl = dispersion::nonlocal_linear_speed(
        model::KernelSpec::uniform(1.0, 1.0 / 512.0), 1.0);
    const double c = 1.05 * nl.c0_star();
    waves::ExtractOptions options;
    options.h = 0.05;
    options.xi_min = -100.0;
    options.xi_max = 70.0;
    auto prof = waves::nonlocal_wave_extract(fam, kernel, c, options);
    CHECK(prof.residual_sup < 1e-5);
    CHECK(prof.monotone);
    CHECK(prof.comps[0].front() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(prof.comps[0].back() == doctest::Approx(0.0).epsilon(1e-4));
}

}  // TEST_SUITE
