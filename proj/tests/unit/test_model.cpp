#include <doctest.h>

#include <cmath>
#include <random>

#include "frontlab/errors.hpp"
#include "frontlab/model.hpp"

using namespace frontlab;

TEST_SUITE("model") {

TEST_CASE("reaction values at pinned points") {
    auto kpp = model::NonlinearityFamily::fisher_kpp();
    CHECK(model::eval_reaction(kpp, 0.5) == doctest::Approx(0.25).epsilon(1e-15));

    auto hr2 = model::NonlinearityFamily::hadeler_rothe(2.0);
    CHECK(model::eval_reaction(hr2, 1.0) == 0.0);

    auto hr3 = model::NonlinearityFamily::hadeler_rothe(3.0);
    CHECK(model::eval_reaction(hr3, 0.5) == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("monostable invariants for built-in families") {
    for (double s : {0.0, 0.5, 1.0, 2.0, 3.0, 8.0}) {
        auto fam = model::NonlinearityFamily::hadeler_rothe(s);
        CHECK(fam.f(0.0) == 0.0);
        CHECK(fam.f(1.0) == 0.0);
        CHECK(fam.fp0() > 0.0);
        CHECK(fam.fp0() == doctest::Approx(1.0));  // f'(0;s) = 1 for this family
        CHECK(fam.fp1() < 0.0);
        for (double w = 1e-3; w < 1.0; w += 1e-3) {
            CHECK(fam.f(w) > 0.0);
        }
    }
}

TEST_CASE("family monotone in s on sampled interior points") {
    auto lo = model::NonlinearityFamily::hadeler_rothe(0.7);
    auto hi = model::NonlinearityFamily::hadeler_rothe(1.9);
    for (double w = 1e-3; w < 1.0; w += 1e-3) {
        CHECK(hi.f(w) > lo.f(w));
    }
}

TEST_CASE("kpp condition holds iff s <= 1") {
    CHECK(model::NonlinearityFamily::hadeler_rothe(0.0).kpp_condition());
    CHECK(model::NonlinearityFamily::hadeler_rothe(1.0).kpp_condition());
    CHECK_FALSE(model::NonlinearityFamily::hadeler_rothe(1.01).kpp_condition());
    CHECK_FALSE(model::NonlinearityFamily::hadeler_rothe(3.0).kpp_condition());
}

TEST_CASE("custom cubic validates invariants") {
    // w + 0.5 w^2 - 1.5 w^3 = w(1-w)(1+1.5w): valid.
    auto fam = model::NonlinearityFamily::custom_cubic({1.0, 0.5, -1.5});
    CHECK(fam.fp0() == doctest::Approx(1.0));
    // f(1) != 0:
    CHECK_THROWS_AS(model::NonlinearityFamily::custom_cubic({1.0, 1.0, 1.0}), contract_error);
    // f'(0) < 0:
    CHECK_THROWS_AS(model::NonlinearityFamily::custom_cubic({-1.0, 0.5, 0.5}), contract_error);
}

TEST_CASE("lv reaction equilibria") {
    model::LVParams p(0.5, 0.5, 1.0, 1.0);
    auto z1 = model::lv_reaction(p, 1.0, 0.0);
    CHECK(z1.first == 0.0);
    CHECK(z1.second == 0.0);
    auto z2 = model::lv_reaction(p, 0.0, 1.0);
    CHECK(z2.first == 0.0);
    CHECK(z2.second == 0.0);
    auto z3 = model::lv_reaction(p, 2.0 / 3.0, 2.0 / 3.0);
    CHECK(z3.first == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(z3.second == doctest::Approx(0.0).epsilon(1e-15));

    auto [us, vs] = p.equilibrium();
    CHECK(us == doctest::Approx(2.0 / 3.0));
    CHECK(vs == doctest::Approx(2.0 / 3.0));
    CHECK(model::LVParams(0.5, 2.0, 1.0, 1.0).equilibrium() == std::pair{1.0, 0.0});

    CHECK_THROWS_AS(model::LVParams(0.5, -1.0, 1.0, 1.0), contract_error);
}

TEST_CASE("kernel mass, symmetry and moment") {
    auto k = model::KernelSpec::uniform(1.0, 0.1);
    CHECK(std::abs(k.mass() - 1.0) < 1e-12);
    CHECK(model::kernel_moment(k, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    // Closed form (e^l - e^-l)/(2l) = sinh(1) at l = 1; trapezoid at h=0.1
    // carries an O(h^2 l^2) quadrature error.
    CHECK(model::kernel_moment(k, 1.0) ==
          doctest::Approx(1.1752011936438014).epsilon(5e-4));
    auto kf = model::KernelSpec::uniform(1.0, 1.0 / 512.0);
    CHECK(model::kernel_moment(kf, 1.0) ==
          doctest::Approx(1.1752011936438014).epsilon(1e-6));

    // Symmetry in lambda.
    auto kp = model::KernelSpec::parabolic_bump(2.0, 0.1);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double l = dist(rng);
        CHECK(model::kernel_moment(kp, l) ==
              doctest::Approx(model::kernel_moment(kp, -l)).epsilon(1e-12));
    }
}

TEST_CASE("kernel moment nondecreasing and >= 1 for lambda >= 0") {
    auto k = model::KernelSpec::parabolic_bump(1.5, 0.05);
    double prev = model::kernel_moment(k, 0.0);
    CHECK(prev >= 1.0 - 1e-12);
    for (double l = 0.1; l <= 5.0; l += 0.1) {
        const double cur = model::kernel_moment(k, l);
        CHECK(cur >= prev - 1e-12);
        CHECK(cur >= 1.0 - 1e-12);
        prev = cur;
    }
}

TEST_CASE("kernel rejects asymmetric or misaligned input") {
    CHECK_THROWS_AS(model::KernelSpec::custom(1.0, 0.3, std::vector<double>(7, 1.0)),
                    contract_error);
    std::vector<double> bad = {0.1, 0.2, 0.5, 0.2, 0.3};
    CHECK_THROWS_AS(model::KernelSpec::custom(0.2, 0.1, bad), contract_error);
}

}  // TEST_SUITE
