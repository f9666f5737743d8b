#include "contam/error.hpp"
#include "contam/models.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace contam;
using contam::testing::Rng;

namespace {

double normal_pdf(double y, double mu, double sigma) {
    const double z = (y - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected contam::Error");
    return ErrorCode::invalid_argument;
}

const auto g0 = DensityModel::gaussian(0.0, 1.0);
const auto g1 = DensityModel::gaussian(0.2, 2.0);
const auto e1 = DensityModel::exponential(1.0);
const auto e2 = DensityModel::exponential(2.0);

} // namespace

TEST_CASE("parameter validation") {
    CHECK(code_of([] { DensityModel::gaussian(0.0, 0.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { DensityModel::gaussian(NAN, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { DensityModel::exponential(-1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { ContaminationParams(0.5, 0.5); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { ContaminationParams(-0.1, 0.2); }) == ErrorCode::invalid_argument);
    CHECK_NOTHROW(ContaminationParams(0.0, 0.0));
    CHECK_NOTHROW(ContaminationParams(0.499, 0.5));
}

TEST_CASE("densities") {
    CHECK(g0.pdf(0.3) == doctest::Approx(normal_pdf(0.3, 0.0, 1.0)).epsilon(1e-14));
    CHECK(e2.pdf(0.0) == doctest::Approx(2.0));
    CHECK(e2.pdf(-0.1) == 0.0);
    CHECK(std::isinf(e2.log_pdf(-0.1)));
    CHECK(e1.support().lower == 0.0);
    CHECK(std::isinf(g0.support().lower));
    // far tail stays finite in the log domain
    CHECK(g0.log_pdf(100.0) == doctest::Approx(-5000.0 - 0.5 * std::log(2.0 * std::numbers::pi)));
}

TEST_CASE("contaminated mixtures") {
    const auto pair = contaminate(g0, g1, ContaminationParams(0.2, 0.3));
    for (double y : {-3.0, -0.5, 0.0, 0.7, 4.0}) {
        CHECK(pair.p0_tilde().pdf(y) ==
              doctest::Approx(0.8 * normal_pdf(y, 0, 1) + 0.2 * normal_pdf(y, 0.2, 2)).epsilon(1e-13));
        CHECK(pair.p1_tilde().pdf(y) ==
              doctest::Approx(0.7 * normal_pdf(y, 0.2, 2) + 0.3 * normal_pdf(y, 0, 1)).epsilon(1e-13));
    }
    const auto ep = contaminate(e1, e2, ContaminationParams(0.2, 0.3));
    CHECK(ep.p0_tilde().pdf(0.0) == doctest::Approx(1.2));
    CHECK(ep.p1_tilde().pdf(0.0) == doctest::Approx(1.7));
    CHECK(likelihood_ratio(ep, 0.0) == doctest::Approx(1.7 / 1.2).epsilon(1e-14));

    SUBCASE("zero contamination is the identity") {
        const auto p = contaminate(g0, g1, ContaminationParams(0.0, 0.0));
        for (double y = -5; y <= 5; y += 0.25) {
            CHECK(p.p0_tilde().pdf(y) == doctest::Approx(g0.pdf(y)).epsilon(1e-15));
            CHECK(p.p1_tilde().pdf(y) == doctest::Approx(g1.pdf(y)).epsilon(1e-15));
        }
    }
    SUBCASE("identical models give unit ratio") {
        const auto p = contaminate(g0, g0, ContaminationParams(0.1, 0.4));
        for (double y : {-2.0, 0.0, 3.0}) CHECK(likelihood_ratio(p, y) == doctest::Approx(1.0));
    }
}

TEST_CASE("mixing rules out incompatible models") {
    CHECK(code_of([] { contaminate(g0, e1, ContaminationParams(0.1, 0.1)); }) ==
          ErrorCode::incomparable_support);
    const auto t0 = DensityModel::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    const auto t1 = DensityModel::tabulated({0.0, 0.5, 2.0}, {0.0, 1.0, 0.0});
    CHECK(code_of([&] { contaminate(t0, t1, ContaminationParams(0.1, 0.1)); }) ==
          ErrorCode::incomparable_support);
    const auto ep = contaminate(e1, e2, ContaminationParams(0.2, 0.3));
    CHECK(code_of([&] { likelihood_ratio(ep, -1.0); }) == ErrorCode::unsupported_point);
}

TEST_CASE("tabulated densities") {
    const auto t = DensityModel::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    CHECK(t.pdf(0.5) == doctest::Approx(0.5));
    CHECK(t.pdf(1.5) == doctest::Approx(0.5));
    CHECK(t.pdf(2.5) == 0.0);
    CHECK(t.support().lower == 0.0);
    CHECK(t.support().upper == 2.0);
    // raw mass slightly off is renormalized
    const auto s = DensityModel::tabulated({0.0, 1.0, 2.0}, {0.0, 1.00005, 0.0});
    CHECK(s.pdf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(code_of([] { DensityModel::tabulated({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { DensityModel::tabulated({0.0, 0.0, 2.0}, {0.0, 1.0, 0.0}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { DensityModel::tabulated({0.0, 1.0, 2.0}, {0.0, -1.0, 2.0}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { DensityModel::tabulated({0.0, 1.0}, {1.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("reduced parameters") {
    const auto r = reduce_params(ContaminationParams(0.2, 0.3));
    CHECK(r.pi0_tilde == doctest::Approx(0.2 / 0.7).epsilon(1e-15));
    CHECK(r.pi1_tilde == doctest::Approx(0.3 / 0.8).epsilon(1e-15));
    const auto z = reduce_params(ContaminationParams(0.0, 0.0));
    CHECK(z.pi0_tilde == 0.0);
    CHECK(z.pi1_tilde == 0.0);

    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(0.0, 0.99);
        const double b = rng.uniform(0.0, 0.99 - a);
        const auto back = expand_params(reduce_params(ContaminationParams(a, b)));
        CHECK(back.pi0() == doctest::Approx(a).epsilon(1e-12));
        CHECK(std::abs(back.pi1() - b) < 1e-12);
    }
}

TEST_CASE("density sums follow the contamination weights") {
    Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        const double a = rng.uniform(0.0, 0.6);
        const double b = rng.uniform(0.0, 0.39);
        const auto pair = contaminate(g0, g1, ContaminationParams(a, b));
        for (double y = -6; y <= 6; y += 0.5) {
            CHECK(pair.p0_tilde().pdf(y) + pair.p1_tilde().pdf(y) ==
                  doctest::Approx((1 - a + b) * g0.pdf(y) + (1 + a - b) * g1.pdf(y)).epsilon(1e-13));
        }
    }
}

TEST_CASE("near-total contamination collapses the pair") {
    const auto pair = contaminate(g0, g1, ContaminationParams(0.5, 0.499));
    for (double y = -6; y <= 6; y += 0.1) {
        const double gap = std::abs(pair.p0_tilde().pdf(y) - pair.p1_tilde().pdf(y));
        CHECK(gap <= 0.001 * std::abs(g0.pdf(y) - g1.pdf(y)) + 1e-15);
    }
}

TEST_CASE("contaminated ratio is a monotone image of the pure ratio") {
    const ContaminationParams pi(0.2, 0.3);
    const auto pair = contaminate(g0, g1, pi);
    double prev = -1.0;
    for (double l = 1e-3; l < 1e3; l *= 1.3) {
        const double lt = contaminated_ratio_from_pure(l, pi);
        CHECK(lt > prev);
        prev = lt;
        CHECK(pure_threshold(lt, pi) == doctest::Approx(l).epsilon(1e-11));
    }
    CHECK(contaminated_ratio_from_pure(INFINITY, pi) == doctest::Approx(0.7 / 0.2));
    CHECK(contaminated_ratio_from_pure(0.0, pi) == doctest::Approx(0.3 / 0.8));
    for (double y = -5; y <= 5; y += 0.37) {
        const double l = g1.pdf(y) / g0.pdf(y);
        CHECK(likelihood_ratio(pair, y) == doctest::Approx(contaminated_ratio_from_pure(l, pi)).epsilon(1e-12));
    }
    CHECK(std::isinf(pure_threshold(3.5, pi)));
}
