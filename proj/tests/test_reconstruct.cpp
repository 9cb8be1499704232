#include "phqs/reconstruct.hpp"

#include "phqs/oracle.hpp"
#include "phqs/rng.hpp"
#include "phqs/states.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace phqs;
using namespace phqs::reconstruct;
namespace tu = phqs::testutil;

namespace {

stats::CumulantSet even_cumulants(double c2, double c4, double c6) {
    stats::CumulantSet cs;
    cs.count = 1;
    cs.c = {0.0, c2, 0.0, c4, 0.0, c6};
    return cs;
}

} // namespace

TEST_CASE("photon moments from quadrature cumulants") {
    const PhotonMoments vac = photon_moments(even_cumulants(0.5, 0.0, 0.0));
    CHECK(vac.n == 0.0);
    CHECK(vac.dn2 == 0.0);
    CHECK(vac.dn3 == 0.0);

    // coherent state with one mean photon
    const PhotonMoments coh = photon_moments(even_cumulants(1.5, -1.5, 10.0));
    CHECK(coh.n == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(coh.dn2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(coh.dn3 == doctest::Approx(1.0).epsilon(1e-14));

    // Gaussian quadratures (thermal statistics): targets from the exact
    // Bose-Einstein number distribution
    states::StateConfig th;
    th.kind = states::StateKind::Thermal;
    th.nbar = 2.0;
    const auto direct = oracle::central_number_moments(oracle::number_distribution(th, 512));
    CHECK(direct.n == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(direct.dn2 == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(direct.dn3 == doctest::Approx(30.0).epsilon(1e-12));
    const PhotonMoments pm = photon_moments(even_cumulants(2.5, 0.0, 0.0));
    CHECK(pm.n == doctest::Approx(direct.n).epsilon(1e-12));
    CHECK(pm.dn2 == doctest::Approx(direct.dn2).epsilon(1e-12));
    CHECK(pm.dn3 == doctest::Approx(direct.dn3).epsilon(1e-12));
}

TEST_CASE("semiclassical intensity model") {
    const PhotonMoments poisson = semiclassical_moments({0.5, 0.0, 0.0});
    CHECK(poisson.n == 0.5);
    CHECK(poisson.dn2 == 0.5);
    CHECK(poisson.dn3 == 0.5);

    const PhotonMoments square = semiclassical_moments({1.0, 1.0, 0.0});
    CHECK(square.n == 1.0);
    CHECK(square.dn2 == 2.0);
    CHECK(square.dn3 == 4.0);

    const PhotonMoments tri = semiclassical_moments({1.0, 1.0 / 3.0, 0.0});
    CHECK(tri.dn2 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(tri.dn3 == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(semiclassical_moments({-1.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(semiclassical_moments({1.0, 0.5, -2.0}), std::invalid_argument);
}

TEST_CASE("semiclassical model agrees with the cumulant route") {
    // exact CV cumulants of the narrow-band model, pushed through the
    // quadrature-cumulant reconstruction, must land on the direct formulas
    SampleRng rng(1234, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const double i = 2.0 * rng.next_unit();
        const double di2 = rng.next_unit() * i * i;
        const double lo = -3.0 * i * di2;
        const double di3 = lo + rng.next_unit() * (i * i * i + 3.0 * i * di2);
        const auto [m2, m4, m6] = oracle::semiclassical_quadrature_moments(i, di2, di3);

        stats::CentralMoments cm;
        cm.count = 1;
        cm.m2 = m2;
        cm.m4 = m4;
        cm.m6 = m6;
        const PhotonMoments via_cumulants = photon_moments(stats::cumulants(cm));
        const PhotonMoments direct = semiclassical_moments({i, di2, di3});
        CHECK(via_cumulants.n == doctest::Approx(direct.n).epsilon(1e-10));
        CHECK(via_cumulants.dn2 == doctest::Approx(direct.dn2).epsilon(1e-10));
        CHECK(via_cumulants.dn3 == doctest::Approx(direct.dn3).epsilon(1e-10));
    }
}

TEST_CASE("attenuation scales centered intensity moments") {
    const IntensityMoments im{1.0, 1.0, 0.0};
    const IntensityMoments id = attenuate(im, 1.0);
    CHECK(id.i == 1.0);
    CHECK(id.di2 == 1.0);

    const IntensityMoments off = attenuate(im, 0.0);
    CHECK(off.i == 0.0);
    CHECK(off.di2 == 0.0);
    CHECK(off.di3 == 0.0);

    const IntensityMoments weak = attenuate(im, 0.1);
    CHECK(weak.i == doctest::Approx(0.1));
    CHECK(weak.di2 == doctest::Approx(0.01));
    const PhotonMoments pm = semiclassical_moments(weak);
    CHECK(pm.dn2 / pm.n == doctest::Approx(1.1));  // Fano drifts to 1 as eta -> 0

    CHECK_THROWS_AS(attenuate(im, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(attenuate(im, -0.1), std::invalid_argument);
}

TEST_CASE("attenuation composes multiplicatively") {
    SampleRng rng(777, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const double i = 3.0 * rng.next_unit();
        const IntensityMoments im{i, rng.next_unit() * i, 0.2 * rng.next_unit()};
        const double a = rng.next_unit(), b = rng.next_unit();
        const IntensityMoments two_step = attenuate(attenuate(im, a), b);
        const IntensityMoments one_step = attenuate(im, a * b);
        CHECK(two_step.i == doctest::Approx(one_step.i).epsilon(1e-15));
        CHECK(two_step.di2 == doctest::Approx(one_step.di2).epsilon(1e-15));
        CHECK(two_step.di3 == doctest::Approx(one_step.di3).epsilon(1e-15));
    }
}

TEST_CASE("error propagation partial derivatives") {
    stats::CumulantSet cs = even_cumulants(0.5, 0.0, 0.0);
    cs.se = std::array<double, 6>{0, 0, 0, 0, 0, 0};
    const PhotonMoments zero = propagate_errors(cs);
    REQUIRE(zero.se.has_value());
    for (double s : *zero.se) CHECK(s == 0.0);

    const double sigma = 1e-3;
    cs.se = std::array<double, 6>{0, sigma, 0, 0, 0, 0};
    const PhotonMoments vac = propagate_errors(cs);
    CHECK((*vac.se)[0] == doctest::Approx(sigma));
    CHECK((*vac.se)[1] == doctest::Approx(sigma));  // 2*c2 = 1 at the vacuum

    cs.se.reset();
    CHECK_THROWS_AS(propagate_errors(cs), std::invalid_argument);
}

TEST_CASE("propagated errors match a seed ensemble within a factor two") {
    const int seeds = 200;
    const std::uint64_t n = 100'000;
    std::vector<double> dn2s;
    double typical_se = 0.0;
    for (int s = 0; s < seeds; ++s) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::Coherent;
        cfg.alpha2 = 0.5;
        cfg.seed = 9000 + s;
        const auto cs = tu::sampled_cumulants(cfg, n, 20);
        const PhotonMoments pm = photon_moments(cs);
        dn2s.push_back(pm.dn2);
        typical_se += (*pm.se)[1];
    }
    typical_se /= seeds;
    double mean = 0.0;
    for (double v : dn2s) mean += v;
    mean /= seeds;
    double var = 0.0;
    for (double v : dn2s) var += (v - mean) * (v - mean);
    const double spread = std::sqrt(var / (seeds - 1));
    CHECK(spread < 2.0 * typical_se);
    CHECK(spread > typical_se / 2.0);
}

TEST_CASE("negative estimates are preserved, not clipped") {
    const PhotonMoments pm = photon_moments(even_cumulants(0.45, -0.01, 0.0));
    CHECK(pm.n < 0.0);
    CHECK(pm.n == doctest::Approx(-0.05));
}
