#include <cmath>
#include <numeric>

#include <doctest.h>

#include "helpers.hpp"
#include "qbm/fraction.hpp"
#include "qbm/markers.hpp"

using namespace qbm;
using namespace qbm::fraction;
using qbm_tests::pi;

TEST_CASE("reduce_ratio: parity classes") {
    const auto f57 = reduce_ratio(5, 7);
    CHECK(f57.num == 5);
    CHECK(f57.den == 7);
    CHECK(f57.parity == ParityClass::odd_odd);

    const auto f46 = reduce_ratio(4, 6);
    CHECK(f46.num == 2);
    CHECK(f46.den == 3);
    CHECK(f46.parity == ParityClass::even_class);

    const auto f11 = reduce_ratio(1, 1);
    CHECK(f11.num == 1);
    CHECK(f11.den == 1);
    CHECK(f11.parity == ParityClass::odd_odd);

    CHECK_THROWS_AS(reduce_ratio(0, 3), Error);
    CHECK_THROWS_AS(reduce_ratio(3, -1), Error);
}

TEST_CASE("rationalize: exact, absent, and loose-tolerance cases") {
    const auto exact = rationalize(5.0 / 7.0, 10, 1e-9);
    REQUIRE(exact.has_value());
    CHECK(exact->num == 5);
    CHECK(exact->den == 7);

    const double irr = std::sqrt(26.0) / std::sqrt(50.0);
    CHECK(!rationalize(irr, 10, 1e-6).has_value());

    const auto close = rationalize(irr, 10, 0.02);
    REQUIRE(close.has_value());
    CHECK(close->num == 5);
    CHECK(close->den == 7);
    CHECK(std::abs(irr - 5.0 / 7.0) < 0.02);
    CHECK(std::abs(irr - 5.0 / 7.0) > 0.006); // genuinely non-fractional
}

TEST_CASE("rationalize recovers every coprime pair below the cap") {
    for (std::int64_t n = 1; n <= 30; ++n) {
        for (std::int64_t m = 1; m <= 30; ++m) {
            if (std::gcd(m, n) != 1) continue;
            const auto r = rationalize(double(m) / double(n), 30, 1e-9);
            REQUIRE(r.has_value());
            CHECK(r->num == m);
            CHECK(r->den == n);
        }
    }
}

TEST_CASE("t_min by parity class") {
    CHECK(t_min(7.0, reduce_ratio(5, 7)) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(t_min(3.0, reduce_ratio(2, 3)) == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(t_min(6.0, reduce_ratio(2, 3)) == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("non-objectivity times are exact multiples of t_min") {
    const auto ts = non_objectivity_times(7.0, reduce_ratio(5, 7), 3);
    REQUIRE(ts.size() == 3);
    CHECK(ts[0] == doctest::Approx(pi).epsilon(1e-15));
    CHECK(ts[1] == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(ts[2] == doctest::Approx(3 * pi).epsilon(1e-15));

    CHECK(non_objectivity_times(7.0, reduce_ratio(5, 7), 1).size() == 1);

    const auto ts63 = non_objectivity_times(6.0, reduce_ratio(2, 3), 2);
    CHECK(ts63[0] == doctest::Approx(pi).epsilon(1e-15));
    CHECK(ts63[1] == doctest::Approx(2 * pi).epsilon(1e-15));
}

TEST_CASE("eta vanishes at every emitted lattice point") {
    struct Case { double omega_big; std::int64_t m, n; };
    for (const auto& c : {Case{7.0, 5, 7}, Case{6.0, 2, 3}, Case{3.0, 2, 3}, Case{4.0, 39, 40}}) {
        const auto frac = reduce_ratio(c.m, c.n);
        const double omega = double(c.m) / double(c.n) * c.omega_big;
        const EnvOscillator osc{1.0, omega, 1.0};
        const CentralOscillator cen{1.0, c.omega_big};
        for (double t : non_objectivity_times(c.omega_big, frac, 5)) {
            CHECK(std::abs(markers::eta(osc, cen, 0.0, t).value) < 1e-10);
        }
    }
}

TEST_CASE("no spurious zeros inside one common period") {
    // dense grid over [0, t_min]: |eta_bar| stays away from zero except at
    // the lattice endpoints
    const double omega_big = 7.0, omega = 5.0;
    const double tm = t_min(omega_big, reduce_ratio(5, 7));
    const int n = 20000;
    for (int i = 1; i < n; ++i) {
        const double t = tm * i / n;
        const double margin = std::min(t, tm - t);
        if (margin < 1e-3) continue;
        CHECK(std::abs(markers::eta_bar(omega_big, omega, 0.0, t)) > 1e-8);
    }
}

TEST_CASE("frequency families share the nominal lattice") {
    const auto odd = frequency_family(7.0, 0, ParityClass::odd_odd, 3);
    REQUIRE(odd.size() == 3);
    CHECK(odd[0].omega == doctest::Approx(7.0));
    CHECK(odd[1].omega == doctest::Approx(21.0));
    CHECK(odd[2].omega == doctest::Approx(35.0));

    const auto even = frequency_family(6.0, 3, ParityClass::even_class, 2);
    REQUIRE(even.size() == 2);
    CHECK(even[0].omega == doctest::Approx(2.0));
    CHECK(even[1].omega == doctest::Approx(4.0));
    // omega=2 reduces to 1/3 (odd-odd, t_min pi/2 < pi): flagged
    CHECK(even[0].reduces_below_family);
    CHECK(!even[1].reduces_below_family);

    CHECK(frequency_family(6.0, 3, ParityClass::even_class, 0).empty());

    // every member's eta vanishes on the family lattice
    for (const auto& mem : even) {
        const EnvOscillator osc{1.0, mem.omega, 1.0};
        const CentralOscillator cen{1.0, 6.0};
        const double family_t_min = pi; // 2 * 3 * pi / 6
        for (int p = 1; p <= 3; ++p) {
            CHECK(std::abs(markers::eta(osc, cen, 0.0, p * family_t_min).value) < 1e-10);
        }
    }
}

TEST_CASE("common recurrence of the 2..6 over 7 ensemble is 2 pi") {
    std::vector<ReducedFraction> fr;
    for (std::int64_t m = 2; m <= 6; ++m) fr.push_back(reduce_ratio(m, 7));
    CHECK(common_recurrence(7.0, fr) == doctest::Approx(2 * pi).epsilon(1e-15));
}

TEST_CASE("common recurrence degenerate and merged cases") {
    CHECK(common_recurrence(7.0, {reduce_ratio(5, 7)}) ==
          doctest::Approx(t_min(7.0, reduce_ratio(5, 7))).epsilon(1e-15));
    CHECK(common_recurrence(7.0, {reduce_ratio(5, 7), reduce_ratio(3, 7)}) ==
          doctest::Approx(pi).epsilon(1e-15));
    CHECK_THROWS_AS(common_recurrence(7.0, {}), Error);
}

TEST_CASE("common recurrence is an exact multiple of every input t_min") {
    std::vector<ReducedFraction> fr = {reduce_ratio(3, 4), reduce_ratio(5, 6),
                                       reduce_ratio(7, 9), reduce_ratio(2, 5)};
    const std::int64_t coeffs[] = {t_min_coefficient(fr[0]), t_min_coefficient(fr[1]),
                                   t_min_coefficient(fr[2]), t_min_coefficient(fr[3])};
    const double common = common_recurrence(2.0, fr);
    for (std::int64_t c : coeffs) {
        const double ratio = common / (double(c) * pi / 2.0);
        CHECK(std::abs(ratio - std::round(ratio)) < 1e-12);
    }
}

TEST_CASE("relation enumerates its lattice lazily") {
    const auto rel = make_relation(6.0, reduce_ratio(2, 3));
    CHECK(rel.t_min() == doctest::Approx(pi));
    CHECK(rel.time_at(7) == doctest::Approx(7 * pi));
    const auto first = rel.times(4);
    CHECK(first.size() == 4);
    CHECK(first[3] == doctest::Approx(4 * pi));
}
