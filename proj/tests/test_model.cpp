#include <doctest.h>

#include "helpers.hpp"
#include "qbm/model.hpp"

using namespace qbm;
using qbm_tests::one_osc;
using qbm_tests::pi;

TEST_CASE("validate accepts the stock single-oscillator setup") {
    const Ensemble e = one_osc(5.0, 7.0);
    CHECK_NOTHROW(validate(e));
}

TEST_CASE("validate rejects non-positive frequencies and names the field") {
    Ensemble e = one_osc(5.0, 7.0);
    e.oscillators[0].omega = -1.0;
    try {
        validate(e);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == Error::Code::non_positive_parameter);
        CHECK(std::string(err.what()).find("omega") != std::string::npos);
    }
}

TEST_CASE("validate rejects an empty environment") {
    Ensemble e = one_osc(5.0, 7.0);
    e.oscillators.clear();
    CHECK_THROWS_AS(validate(e), Error);
    try {
        validate(e);
    } catch (const Error& err) {
        CHECK(err.code() == Error::Code::empty_environment);
    }
}

TEST_CASE("phi is confined to [0, pi/2] at the validation boundary") {
    Ensemble e = one_osc(5.0, 7.0);
    e.trajectory.phi = pi / 2;
    CHECK_NOTHROW(validate(e));
    e.trajectory.phi = pi / 2 + 0.01;
    try {
        validate(e);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == Error::Code::phi_out_of_range);
    }
    e.trajectory.phi = -0.01;
    CHECK_THROWS_AS(validate(e), Error);
}

TEST_CASE("validate is idempotent") {
    const Ensemble e = one_osc(5.0, 7.0, 1.0, 2.0, 0.7, -0.2, 0.3);
    const Ensemble& once = validate(e);
    const Ensemble& twice = validate(once);
    CHECK(twice.central.omega_big == e.central.omega_big);
    CHECK(twice.oscillators[0].omega == e.oscillators[0].omega);
    CHECK(twice.bath.beta == e.bath.beta);
    CHECK(twice.trajectory.y == e.trajectory.y);
}

TEST_CASE("ensemble loads from the JSON document") {
    const std::string text = R"({
        "central": {"mass_M": 2.0, "omega_big": {"sqrt": 50.0}},
        "oscillators": [
            {"mass_m": 1.0, "omega": {"sqrt": 26.0}, "coupling_g": 0.5},
            {"omega": 5.0, "ratio": [5, 7]}
        ],
        "bath": {"beta": 1.25},
        "trajectory": {"y": 1.0, "y_prime": -1.0, "phi": 0.0}
    })";
    const Ensemble e = load_ensemble_json(text);
    CHECK(e.central.mass_big_m == doctest::Approx(2.0));
    CHECK(e.central.omega_big == doctest::Approx(std::sqrt(50.0)).epsilon(1e-15));
    REQUIRE(e.oscillators.size() == 2);
    CHECK(e.oscillators[0].omega == doctest::Approx(std::sqrt(26.0)).epsilon(1e-15));
    CHECK(e.oscillators[0].coupling_g == doctest::Approx(0.5));
    CHECK(e.oscillators[1].omega == doctest::Approx(5.0)); // "ratio" key ignored here
    CHECK(e.oscillators[1].coupling_g == doctest::Approx(1.0));
    CHECK(e.bath.beta == doctest::Approx(1.25));
    CHECK(e.trajectory.y_prime == doctest::Approx(-1.0));
    CHECK(e.bath.lambda(e.oscillators[1].omega) == doctest::Approx(6.25));
}

TEST_CASE("malformed JSON is a config error") {
    try {
        load_ensemble_json("{not json");
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == Error::Code::config_error);
    }
    try {
        load_ensemble_json(R"({"central": {"omega_big": {"sqr": 2}}, "oscillators": [],
                              "bath": {"beta": 1}, "trajectory": {"y": 0, "y_prime": 0}})");
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == Error::Code::config_error);
    }
}
