#ifndef QBM_TESTS_HELPERS_HPP
#define QBM_TESTS_HELPERS_HPP

#include <numbers>

#include "qbm/model.hpp"

namespace qbm_tests {

inline constexpr double pi = std::numbers::pi;

inline qbm::Ensemble one_osc(double omega, double omega_big, double g = 1.0,
                             double beta = 1.0, double y = 1.0, double yp = 0.0,
                             double phi = 0.0) {
    qbm::Ensemble e;
    e.central.omega_big = omega_big;
    e.oscillators.push_back({1.0, omega, g});
    e.bath.beta = beta;
    e.trajectory = {y, yp, phi};
    return e;
}

} // namespace qbm_tests

#endif
