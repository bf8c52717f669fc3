#ifndef QBM_MODEL_HPP
#define QBM_MODEL_HPP

#include <string>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

// Natural units throughout: hbar = k_B = 1.

struct CentralOscillator {
    double mass_big_m = 1.0; // enters only the system kernel, kept for completeness
    double omega_big = 1.0;  // drive frequency seen by every environment oscillator
};

struct EnvOscillator {
    double mass_m = 1.0;
    double omega = 1.0;
    double coupling_g = 1.0;
};

struct ThermalBath {
    double beta = 1.0; // inverse temperature, shared by all oscillators

    // dimensionless thermal parameter of one oscillator
    double lambda(double omega) const { return beta * omega; }
};

// Branch pair (Y, Y') of the central oscillator's classical trajectory,
// X(s) = Y cos(Omega s + phi).  Only Y - Y' enters the markers.
struct TrajectoryPair {
    double y = 0.0;
    double y_prime = 0.0;
    double phi = 0.0; // validated to [0, pi/2]

    double delta_y() const { return y - y_prime; }
};

struct Ensemble {
    CentralOscillator central;
    std::vector<EnvOscillator> oscillators;
    ThermalBath bath;
    TrajectoryPair trajectory;
};

// Checks every invariant and returns the ensemble unchanged.  Idempotent.
// Throws Error with code non_positive_parameter / empty_environment /
// phi_out_of_range; the message names the offending field.
const Ensemble& validate(const Ensemble& e);

// Ensemble from the JSON configuration document with top-level keys
// `central`, `oscillators`, `bath`, `trajectory`.  Frequencies may be plain
// numbers or {"sqrt": x}.  Unknown keys are ignored so callers can extend
// the same document.  Throws Error::config_error on malformed input.
Ensemble load_ensemble_json(const std::string& text);
Ensemble load_ensemble_file(const std::string& path);

} // namespace qbm

#endif
