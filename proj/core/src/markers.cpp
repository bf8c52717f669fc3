#include "qbm/markers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qbm::markers {

namespace {

constexpr complexd I{0.0, 1.0};

inline complexd v_of(double omega_big, double omega, double phi, double s) {
    return {std::cos(omega_big * s + phi),
            (omega_big / omega) * std::sin(omega_big * s + phi)};
}

inline double coth(double x) { return 1.0 / std::tanh(x); }

} // namespace

complexd eta_bar(double omega_big, double omega, double phi, double t) {
    const complexd rot = std::exp(-I * omega * t);
    return -rot * v_of(omega_big, omega, phi, t) + v_of(omega_big, omega, phi, 0.0);
}

EtaValue eta(const EnvOscillator& osc, const CentralOscillator& central,
             double phi, double t) {
    const double omega = osc.omega;
    const double omega_big = central.omega_big;
    const double m = osc.mass_m;
    const double g = osc.coupling_g;

    EtaValue out;
    out.eta_bar = eta_bar(omega_big, omega, phi, t);

    const double denom = omega * omega - omega_big * omega_big;
    out.q_factor = (denom != 0.0) ? std::sqrt(omega / (2.0 * m)) / denom
                                  : std::numeric_limits<double>::infinity();

    if (std::abs(omega / omega_big - 1.0) >= resonance_window) {
        out.value = g * out.q_factor * out.eta_bar;
        return out;
    }

    // First-order detuning expansion around omega = Omega; the divergent
    // prefactor and the vanishing eta_bar cancel analytically.
    const double s = std::sin(omega_big * t + phi);
    const double s0 = std::sin(phi);
    const complexd eiphi = std::exp(I * phi);
    const complexd w = s * std::exp(-I * omega_big * t) - s0;
    const complexd first = I * t * eiphi + (I / omega_big) * w;
    const complexd second = 0.5 * (t * t * eiphi
                                   + (2.0 * t / omega_big) * std::exp(-I * omega_big * t) * s
                                   - (2.0 * I / (omega_big * omega_big)) * w);
    out.value = g / (omega + omega_big) * std::sqrt(omega / (2.0 * m))
                * (first + second * (omega - omega_big));
    return out;
}

complexd eta_resonance_limit(double g, double m, double omega_big, double phi,
                             double t) {
    const complexd bracket = std::exp(-I * omega_big * t) * std::sin(omega_big * t + phi)
                             - std::sin(phi)
                             + omega_big * t * std::exp(I * phi);
    return I * g * std::sqrt(1.0 / (8.0 * m * omega_big * omega_big * omega_big)) * bracket;
}

double eta_bar_abs2_expansion(double omega, double omega_big, double phi, double t) {
    const double r = omega_big / omega;
    const double dm = (omega_big - omega) * t;
    const double dp = (omega_big + omega) * t;
    return -0.5 * (1.0 + r) * (1.0 + r) * std::cos(dm)
           - 0.5 * (1.0 - r * r) * std::cos(dm + 2.0 * phi)
           - 0.5 * (1.0 - r) * (1.0 - r) * std::cos(dp)
           - 0.5 * (1.0 - r * r) * std::cos(dp + 2.0 * phi)
           + 1.0 + r * r
           + 0.5 * (1.0 - r * r) * (std::cos(2.0 * (omega_big * t + phi)) + std::cos(2.0 * phi));
}

BeatingEnvelope beating_envelope(double omega, double omega_big, double phi) {
    const double r = omega_big / omega;
    BeatingEnvelope env;
    env.delta_omega = std::abs(omega_big - omega);
    env.constant_offset = 1.0 + r * r;
    env.degenerate = (env.delta_omega == 0.0);

    // The two slow cosines combine into D cos((Omega-omega) t + psi) with
    // D e^{i psi} = -(1/2)[(1+r)^2 + (1-r^2) e^{2 i phi}].
    const complexd z = -0.5 * ((1.0 + r) * (1.0 + r)
                               + (1.0 - r * r) * std::exp(2.0 * I * phi));
    env.amplitude_d = std::abs(z);
    const double psi = std::arg(z);
    // report xi with the envelope written as D cos(delta_omega t - xi)
    env.phase_xi = (omega_big >= omega) ? -psi : psi;
    return env;
}

MarkerPoint marker_point(const Ensemble& ens, double t) {
    MarkerPoint pt;
    pt.t = t;
    const double dy = ens.trajectory.delta_y();
    const double dy2 = dy * dy;
    pt.gamma_sq_per_osc.reserve(ens.oscillators.size());
    pt.overlap_per_osc.reserve(ens.oscillators.size());

    double gamma_exponent = 0.0;
    double overlap_exponent = 0.0;
    for (const auto& osc : ens.oscillators) {
        const EtaValue ev = eta(osc, ens.central, ens.trajectory.phi, t);
        const double eta2 = std::norm(ev.value);
        const double half_lambda = 0.5 * ens.bath.lambda(osc.omega);
        const double xg = coth(half_lambda) * dy2 * eta2;
        const double xb = std::tanh(half_lambda) * dy2 * eta2;
        pt.gamma_sq_per_osc.push_back(std::exp(-xg));
        pt.overlap_per_osc.push_back(std::exp(-xb));
        gamma_exponent += xg;
        overlap_exponent += xb;
    }
    pt.gamma_sq_total = std::exp(-gamma_exponent);
    pt.overlap_total = std::exp(-overlap_exponent);
    return pt;
}

MarkerPoint decoherence_factor(const Ensemble& ens, double t) {
    return marker_point(ens, t);
}

MarkerPoint generalized_overlap(const Ensemble& ens, double t) {
    return marker_point(ens, t);
}

double PhaseExtremes::v0_mag_sq(double phi) const {
    const double r2 = (omega_big * omega_big) / (omega * omega);
    const double s = std::sin(phi);
    return (r2 - 1.0) * s * s + 1.0;
}

PhaseExtremes phase_extremes(double omega, double omega_big) {
    PhaseExtremes pe;
    pe.omega = omega;
    pe.omega_big = omega_big;
    pe.degenerate = (omega == omega_big);
    if (omega_big > omega) {
        pe.phi_at_max = std::numbers::pi / 2;
        pe.phi_at_min = 0.0;
    } else if (omega_big < omega) {
        pe.phi_at_max = 0.0;
        pe.phi_at_min = std::numbers::pi / 2;
    } else {
        pe.phi_at_max = 0.0;
        pe.phi_at_min = 0.0;
    }
    return pe;
}

} // namespace qbm::markers
