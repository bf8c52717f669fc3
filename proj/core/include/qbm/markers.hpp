#ifndef QBM_MARKERS_HPP
#define QBM_MARKERS_HPP

#include <complex>
#include <vector>

#include "qbm/model.hpp"

namespace qbm::markers {

using complexd = std::complex<double>;

// Relative half-width of the window around omega = Omega inside which eta()
// switches from the direct closed form to the first-order detuning
// expansion.  Direct evaluation loses roughly eight digits to cancellation
// at |omega/Omega - 1| ~ 1e-8; at 1e-4 the expansion's truncation error and
// the direct form's rounding error are both well below 1e-6 relative.
inline constexpr double resonance_window = 1e-4;

struct EtaValue {
    complexd value;   // eta itself; continuous across omega = Omega
    double q_factor;  // resonant prefactor sqrt(omega/2m)/(omega^2 - Omega^2);
                      // signed so that value == coupling_g * q_factor * eta_bar
                      // away from resonance (+inf magnitude at omega == Omega)
    complexd eta_bar; // coupling- and prefactor-free part; eta_bar(0) == 0
};

// Slow-envelope decomposition of |eta_bar|^2 near resonance:
//   |eta_bar|^2 = D cos(delta_omega t - xi) + offset + micro-motion.
struct BeatingEnvelope {
    double delta_omega;     // |Omega - omega|
    double amplitude_d;     // D >= 0
    double phase_xi;        // in (-pi, pi]
    double constant_offset; // 1 + Omega^2/omega^2
    bool degenerate;        // delta_omega == 0: no envelope period
};

struct MarkerPoint {
    double t = 0.0;
    std::vector<double> gamma_sq_per_osc;
    std::vector<double> overlap_per_osc;
    double gamma_sq_total = 1.0;
    double overlap_total = 1.0;
};

struct PhaseExtremes {
    double phi_at_max;
    double phi_at_min;
    bool degenerate; // Omega == omega: |v(0)|^2 is phi-independent
    double omega_big;
    double omega;

    // |v(0)|^2 = (Omega^2/omega^2 - 1) sin^2 phi + 1
    double v0_mag_sq(double phi) const;
};

// eta_bar = -e^{-i omega t} v(t) + v(0) with
// v(s) = cos(Omega s + phi) + i (Omega/omega) sin(Omega s + phi).
complexd eta_bar(double omega_big, double omega, double phi, double t);

// Full eta for one oscillator.  Inside the resonance window the value comes
// from the first-order expansion in (omega - Omega); at the window edge the
// two branches agree to ~1e-7 relative.
EtaValue eta(const EnvOscillator& osc, const CentralOscillator& central,
             double phi, double t);

// Limit of eta as omega -> Omega:
//   i g sqrt(1/(8 m Omega^3)) [e^{-i Omega t} sin(Omega t + phi) - sin phi
//                              + Omega t e^{i phi}]
std::complex<double> eta_resonance_limit(double g, double m, double omega_big,
                                         double phi, double t);

// |eta_bar|^2 as the explicit five-cosine combination (frequencies
// Omega-omega, Omega+omega, 2*Omega).  Equals |eta_bar(...)|^2 to 1e-12.
double eta_bar_abs2_expansion(double omega, double omega_big, double phi, double t);

BeatingEnvelope beating_envelope(double omega, double omega_big, double phi);

// Both markers at time t.  Per-oscillator factors are
//   gamma^2_k = exp(-coth(beta omega_k / 2) dY^2 |eta_k|^2)
//   B_k       = exp(-tanh(beta omega_k / 2) dY^2 |eta_k|^2)
// Totals sum the exponents across oscillators before a single exp, so a
// hundred near-zero factors cannot underflow pairwise.
MarkerPoint marker_point(const Ensemble& ens, double t);

// Same evaluation; kept as separate entry points for callers interested in
// one marker.  Both fill the complete point.
MarkerPoint decoherence_factor(const Ensemble& ens, double t);
MarkerPoint generalized_overlap(const Ensemble& ens, double t);

// Location of the extrema of sup_t |eta_bar|^2 over phi in [0, pi/2]:
// phi = pi/2 maximizes when Omega > omega, phi = 0 when Omega < omega.
PhaseExtremes phase_extremes(double omega, double omega_big);

} // namespace qbm::markers

#endif
