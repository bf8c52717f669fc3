#include "qbm/fock_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qbm/markers.hpp"

namespace qbm::fock {

namespace {

constexpr complexd I{0.0, 1.0};

void require_dim(int dim) {
    if (dim < 2) {
        throw Error(Error::Code::dimension_too_small, "Fock dimension must be >= 2");
    }
}

// exp(i H) for Hermitian H, unitary to eigensolver precision
Matrix unitary_exp_i(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& vals = es.eigenvalues();
    const Matrix& vecs = es.eigenvectors();
    Eigen::VectorXcd phases(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) phases[k] = std::exp(I * vals[k]);
    return vecs * phases.asDiagonal() * vecs.adjoint();
}

Eigen::VectorXd free_energies(int dim, double omega) {
    Eigen::VectorXd e(dim);
    for (int n = 0; n < dim; ++n) e[n] = omega * (n + 0.5);
    return e;
}

// signed kick amplitude prefactor g R sqrt(m omega / 2)
double kick_prefactor(const EnvOscillator& osc, const CentralOscillator& c) {
    const double denom = osc.omega * osc.omega - c.omega_big * c.omega_big;
    return osc.coupling_g * std::sqrt(osc.mass_m * osc.omega / 2.0)
           / (osc.mass_m * denom);
}

complexd v_of(const EnvOscillator& osc, const CentralOscillator& c, double phi,
              double s) {
    return {std::cos(c.omega_big * s + phi),
            (c.omega_big / osc.omega) * std::sin(c.omega_big * s + phi)};
}

} // namespace

LadderOperators build_operators(int dim, double mass, double omega) {
    require_dim(dim);
    LadderOperators ops;
    ops.a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.a_dag = ops.a.adjoint();
    ops.x = (ops.a + ops.a_dag) / std::sqrt(2.0 * mass * omega);
    ops.p = I * std::sqrt(mass * omega / 2.0) * (ops.a_dag - ops.a);
    return ops;
}

Matrix thermal_state(double lambda, int dim) {
    require_dim(dim);
    Eigen::VectorXd w(dim);
    double sum = 0.0;
    for (int n = 0; n < dim; ++n) {
        w[n] = std::exp(-lambda * n);
        sum += w[n];
    }
    Matrix rho = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) rho(n, n) = w[n] / sum;
    return rho;
}

Matrix displacement(complexd alpha, int dim) {
    require_dim(dim);
    // alpha a† - alpha* a = i H with Hermitian tridiagonal H
    Matrix h = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const complexd up = -I * alpha * std::sqrt(static_cast<double>(n));
        h(n, n - 1) = up;
        h(n - 1, n) = std::conj(up);
    }
    return unitary_exp_i(h);
}

bool displacement_needs_headroom(complexd alpha, int dim) {
    return std::norm(alpha) > 0.25 * static_cast<double>(dim);
}

FloquetFactors floquet_factors(const EnvOscillator& osc,
                               const CentralOscillator& central, double y,
                               double phi, double t) {
    const double om = osc.omega;
    const double Om = central.omega_big;
    const double g = osc.coupling_g;
    const double m = osc.mass_m;
    const double R = 1.0 / (m * (om * om - Om * Om));
    const double rho = kick_prefactor(osc, central);

    FloquetFactors f;
    f.k_y_displacement = y * rho * std::conj(v_of(osc, central, phi, t));
    f.heisenberg_displacement =
        -y * rho * std::exp(-I * om * t) * std::conj(v_of(osc, central, phi, 0.0));
    f.floquet_phase_shift = 0.25 * y * y * g * g * R;

    // accumulated c-number phase of the exact solution:
    //   Theta(t) = (Y^2 g^2 R / 2) int_0^t c(s) [c(s) - cos(om s) c0
    //                                            + (Om/om) sin(om s) s0] ds
    // evaluated in closed form, minus the splitting phase Im(b1 b2*).
    const double c0 = std::cos(phi);
    const double s0 = std::sin(phi);
    const double i1 = 0.5 * t + (std::sin(2.0 * (Om * t + phi)) - std::sin(2.0 * phi)) / (4.0 * Om);
    const double i2 = 0.5 * ((std::sin((Om + om) * t + phi) - s0) / (Om + om)
                             + (std::sin((Om - om) * t + phi) - s0) / (Om - om));
    const double i3 = 0.5 * ((c0 - std::cos((Om + om) * t + phi)) / (Om + om)
                             - (c0 - std::cos((Om - om) * t + phi)) / (Om - om));
    const double theta = 0.5 * y * y * g * g * R * (i1 - c0 * i2 + (Om / om) * s0 * i3);
    f.scalar_phase = theta - std::imag(f.k_y_displacement * std::conj(f.heisenberg_displacement));
    return f;
}

Matrix closed_form_unitary(const EnvOscillator& osc,
                           const CentralOscillator& central, double y,
                           double phi, double t, int dim) {
    require_dim(dim);
    if (std::abs(osc.omega / central.omega_big - 1.0) < markers::resonance_window) {
        throw Error(Error::Code::resonance_unsupported,
                    "closed form needs |omega/Omega - 1| >= resonance window; use propagate");
    }
    const FloquetFactors f = floquet_factors(osc, central, y, phi, t);
    const Matrix d1 = displacement(f.k_y_displacement, dim);
    const Matrix d2 = displacement(f.heisenberg_displacement, dim);
    const Eigen::VectorXd e = free_energies(dim, osc.omega);
    Eigen::VectorXcd free_phases(dim);
    for (int n = 0; n < dim; ++n) free_phases[n] = std::exp(-I * e[n] * t);
    return std::exp(I * f.scalar_phase) * (d1 * (d2 * free_phases.asDiagonal()));
}

namespace {

// One RK4 pass on the rotating-frame ODE  W' = i f(s) xr(s) W  with
// xr(s) = e^{i H0 s} x e^{-i H0 s}: the superdiagonal of x picks up
// e^{-i omega s}, the subdiagonal its conjugate.  Applying xr costs O(N^2).
Matrix rk4_rotating_frame(const EnvOscillator& osc, const CentralOscillator& central,
                          double y, double phi, double t, int dim, int steps) {
    const double om = osc.omega;
    const double Om = central.omega_big;
    const double inv_sqrt = 1.0 / std::sqrt(2.0 * osc.mass_m * om);

    Eigen::VectorXd coup(dim - 1); // x_{n,n+1}
    for (int n = 0; n < dim - 1; ++n) coup[n] = inv_sqrt * std::sqrt(static_cast<double>(n + 1));

    Matrix w = Matrix::Identity(dim, dim);
    Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

    auto rhs = [&](double s, const Matrix& u, Matrix& out) {
        const double f = y * osc.coupling_g * std::cos(Om * s + phi);
        const complexd up = I * f * std::exp(-I * om * s);
        const complexd dn = I * f * std::exp(I * om * s);
        for (int j = 0; j < dim; ++j) {
            const complexd* uc = u.col(j).data();
            complexd* oc = out.col(j).data();
            oc[0] = up * coup[0] * uc[1];
            for (int n = 1; n + 1 < dim; ++n) {
                oc[n] = up * coup[n] * uc[n + 1] + dn * coup[n - 1] * uc[n - 1];
            }
            oc[dim - 1] = dn * coup[dim - 2] * uc[dim - 2];
        }
    };

    const double dt = t / steps;
    for (int k = 0; k < steps; ++k) {
        const double s = k * dt;
        rhs(s, w, k1);
        tmp = w + (0.5 * dt) * k1;
        rhs(s + 0.5 * dt, tmp, k2);
        tmp = w + (0.5 * dt) * k2;
        rhs(s + 0.5 * dt, tmp, k3);
        tmp = w + dt * k3;
        rhs(s + dt, tmp, k4);
        w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const Eigen::VectorXd e = free_energies(dim, om);
    Eigen::VectorXcd phases(dim);
    for (int n = 0; n < dim; ++n) phases[n] = std::exp(-I * e[n] * t);
    return phases.asDiagonal() * w;
}

} // namespace

int default_steps(const EnvOscillator& osc, const CentralOscillator& central,
                  double t) {
    const double rate = std::max({osc.omega, central.omega_big, 1.0});
    const double n = 200.0 * t * rate;
    return std::clamp(static_cast<int>(n), 1000, 400000);
}

Matrix propagate(const EnvOscillator& osc, const CentralOscillator& central,
                 double y, double phi, double t, int dim, int steps) {
    require_dim(dim);
    if (t == 0.0) return Matrix::Identity(dim, dim);
    if (steps < 2) {
        throw Error(Error::Code::non_converged_step_size, "need at least 2 steps");
    }
    const Matrix fine = rk4_rotating_frame(osc, central, y, phi, t, dim, steps);
    const Matrix coarse = rk4_rotating_frame(osc, central, y, phi, t, dim, steps / 2);
    const double diff = (fine - coarse).norm(); // Frobenius bounds the 2-norm
    if (diff >= 1e-8) {
        throw Error(Error::Code::non_converged_step_size,
                    "halving check failed: change " + std::to_string(diff));
    }
    return fine;
}

complexd gamma_oracle(const Matrix& u_y, const Matrix& u_yp, const Matrix& rho) {
    if (u_y.rows() != u_yp.rows() || u_y.rows() != rho.rows() ||
        u_y.rows() != u_y.cols() || rho.rows() != rho.cols()) {
        throw Error(Error::Code::dimension_mismatch, "operator dimensions disagree");
    }
    // Tr[U_Y rho U_Y'†] = sum_ij (U_Y rho)_ij conj(U_Y')_ij
    return ((u_y * rho).array() * u_yp.conjugate().array()).sum();
}

namespace {

// Hermitian PSD square root with clamping; negative eigenvalues beyond the
// tolerance indicate a genuinely indefinite input.
Matrix psd_sqrt(const Matrix& m, double reject_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd vals = es.eigenvalues();
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        if (vals[k] < -reject_tol) {
            throw Error(Error::Code::non_positive_density,
                        "density matrix has eigenvalue " + std::to_string(vals[k]));
        }
        vals[k] = std::sqrt(std::max(vals[k], 0.0));
    }
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

double overlap_oracle(const Matrix& u_y, const Matrix& u_yp, const Matrix& rho) {
    if (u_y.rows() != u_yp.rows() || u_y.rows() != rho.rows() ||
        u_y.rows() != u_y.cols() || rho.rows() != rho.cols()) {
        throw Error(Error::Code::dimension_mismatch, "operator dimensions disagree");
    }
    const Matrix sigma = u_yp * rho * u_yp.adjoint();
    const Matrix tau = u_y * rho * u_y.adjoint();
    const Matrix root = psd_sqrt(sigma, 1e-10);
    const Matrix inner = root * tau * root;
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner);
    double trace_root = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        trace_root += std::sqrt(std::max(es.eigenvalues()[k], 0.0));
    }
    return trace_root * trace_root;
}

int comparison_guard(int dim, double max_displacement) {
    const double reach = 2.5 * std::abs(max_displacement) * std::sqrt(static_cast<double>(dim)) + 8.0;
    return std::min(dim / 2, static_cast<int>(std::ceil(reach)));
}

double retained_block_distance(const Matrix& u1, const Matrix& u2, int guard) {
    const int keep = static_cast<int>(u1.rows()) - guard;
    if (keep < 1 || u1.rows() != u2.rows()) {
        throw Error(Error::Code::dimension_mismatch, "retained block is empty");
    }
    const Matrix d = u1.topLeftCorner(keep, keep) - u2.topLeftCorner(keep, keep);
    // 2-norm via the largest eigenvalue of d†d
    Eigen::SelfAdjointEigenSolver<Matrix> es(d.adjoint() * d);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

OracleMarkers oracle_markers(const OracleCase& c, int dim, UnitarySource source) {
    Matrix u_y, u_yp;
    if (source == UnitarySource::propagated) {
        const int steps = default_steps(c.osc, c.central, c.t);
        u_y = propagate(c.osc, c.central, c.y, c.phi, c.t, dim, steps);
        u_yp = propagate(c.osc, c.central, c.y_prime, c.phi, c.t, dim, steps);
    } else {
        u_y = closed_form_unitary(c.osc, c.central, c.y, c.phi, c.t, dim);
        u_yp = closed_form_unitary(c.osc, c.central, c.y_prime, c.phi, c.t, dim);
    }
    const Matrix rho = thermal_state(c.bath.lambda(c.osc.omega), dim);
    OracleMarkers out;
    out.gamma_sq = std::norm(gamma_oracle(u_y, u_yp, rho));
    out.overlap = overlap_oracle(u_y, u_yp, rho);
    return out;
}

int truncation_convergence(const OracleCase& c, double target_tol) {
    if (!(target_tol > 0.0)) {
        throw Error(Error::Code::non_positive_input, "target_tol must be positive");
    }
    constexpr int dims[] = {20, 40, 80, 160};
    OracleMarkers prev = oracle_markers(c, dims[0], UnitarySource::closed_form);
    double change = 0.0;
    for (std::size_t k = 1; k < std::size(dims); ++k) {
        const OracleMarkers next = oracle_markers(c, dims[k], UnitarySource::closed_form);
        change = std::max(std::abs(next.gamma_sq - prev.gamma_sq),
                          std::abs(next.overlap - prev.overlap));
        if (change < target_tol) return dims[k - 1];
        prev = next;
    }
    throw Error(Error::Code::not_converged_at_max_dim,
                "markers still move by " + std::to_string(change) + " at dim 160");
}

} // namespace qbm::fock
