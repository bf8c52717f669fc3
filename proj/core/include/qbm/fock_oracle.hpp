#ifndef QBM_FOCK_ORACLE_HPP
#define QBM_FOCK_ORACLE_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "qbm/model.hpp"

// Brute-force verification layer in a truncated Fock space.  Everything here
// is built from ladder matrices, matrix exponentials and dense traces so
// that it shares no algebra with the closed-form markers it is used to
// check.  Operators carry truncation artifacts in their last few rows and
// columns; comparisons between two N-level operators are therefore made on
// the retained block (see comparison_guard).

namespace qbm::fock {

using Matrix = Eigen::MatrixXcd;
using complexd = std::complex<double>;

struct LadderOperators {
    Matrix a;
    Matrix a_dag;
    Matrix x;
    Matrix p;
};

// a has sqrt(n) on the first superdiagonal; x = (a + a†)/sqrt(2 m omega),
// p = i sqrt(m omega / 2)(a† - a).  dim >= 2.
LadderOperators build_operators(int dim, double mass, double omega);

// Thermal density matrix diag((1 - e^-lambda) e^{-lambda n}) renormalized to
// unit trace on the truncated space.
Matrix thermal_state(double lambda, int dim);

// exp(alpha a† - alpha* a) via Hermitian eigendecomposition of the
// generator, unitary to solver precision.
Matrix displacement(complexd alpha, int dim);

// Truncation support heuristic: the displaced vacuum has mean occupation
// |alpha|^2, so |alpha|^2 > dim/4 leaves little headroom.
bool displacement_needs_headroom(complexd alpha, int dim);

// Scalar data of the drive's Floquet decomposition for one oscillator:
//   U(t) = e^{i scalar_phase} D[kick_displacement] D[initial_displacement]
//          exp(-i H0 t)
// with the kick evaluated at time t and the initial kick rotated to the
// same frame.  floquet_energy_shift = Y^2 g^2 R / 4 is the secular phase
// rate folded into scalar_phase.
struct FloquetFactors {
    complexd k_y_displacement;        // time-t kick
    complexd heisenberg_displacement; // rotated initial kick
    double floquet_phase_shift;       // Y^2 g^2 R / 4
    double scalar_phase;              // total accumulated c-number phase
};

FloquetFactors floquet_factors(const EnvOscillator& osc,
                               const CentralOscillator& central, double y,
                               double phi, double t);

// Time-ordered solution of dU/ds = -i H(s) U with
// H(s) = p^2/2m + (1/2) m omega^2 x^2 - y g x cos(Omega s + phi).
// The static diagonal is integrated exactly (its phases are known); the
// drive term advances with fixed-step RK4, so the step count is set by the
// drive's smoothness, not by the truncation dimension.  The routine runs at
// `steps` and `steps/2` and throws non_converged_step_size unless the two
// agree to 1e-8 in operator norm.
Matrix propagate(const EnvOscillator& osc, const CentralOscillator& central,
                 double y, double phi, double t, int dim, int steps);

// Step count that comfortably passes the halving test for the desk-scale
// parameter envelope.
int default_steps(const EnvOscillator& osc, const CentralOscillator& central,
                  double t);

// The same unitary assembled from two displacement matrices and the free
// propagator, plus the closed-form scalar phase.  Off-resonance only
// (|omega/Omega - 1| >= resonance window): the kick amplitudes carry the
// 1/(omega^2 - Omega^2) prefactor.
Matrix closed_form_unitary(const EnvOscillator& osc,
                           const CentralOscillator& central, double y,
                           double phi, double t, int dim);

// Tr[U_Y rho U_Y'†].
complexd gamma_oracle(const Matrix& u_y, const Matrix& u_yp, const Matrix& rho);

// Uhlmann fidelity [Tr sqrt(sqrt(sigma) tau sqrt(sigma))]^2 of the two
// branch-conditioned states sigma = U_Y' rho U_Y'†, tau = U_Y rho U_Y†.
// Square roots via Hermitian eigendecomposition; eigenvalues below
// -1e-10 * scale are rejected (non_positive_density), smaller negatives are
// clamped to zero.
double overlap_oracle(const Matrix& u_y, const Matrix& u_yp, const Matrix& rho);

// Rows/columns to exclude when comparing two truncated operators: the
// boundary corruption of a displacement of amplitude b reaches about
// 2 |b| sqrt(N) levels plus an Airy tail.  Calibrated so the retained block
// agrees to <1e-9 for |b| <= 1.5 at dims 40..160.
int comparison_guard(int dim, double max_displacement);

// Operator-norm distance on the top-left (dim-guard) block.
double retained_block_distance(const Matrix& u1, const Matrix& u2, int guard);

// One single-oscillator marker evaluation task for the oracle.
struct OracleCase {
    EnvOscillator osc;
    CentralOscillator central;
    ThermalBath bath;
    double y = 0.0;
    double y_prime = 0.0;
    double phi = 0.0;
    double t = 0.0;
};

struct OracleMarkers {
    double gamma_sq;
    double overlap;
};

enum class UnitarySource { propagated, closed_form };

// |Gamma|^2 and B evaluated directly from the marker definitions at the
// given dimension.  `propagated` keeps the oracle fully independent of the
// displacement algebra; `closed_form` is cheap and used for dimension scans.
OracleMarkers oracle_markers(const OracleCase& c, int dim,
                             UnitarySource source = UnitarySource::propagated);

// Smallest dim in {20, 40, 80, 160} whose markers move by less than
// target_tol when the dimension doubles.  Throws not_converged_at_max_dim
// (message reports the last change) when even the 80->160 step fails.
int truncation_convergence(const OracleCase& c, double target_tol);

} // namespace qbm::fock

#endif
