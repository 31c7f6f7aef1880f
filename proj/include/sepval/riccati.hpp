#pragma once

#include <optional>
#include <string>

#include "sepval/matrix.hpp"

namespace sepval {

/// Data of the discrete-time problem: minimize sum of x'Qx + u'Ru subject to
/// x(k+1) = Ax(k) + Bu(k). Q must be symmetric PSD, R symmetric PD.
struct DareProblem {
    Matrix A, B, Q, R;
};

/// Continuous-time counterpart (integral cost, dx/dt = Ax + Bu).
struct CareProblem {
    Matrix A, B, Q, R;
};

/// Shape and definiteness checks; throws std::invalid_argument on violation.
/// PSD is tested by a shifted Cholesky (min eigenvalue >= -1e-10 * ||Q||).
void validate(const DareProblem& p);
void validate(const CareProblem& p);

enum class RiccatiStatus {
    ok,
    no_convergence,   // iteration cap hit; likely an unstabilizable pair
    singular_iterate, // sign/doubling iteration produced a singular matrix
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    RiccatiStatus status = RiccatiStatus::ok;
    /// Spectral radius of A - BK (discrete) or spectral abscissa estimate
    /// (continuous); NaN when diagnostics were disabled.
    double closed_loop_spectrum = 0.0;
    std::string detail;
};

struct RiccatiSolution {
    Matrix P;
    SolveReport report;
};

struct RiccatiOptions {
    double tol = 1e-10;        // relative residual target
    int max_iter = 200;        // doubling / sign iteration cap
    int newton_max_iter = 50;  // Newton-Kleinman refinement cap
    bool diagnostics = true;   // fill closed_loop_spectrum in the report
};

/// Structure-preserving doubling iteration for the DARE. Residual contract:
/// ||A'PA - P - A'PB(B'PB+R)^{-1}B'PA + Q||_inf <= tol * (1 + ||P||_inf).
RiccatiSolution solve_dare(const DareProblem& p, const RiccatiOptions& opts = {});

/// Matrix sign-function iteration on the 2n x 2n Hamiltonian with
/// determinant scaling, followed by Newton-Kleinman refinement. When
/// `warm_start` is a stabilizing guess the sign phase is skipped and Newton
/// iterates from it directly (with automatic fallback to the sign phase).
RiccatiSolution solve_care(const CareProblem& p, const RiccatiOptions& opts = {},
                           const Matrix* warm_start = nullptr);

double dare_residual(const Matrix& P, const DareProblem& p);
double care_residual(const Matrix& P, const CareProblem& p);

/// K = (B'PB + R)^{-1} B'PA
Matrix feedback_gain(const Matrix& P, const DareProblem& p);
/// K = R^{-1} B'P
Matrix feedback_gain(const Matrix& P, const CareProblem& p);

struct LyapunovResult {
    Matrix X;
    int iterations = 0;
    bool converged = false;
};

/// Solve A'X + XA + Q = 0 for Hurwitz A by the sign iteration
/// (A, Q) <- ((cA + (cA)^{-1})/2, (cQ + c^{-1} A^{-T} Q A^{-1})/2).
/// Non-convergence signals eigenvalues on or near the imaginary axis.
LyapunovResult solve_lyapunov_continuous(const Matrix& A, const Matrix& Q,
                                         double tol = 1e-13, int max_iter = 120);

enum class SpectralMethod { power, shifted_power, norm_bound };

struct SpectralEstimate {
    double value = 0.0;
    bool converged = false;        // power iteration met the tolerance
    SpectralMethod method = SpectralMethod::power;
};

/// Spectral radius estimate: deterministic power iteration, a shifted restart
/// for sign-symmetric real spectra, and a ||M^{2^t}||^{1/2^t} upper-bound
/// fallback (flagged, accurate to ~0.01%) when the dominant eigenvalue is a
/// complex pair.
SpectralEstimate spectral_radius(const Matrix& m, double tol = 1e-10);

/// max Re(lambda) via log(spectral_radius(exp(tM)))/t with t ~ 1/||M||.
double spectral_abscissa(const Matrix& m);

/// Certificate that all eigenvalues have negative real part (the sign
/// iteration of M converges to -I). Unlike spectral_abscissa this is exact
/// up to iteration tolerance, not an estimate.
bool is_hurwitz(const Matrix& m);

} // namespace sepval
