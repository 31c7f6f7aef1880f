#include "sepval/riccati.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sepval/rng.hpp"

namespace sepval {

namespace {

void check_shapes(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
    if (!A.square()) throw std::invalid_argument("riccati: A must be square");
    const std::size_t n = A.rows();
    const std::size_t m = B.cols();
    if (B.rows() != n) throw std::invalid_argument("riccati: B row count must match A");
    if (Q.rows() != n || Q.cols() != n) throw std::invalid_argument("riccati: Q must be n x n");
    if (R.rows() != m || R.cols() != m) throw std::invalid_argument("riccati: R must be m x m");
}

void check_weights(const Matrix& Q, const Matrix& R) {
    const double qtol = 1e-12 * std::max(1.0, Q.norm_inf());
    if (!Q.is_symmetric(qtol)) throw std::invalid_argument("riccati: Q must be symmetric");
    const double rtol = 1e-12 * std::max(1.0, R.norm_inf());
    if (!R.is_symmetric(rtol)) throw std::invalid_argument("riccati: R must be symmetric");
    // PSD via shifted Cholesky: Q + eps*I PD  <=>  min eig(Q) >= -eps.
    Matrix qshift = Q;
    const double eps = 1e-10 * std::max(1.0, Q.norm_inf());
    for (std::size_t i = 0; i < qshift.rows(); ++i) qshift(i, i) += eps;
    qshift.symmetrize();
    if (!CholeskyFactorization(qshift).ok())
        throw std::invalid_argument("riccati: Q is not positive semidefinite");
    Matrix rsym = R;
    rsym.symmetrize();
    if (!CholeskyFactorization(rsym).ok())
        throw std::invalid_argument("riccati: R is not positive definite");
}

/// G = B R^{-1} B'
Matrix control_weight(const Matrix& B, const Matrix& R) {
    Matrix rsym = R;
    rsym.symmetrize();
    CholeskyFactorization rchol(rsym);
    if (!rchol.ok()) throw std::invalid_argument("riccati: R is not positive definite");
    Matrix g = B * rchol.solve(B.transpose());
    g.symmetrize();
    return g;
}

} // namespace

void validate(const DareProblem& p) {
    check_shapes(p.A, p.B, p.Q, p.R);
    check_weights(p.Q, p.R);
}

void validate(const CareProblem& p) {
    check_shapes(p.A, p.B, p.Q, p.R);
    check_weights(p.Q, p.R);
}

double dare_residual(const Matrix& P, const DareProblem& p) {
    const Matrix BtP = p.B.transpose() * P;
    Matrix S = BtP * p.B + p.R;
    S.symmetrize();
    const CholeskyFactorization schol(S);
    if (!schol.ok()) throw std::runtime_error("dare_residual: B'PB + R not positive definite");
    const Matrix BtPA = BtP * p.A;
    const Matrix res = p.A.transpose() * (P * p.A) - P - BtPA.transpose() * schol.solve(BtPA) + p.Q;
    return res.norm_inf();
}

double care_residual(const Matrix& P, const CareProblem& p) {
    const Matrix G = control_weight(p.B, p.R);
    const Matrix res = p.A.transpose() * P + P * p.A - P * (G * P) + p.Q;
    return res.norm_inf();
}

Matrix feedback_gain(const Matrix& P, const DareProblem& p) {
    const Matrix BtP = p.B.transpose() * P;
    Matrix S = BtP * p.B + p.R;
    S.symmetrize();
    const CholeskyFactorization schol(S);
    if (!schol.ok()) throw std::runtime_error("feedback_gain: B'PB + R not positive definite");
    return schol.solve(BtP * p.A);
}

Matrix feedback_gain(const Matrix& P, const CareProblem& p) {
    Matrix rsym = p.R;
    rsym.symmetrize();
    const CholeskyFactorization rchol(rsym);
    if (!rchol.ok()) throw std::runtime_error("feedback_gain: R not positive definite");
    return rchol.solve(p.B.transpose() * P);
}

RiccatiSolution solve_dare(const DareProblem& p, const RiccatiOptions& opts) {
    validate(p);
    const std::size_t n = p.A.rows();
    RiccatiSolution out;
    out.P = Matrix(n, n);

    // Exact solution whenever the state is costless.
    if (p.Q.max_abs() == 0.0) {
        out.report.converged = true;
        out.report.residual = 0.0;
        if (opts.diagnostics)
            out.report.closed_loop_spectrum = spectral_radius(p.A).value;
        return out;
    }

    Matrix Ak = p.A;
    Matrix Gk = control_weight(p.B, p.R);
    Matrix Hk = p.Q;
    Hk.symmetrize();

    const Matrix eye = Matrix::identity(n);
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const LUFactorization w(eye + Gk * Hk);
        if (w.singular()) {
            out.P = Hk;
            out.report.iterations = it;
            out.report.status = RiccatiStatus::singular_iterate;
            out.report.detail = "doubling iterate I + G*H singular";
            out.report.residual = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
        const Matrix WA = w.solve(Ak);             // (I + GH)^{-1} A
        const Matrix WG = w.solve(Gk);             // (I + GH)^{-1} G
        Matrix Hnext = Hk + Ak.transpose() * (Hk * WA);
        Hnext.symmetrize();
        Matrix Gnext = Gk + Ak * (WG * Ak.transpose());
        Gnext.symmetrize();
        const Matrix Anext = Ak * WA;

        const double step = (Hnext - Hk).norm_inf();
        Ak = Anext;
        Gk = Gnext;
        Hk = Hnext;
        if (!Hk.all_finite()) {
            out.P = Hk;
            out.report.iterations = it + 1;
            out.report.status = RiccatiStatus::no_convergence;
            out.report.detail = "doubling iteration diverged";
            out.report.residual = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
        if (step <= 1e-14 * std::max(1.0, Hk.norm_inf())) {
            ++it;
            break;
        }
    }

    out.P = Hk;
    out.report.iterations = it;
    out.report.residual = dare_residual(out.P, p);
    out.report.converged = out.report.residual <= opts.tol * (1.0 + out.P.norm_inf());
    if (!out.report.converged) {
        out.report.status = RiccatiStatus::no_convergence;
        out.report.detail = "doubling iteration did not meet the residual target";
    }
    if (opts.diagnostics) {
        const Matrix K = feedback_gain(out.P, p);
        out.report.closed_loop_spectrum = spectral_radius(p.A - p.B * K).value;
    }
    return out;
}

LyapunovResult solve_lyapunov_continuous(const Matrix& A, const Matrix& Q, double tol,
                                         int max_iter) {
    if (!A.square() || !Q.square() || A.rows() != Q.rows())
        throw std::invalid_argument("solve_lyapunov_continuous: shape mismatch");
    const std::size_t n = A.rows();
    LyapunovResult out;
    Matrix Ak = A;
    Matrix Qk = Q;
    for (int it = 0; it < max_iter; ++it) {
        const LUFactorization lu(Ak);
        if (lu.singular()) {
            out.X = 0.5 * Qk;
            out.iterations = it;
            return out; // converged stays false
        }
        const double c = std::exp(-lu.log_abs_det() / static_cast<double>(n));
        const Matrix Ainv = lu.inverse();
        Matrix Anext = 0.5 * (c * Ak + (1.0 / c) * Ainv);
        Matrix Qnext = 0.5 * (c * Qk + (1.0 / c) * (Ainv.transpose() * (Qk * Ainv)));
        Qnext.symmetrize();
        const double step = (Anext - Ak).norm_inf();
        Ak = std::move(Anext);
        Qk = std::move(Qnext);
        out.iterations = it + 1;
        if (!Ak.all_finite() || !Qk.all_finite()) {
            out.X = 0.5 * Qk;
            return out;
        }
        if (step <= tol * std::max(1.0, Ak.norm_inf())) break;
    }
    // sign(A) must be -I for a Hurwitz A; anything else means failure.
    Matrix gap = Ak + Matrix::identity(n);
    out.converged = gap.norm_inf() <= 1e-6;
    out.X = 0.5 * Qk;
    out.X.symmetrize();
    return out;
}

bool is_hurwitz(const Matrix& m) {
    // Reuse the Lyapunov machinery with Q = 0; only the sign limit matters.
    return solve_lyapunov_continuous(m, Matrix(m.rows(), m.rows()), 1e-13, 120).converged;
}

namespace {

struct SignPhaseResult {
    Matrix P;
    int iterations = 0;
    bool ok = false;
    RiccatiStatus status = RiccatiStatus::ok;
    std::string detail;
};

/// Sign iteration on the Hamiltonian [[A, -G], [-Q, -A']] followed by the
/// least-squares read-off of P.
SignPhaseResult care_sign_phase(const Matrix& A, const Matrix& G, const Matrix& Q,
                                const RiccatiOptions& opts) {
    const std::size_t n = A.rows();
    SignPhaseResult out;

    Matrix Z(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Z(i, j) = A(i, j);
            Z(i, n + j) = -G(i, j);
            Z(n + i, j) = -Q(i, j);
            Z(n + i, n + j) = -A(j, i);
        }

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const LUFactorization lu(Z);
        if (lu.singular()) {
            out.status = RiccatiStatus::singular_iterate;
            out.detail = "Hamiltonian sign iterate singular";
            out.iterations = it;
            return out;
        }
        const double c = std::exp(-lu.log_abs_det() / static_cast<double>(2 * n));
        const Matrix Znext = 0.5 * (c * Z + (1.0 / c) * lu.inverse());
        const double step = (Znext - Z).norm_inf();
        Z = Znext;
        if (!Z.all_finite()) {
            out.status = RiccatiStatus::no_convergence;
            out.detail = "sign iteration diverged";
            out.iterations = it + 1;
            return out;
        }
        if (step <= 1e-13 * std::max(1.0, Z.norm_inf())) {
            ++it;
            break;
        }
    }
    out.iterations = it;

    // Solve [Z12; Z22+I] P = -[Z11+I; Z21] in the least-squares sense.
    Matrix M(2 * n, n), N(2 * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            M(i, j) = Z(i, n + j);
            M(n + i, j) = Z(n + i, n + j) + (i == j ? 1.0 : 0.0);
            N(i, j) = -(Z(i, j) + (i == j ? 1.0 : 0.0));
            N(n + i, j) = -Z(n + i, j);
        }
    const Matrix Mt = M.transpose();
    Matrix MtM = Mt * M;
    MtM.symmetrize();
    const CholeskyFactorization chol(MtM);
    if (!chol.ok()) {
        out.status = RiccatiStatus::singular_iterate;
        out.detail = "normal equations of the sign read-off not positive definite";
        return out;
    }
    out.P = chol.solve(Mt * N);
    out.P.symmetrize();
    out.ok = true;
    return out;
}

} // namespace

RiccatiSolution solve_care(const CareProblem& p, const RiccatiOptions& opts,
                           const Matrix* warm_start) {
    validate(p);
    const std::size_t n = p.A.rows();
    RiccatiSolution out;
    out.P = Matrix(n, n);

    if (p.Q.max_abs() == 0.0) {
        out.report.converged = true;
        if (opts.diagnostics)
            out.report.closed_loop_spectrum = spectral_abscissa(p.A);
        return out;
    }

    const Matrix G = control_weight(p.B, p.R);
    Matrix rsym = p.R;
    rsym.symmetrize();
    const CholeskyFactorization rchol(rsym);

    int sign_iterations = 0;
    bool have_start = false;
    Matrix P;

    if (warm_start != nullptr && warm_start->rows() == n && warm_start->cols() == n) {
        P = *warm_start;
        P.symmetrize();
        have_start = true;
    }

    auto run_sign_phase = [&]() -> bool {
        SignPhaseResult sp = care_sign_phase(p.A, G, p.Q, opts);
        sign_iterations = sp.iterations;
        if (!sp.ok) {
            out.report.status = sp.status;
            out.report.detail = sp.detail;
            out.report.iterations = sp.iterations;
            out.report.residual = std::numeric_limits<double>::quiet_NaN();
            return false;
        }
        P = std::move(sp.P);
        return true;
    };

    if (!have_start) {
        if (!run_sign_phase()) return out;
    }

    // Newton-Kleinman refinement: quadratically contracting from any
    // stabilizing iterate, so a handful of Lyapunov solves suffice.
    bool tried_sign = !have_start;
    int newton_its = 0;
    double residual = care_residual(P, p);
    while (residual > opts.tol * (1.0 + P.norm_inf()) && newton_its < opts.newton_max_iter) {
        const Matrix K = rchol.solve(p.B.transpose() * P);
        const Matrix Acl = p.A - p.B * K;
        Matrix Qhat = p.Q + K.transpose() * (rsym * K);
        Qhat.symmetrize();
        const LyapunovResult lyap = solve_lyapunov_continuous(Acl, Qhat);
        if (!lyap.converged) {
            if (!tried_sign) {
                // Warm start was not stabilizing; start over from scratch.
                tried_sign = true;
                newton_its = 0;
                if (!run_sign_phase()) return out;
                residual = care_residual(P, p);
                continue;
            }
            out.P = P;
            out.report.status = RiccatiStatus::no_convergence;
            out.report.detail = "Newton refinement lost stability";
            out.report.iterations = sign_iterations + newton_its;
            out.report.residual = residual;
            return out;
        }
        P = lyap.X;
        P.symmetrize();
        ++newton_its;
        const double next = care_residual(P, p);
        if (!std::isfinite(next)) break;
        if (next >= residual && next > opts.tol * (1.0 + P.norm_inf())) {
            if (!tried_sign) {
                tried_sign = true;
                newton_its = 0;
                if (!run_sign_phase()) return out;
                residual = care_residual(P, p);
                continue;
            }
            residual = next;
            break; // stagnation at the round-off floor
        }
        residual = next;
    }

    out.P = std::move(P);
    out.report.iterations = sign_iterations + newton_its;
    out.report.residual = residual;
    out.report.converged = residual <= opts.tol * (1.0 + out.P.norm_inf());
    if (!out.report.converged) {
        out.report.status = RiccatiStatus::no_convergence;
        out.report.detail = "residual target not met";
    }
    if (opts.diagnostics) {
        const Matrix K = feedback_gain(out.P, p);
        out.report.closed_loop_spectrum = spectral_abscissa(p.A - p.B * K);
    }
    return out;
}

namespace {

/// min over t of ||M^{2^t}||^{1/2^t}, with renormalization at every squaring.
double norm_squaring_bound(const Matrix& m, int max_squarings = 14) {
    double log_scale = 0.0; // log ||M^{2^t}|| accumulated through rescaling
    Matrix pow = m;
    double best = m.norm_inf();
    double weight = 1.0;
    for (int t = 1; t <= max_squarings; ++t) {
        const double nrm = pow.norm_inf();
        if (nrm == 0.0) return 0.0;
        pow *= 1.0 / nrm;
        log_scale = 2.0 * (log_scale + std::log(nrm));
        pow = pow * pow;
        weight = std::ldexp(1.0, -t); // 2^{-t}
        const double est = std::exp(weight * (log_scale + std::log(std::max(pow.norm_inf(),
                                             std::numeric_limits<double>::min()))));
        if (std::isfinite(est)) best = std::min(best, est);
    }
    return best;
}

struct PowerResult {
    double value = 0.0;
    bool converged = false;
};

PowerResult power_iteration(const Matrix& m, double tol, int max_iter) {
    const std::size_t n = m.rows();
    SplitMix64 rng(0x5ee9a11du); // fixed start vector for reproducibility
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_symmetric(1.0);
    double nv = norm_inf(v);
    for (double& x : v) x /= nv;

    PowerResult out;
    double prev = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> w = matvec(m, v);
        const double nw = norm_inf(w);
        if (nw == 0.0) {
            out.value = 0.0;
            out.converged = true;
            return out;
        }
        for (double& x : w) x /= nw;
        // dominant real eigenvalue ⇒ w ≈ ±v
        double diff_plus = 0.0, diff_minus = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff_plus = std::max(diff_plus, std::abs(w[i] - v[i]));
            diff_minus = std::max(diff_minus, std::abs(w[i] + v[i]));
        }
        const bool aligned = std::min(diff_plus, diff_minus) <= 1e-8;
        if (std::abs(nw - prev) <= tol * std::max(1.0, nw) && aligned) {
            if (++stable >= 3) {
                out.value = nw;
                out.converged = true;
                return out;
            }
        } else {
            stable = 0;
        }
        prev = nw;
        v = std::move(w);
    }
    out.value = prev;
    return out;
}

} // namespace

SpectralEstimate spectral_radius(const Matrix& m, double tol) {
    if (!m.square()) throw std::invalid_argument("spectral_radius: matrix not square");
    SpectralEstimate out;
    if (m.max_abs() == 0.0) {
        out.converged = true;
        return out;
    }
    const int max_iter = 2000;
    const PowerResult direct = power_iteration(m, tol, max_iter);
    const double bound = norm_squaring_bound(m);
    if (direct.converged && direct.value >= bound * (1.0 - 1e-6)) {
        out.value = direct.value;
        out.converged = true;
        return out;
    }

    // A shift separates +rho/-rho ties in real spectra (e.g. diag(r, -r)).
    const double shift = 0.5 * m.norm_inf();
    Matrix shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) += shift;
    const PowerResult up = power_iteration(shifted, tol, max_iter);
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= 2.0 * shift;
    const PowerResult down = power_iteration(shifted, tol, max_iter);
    if (up.converged && down.converged) {
        // |lambda_max + s| = up, |lambda_min - s| = down for real extremes.
        const double candidate = std::max(up.value - shift, down.value - shift);
        if (candidate >= 0.0 && candidate >= bound * (1.0 - 1e-6) && candidate <= bound * (1.0 + 1e-6)) {
            out.value = candidate;
            out.converged = true;
            out.method = SpectralMethod::shifted_power;
            return out;
        }
    }

    // Complex dominant pair (or defective case): fall back to the certified
    // norm bound, flagged as such.
    out.value = bound;
    out.converged = false;
    out.method = SpectralMethod::norm_bound;
    return out;
}

double spectral_abscissa(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("spectral_abscissa: matrix not square");
    const std::size_t n = m.rows();
    const double t = 1.0 / std::max(1.0, m.norm_inf());
    // exp(tM) by plain Taylor: ||tM|| <= 1 keeps 22 terms at round-off level.
    Matrix scaled = m;
    scaled *= t;
    Matrix e = Matrix::identity(n);
    for (int k = 22; k >= 1; --k) {
        e = scaled * e;
        e *= 1.0 / static_cast<double>(k);
        e += Matrix::identity(n);
    }
    const double rho = spectral_radius(e).value;
    if (rho <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(rho) / t;
}

} // namespace sepval
