#include "sepval/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sepval {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (!same_shape(o)) throw std::invalid_argument("Matrix::operator+=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (!same_shape(o)) throw std::invalid_argument("Matrix::operator-=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Matrix::symmetrize() {
    if (!square()) throw std::invalid_argument("Matrix::symmetrize: not square");
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j) {
            const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = v;
            (*this)(j, i) = v;
        }
}

bool Matrix::is_symmetric(double tol) const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double c, Matrix a) { return a *= c; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix::operator*: shape mismatch");
    Matrix c(a.rows(), b.cols());
    // i-k-j order keeps both b and c accesses contiguous.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.data() + i * c.cols();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.data() + k * b.cols();
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.data() + i * a.cols();
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_transposed(const Matrix& a, std::span<const double> x) {
    if (a.rows() != x.size()) throw std::invalid_argument("matvec_transposed: shape mismatch");
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.data() + i * a.cols();
        const double xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += ai[j] * xi;
    }
    return y;
}

double quadratic_form(const Matrix& p, std::span<const double> x) {
    if (!p.square() || p.rows() != x.size())
        throw std::invalid_argument("quadratic_form: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        const double* pi = p.data() + i * p.cols();
        double row = 0.0;
        for (std::size_t j = 0; j < p.cols(); ++j) row += pi[j] * x[j];
        s += x[i] * row;
    }
    return s;
}

double norm_inf(std::span<const double> x) {
    double best = 0.0;
    for (double v : x) best = std::max(best, std::abs(v));
    return best;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

LUFactorization::LUFactorization(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("LUFactorization: matrix not square");
    n_ = a.rows();
    lu_ = a;
    perm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;

    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            singular_ = true;
            return;
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(pivot, j));
            std::swap(perm_[k], perm_[pivot]);
            det_sign_ = -det_sign_;
        }
        const double d = lu_(k, k);
        log_abs_det_ += std::log(std::abs(d));
        if (d < 0.0) det_sign_ = -det_sign_;
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double m = lu_(i, k) / d;
            lu_(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

std::vector<double> LUFactorization::solve(std::span<const double> b) const {
    if (singular_) throw std::runtime_error("LUFactorization::solve: singular matrix");
    if (b.size() != n_) throw std::invalid_argument("LUFactorization::solve: shape mismatch");
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
        y[i] = s;
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n_; ++j) s -= lu_(ii, j) * y[j];
        y[ii] = s / lu_(ii, ii);
    }
    return y;
}

Matrix LUFactorization::solve(const Matrix& b) const {
    if (singular_) throw std::runtime_error("LUFactorization::solve: singular matrix");
    if (b.rows() != n_) throw std::invalid_argument("LUFactorization::solve: shape mismatch");
    Matrix x(n_, b.cols());
    std::vector<double> col(n_), sol;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n_; ++i) col[i] = b(i, j);
        sol = solve(col);
        for (std::size_t i = 0; i < n_; ++i) x(i, j) = sol[i];
    }
    return x;
}

Matrix LUFactorization::inverse() const { return solve(Matrix::identity(n_)); }

CholeskyFactorization::CholeskyFactorization(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("CholeskyFactorization: matrix not square");
    n_ = a.rows();
    l_ = Matrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return; // not positive definite
                l_(i, i) = std::sqrt(s);
            } else {
                l_(i, j) = s / l_(j, j);
            }
        }
    }
    ok_ = true;
}

std::vector<double> CholeskyFactorization::solve(std::span<const double> b) const {
    if (!ok_) throw std::runtime_error("CholeskyFactorization::solve: factorization failed");
    if (b.size() != n_) throw std::invalid_argument("CholeskyFactorization::solve: shape mismatch");
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= l_(i, j) * y[j];
        y[i] = s / l_(i, i);
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n_; ++j) s -= l_(j, ii) * y[j];
        y[ii] = s / l_(ii, ii);
    }
    return y;
}

Matrix CholeskyFactorization::solve(const Matrix& b) const {
    Matrix x(n_, b.cols());
    std::vector<double> col(n_), sol;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n_; ++i) col[i] = b(i, j);
        sol = solve(col);
        for (std::size_t i = 0; i < n_; ++i) x(i, j) = sol[i];
    }
    return x;
}

namespace {
std::string format_entry(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

void write_matrix(std::ostream& os, const Matrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_entry(m(i, j));
        }
        os << '\n';
    }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream os(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!os) throw std::runtime_error("write_matrix_file: cannot open " + path);
    write_matrix(os, m);
    if (!os) throw std::runtime_error("write_matrix_file: write failed for " + path);
}

Matrix read_matrix(std::istream& is) {
    std::size_t rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw std::runtime_error("read_matrix: bad header line");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (!(is >> m(i, j))) throw std::runtime_error("read_matrix: truncated data");
    return m;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_matrix_file: cannot open " + path);
    return read_matrix(is);
}

} // namespace sepval
