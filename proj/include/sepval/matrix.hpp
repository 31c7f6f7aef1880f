#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sepval {

/// Dense row-major matrix of doubles. Deliberately minimal: the library is
/// desk-scale (n up to a few hundred), so everything is plain loops with no
/// external linear-algebra dependency.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double c);

    Matrix transpose() const;

    /// Largest absolute row sum (the induced infinity norm).
    double norm_inf() const;
    /// Largest absolute entry.
    double max_abs() const;
    bool all_finite() const;

    /// Replace the matrix by (M + M^T)/2. After this, M == M^T exactly.
    void symmetrize();
    bool is_symmetric(double tol = 0.0) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double c, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);
std::vector<double> matvec_transposed(const Matrix& a, std::span<const double> x);
double quadratic_form(const Matrix& p, std::span<const double> x); // x^T P x

double norm_inf(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

/// LU factorization with partial pivoting. Factor once, then solve against
/// any number of right-hand sides.
class LUFactorization {
public:
    explicit LUFactorization(const Matrix& a);

    bool singular() const { return singular_; }
    /// log|det| and the sign of det, valid when not singular.
    double log_abs_det() const { return log_abs_det_; }
    int det_sign() const { return det_sign_; }

    std::vector<double> solve(std::span<const double> b) const;
    Matrix solve(const Matrix& b) const;
    Matrix inverse() const;

private:
    std::size_t n_ = 0;
    Matrix lu_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
    double log_abs_det_ = 0.0;
    int det_sign_ = 1;
};

/// Cholesky factorization of a symmetric positive definite matrix.
/// `ok()` doubles as the SPD test.
class CholeskyFactorization {
public:
    explicit CholeskyFactorization(const Matrix& a);

    bool ok() const { return ok_; }
    std::vector<double> solve(std::span<const double> b) const;
    Matrix solve(const Matrix& b) const;

private:
    std::size_t n_ = 0;
    Matrix l_;
    bool ok_ = false;
};

/// Plain-text matrix interchange format: first line "rows cols", then one
/// whitespace-separated row per line, 17 significant digits.
void write_matrix(std::ostream& os, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix(std::istream& is);
Matrix read_matrix_file(const std::string& path);

} // namespace sepval
