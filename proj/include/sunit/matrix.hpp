#pragma once

#include <cstddef>
#include <gmpxx.h>
#include <vector>

#include "sunit/errors.hpp"
#include "sunit/real.hpp"

namespace sunit {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> c;
        c.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
        return c;
    }
    void set_row(std::size_t i, const std::vector<T>& v) {
        require(v.size() == cols_, "row length mismatch");
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        require(a.cols_ == b.rows_, "matrix dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == T(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<Real>;
using IntMatrix = Matrix<mpz_class>;
using RatMatrix = Matrix<mpq_class>;

// Gaussian elimination with partial pivoting. Throws std::domain_error if singular.
RealMatrix inverse(const RealMatrix& m);
Real determinant(const RealMatrix& m);

// Exact over Q. Throws std::domain_error if singular.
RatMatrix inverse(const RatMatrix& m);
mpq_class determinant(const RatMatrix& m);
mpz_class determinant(const IntMatrix& m);

RealMatrix to_real(const IntMatrix& m);
RatMatrix to_rat(const IntMatrix& m);
// Requires every entry to be integral.
IntMatrix to_int(const RatMatrix& m);

// Max over rows of the l1 norm of the row.
mpz_class row_norm(const IntMatrix& m);
Real row_norm(const RealMatrix& m);

// Submatrix with one row removed.
template <class T>
Matrix<T> drop_row(const Matrix<T>& m, std::size_t r) {
    Matrix<T> out(m.rows() - 1, m.cols());
    for (std::size_t i = 0, o = 0; i < m.rows(); ++i) {
        if (i == r) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out(o, j) = m(i, j);
        ++o;
    }
    return out;
}

}  // namespace sunit
