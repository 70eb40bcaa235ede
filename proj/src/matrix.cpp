#include "sunit/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace sunit {

namespace {

template <class T>
T abs_of(const T& x) {
    return x < T(0) ? T(-x) : x;
}

// Reduces [m | rhs] in place. Returns the determinant of m.
template <class T, bool Pivot>
T eliminate(Matrix<T>& m, Matrix<T>* rhs) {
    const std::size_t n = m.rows();
    require(m.cols() == n, "square matrix required");
    T det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        for (std::size_t r = c; r < n; ++r) {
            if (m(r, c) == T(0)) continue;
            if (!Pivot) {
                p = r;
                break;
            }
            if (p == n || abs_of(m(r, c)) > abs_of(m(p, c))) p = r;
        }
        if (p == n) return T(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            if (rhs)
                for (std::size_t j = 0; j < rhs->cols(); ++j) std::swap((*rhs)(p, j), (*rhs)(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m(r, c) == T(0)) continue;
            if (!rhs && r < c) continue;
            T f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
            if (rhs)
                for (std::size_t j = 0; j < rhs->cols(); ++j) (*rhs)(r, j) -= f * (*rhs)(c, j);
        }
    }
    if (rhs)
        for (std::size_t r = 0; r < n; ++r) {
            T inv = T(1) / m(r, r);
            for (std::size_t j = 0; j < rhs->cols(); ++j) (*rhs)(r, j) *= inv;
        }
    return det;
}

}  // namespace

RealMatrix inverse(const RealMatrix& m) {
    RealMatrix a = m;
    RealMatrix inv = RealMatrix::identity(m.rows());
    if (eliminate<Real, true>(a, &inv).is_zero()) throw std::domain_error("singular matrix");
    return inv;
}

Real determinant(const RealMatrix& m) {
    RealMatrix a = m;
    return eliminate<Real, true>(a, nullptr);
}

RatMatrix inverse(const RatMatrix& m) {
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identity(m.rows());
    if (eliminate<mpq_class, false>(a, &inv) == 0) throw std::domain_error("singular matrix");
    return inv;
}

mpq_class determinant(const RatMatrix& m) {
    RatMatrix a = m;
    return eliminate<mpq_class, false>(a, nullptr);
}

mpz_class determinant(const IntMatrix& m) {
    mpq_class d = determinant(to_rat(m));
    return d.get_num();
}

RealMatrix to_real(const IntMatrix& m) {
    RealMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Real(m(i, j));
    return r;
}

RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = mpq_class(m(i, j));
    return r;
}

IntMatrix to_int(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            require(m(i, j).get_den() == 1, "matrix entry is not integral");
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

mpz_class row_norm(const IntMatrix& m) {
    mpz_class best = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += abs(m(i, j));
        if (s > best) best = s;
    }
    return best;
}

Real row_norm(const RealMatrix& m) {
    Real best(0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Real s(0);
        for (std::size_t j = 0; j < m.cols(); ++j) s += abs(m(i, j));
        if (s > best) best = s;
    }
    return best;
}

}  // namespace sunit
