#include "sunit/lattice.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "sunit/errors.hpp"

namespace sunit {

namespace {

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

mpz_class dot_cols(const IntMatrix& m, std::size_t a, std::size_t b) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, a) * m(i, b);
    return s;
}

// Nearest integer to a / b for b > 0, ties rounded up.
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_class num = 2 * a + b;
    mpz_class den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

double to_d(const Real& x) { return x.to_double(); }
double to_d(double x) { return x; }
double t_sqrt(double x) { return std::sqrt(x); }
Real t_sqrt(const Real& x) { return sqrt(x); }
double t_floor(double x) { return std::floor(x); }
Real t_floor(const Real& x) { return floor(x); }
double t_ceil(double x) { return std::ceil(x); }
Real t_ceil(const Real& x) { return ceil(x); }
template <class T>
T from_real(const Real& x);
template <>
double from_real<double>(const Real& x) {
    return x.to_double();
}
template <>
Real from_real<Real>(const Real& x) {
    return x;
}

template <class T>
std::vector<LatticePoint<T>> enumerate_impl(const RealMatrix& input, const T& radius,
                                            const std::optional<std::vector<Real>>& target,
                                            const EnumerationOptions& opts, const T& slack) {
    const std::size_t m = input.rows(), k = input.cols();
    require(radius > T(0), "enumeration radius must be positive");
    if (target) require(target->size() == m, "target has the wrong dimension");

    RealMatrix basis = input;
    IntMatrix U = IntMatrix::identity(k);
    if (opts.reduce_first && k > 1) {
        RealLllResult red = lll_reduce(input, opts.scale_bits);
        basis = red.basis;
        U = red.transform;
    }

    // Cholesky of the Gram matrix in working precision, then cast.
    RealMatrix G = basis.transpose() * basis;
    RealMatrix Rr(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        Real d = G(i, i);
        for (std::size_t t = 0; t < i; ++t) d -= Rr(t, i) * Rr(t, i);
        require(d > Real(0), "enumeration basis is not independent");
        Rr(i, i) = sqrt(d);
        for (std::size_t j = i + 1; j < k; ++j) {
            Real v = G(i, j);
            for (std::size_t t = 0; t < i; ++t) v -= Rr(t, i) * Rr(t, j);
            Rr(i, j) = v / Rr(i, i);
        }
    }
    std::vector<Real> zr(k, Real(0));
    Real perp_sq(0);
    if (target) {
        // z = R^{-T} B^T y; ||y_perp||^2 = ||y||^2 - ||z||^2.
        std::vector<Real> bty(k, Real(0));
        Real ysq(0);
        for (std::size_t i = 0; i < m; ++i) ysq += (*target)[i] * (*target)[i];
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < m; ++i) bty[j] += basis(i, j) * (*target)[i];
        for (std::size_t i = 0; i < k; ++i) {
            Real v = bty[i];
            for (std::size_t t = 0; t < i; ++t) v -= Rr(t, i) * zr[t];
            zr[i] = v / Rr(i, i);
        }
        perp_sq = ysq;
        for (const auto& v : zr) perp_sq -= v * v;
        if (perp_sq < Real(0)) perp_sq = Real(0);
    }

    Matrix<T> R(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) R(i, j) = from_real<T>(Rr(i, j));
    std::vector<T> z;
    for (const auto& v : zr) z.push_back(from_real<T>(v));
    const T r_sq = radius * radius;
    const T budget = r_sq * slack - from_real<T>(perp_sq);

    std::vector<std::vector<long long>> found;
    if (budget >= T(0)) {
        std::vector<long long> x(k, 0);
        std::function<void(std::size_t, const T&)> rec = [&](std::size_t level, const T& rem) {
            const std::size_t i = level - 1;
            T c = z[i];
            for (std::size_t j = i + 1; j < k; ++j) c -= R(i, j) * T(static_cast<double>(x[j]));
            c /= R(i, i);
            T w = t_sqrt(rem) / R(i, i);
            const long long lo = static_cast<long long>(to_d(t_ceil(c - w)));
            const long long hi = static_cast<long long>(to_d(t_floor(c + w)));
            for (long long v = lo; v <= hi; ++v) {
                x[i] = v;
                T d = (T(static_cast<double>(v)) - c) * R(i, i);
                T next = rem - d * d;
                if (next < T(0)) continue;
                if (i == 0) {
                    found.push_back(x);
                    if (found.size() > opts.max_points) throw BudgetExceeded("lattice enumeration exceeded its point cap");
                } else {
                    rec(level - 1, next);
                }
            }
            x[i] = 0;
        };
        rec(k, budget);
    }

    std::vector<LatticePoint<T>> out;
    for (const auto& xr : found) {
        LatticePoint<T> pt;
        pt.coeffs.assign(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (xr[j] != 0) pt.coeffs[i] += U(i, j).get_si() * xr[j];
        pt.norm_sq = T(0);
        for (std::size_t r = 0; r < m; ++r) {
            Real v(0);
            for (std::size_t j = 0; j < k; ++j)
                if (pt.coeffs[j] != 0) v += input(r, j) * Real(pt.coeffs[j]);
            if (target) v -= (*target)[r];
            T tv = from_real<T>(v);
            pt.norm_sq += tv * tv;
            pt.vector.push_back(tv);
        }
        if (pt.norm_sq <= r_sq * slack) out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace

LllResult lll_reduce(const IntMatrix& input, const mpq_class& delta) {
    require(delta > mpq_class(1, 4) && delta < 1, "LLL delta must lie in (1/4, 1)");
    const std::size_t n = input.cols();
    LllResult res{input, IntMatrix::identity(n)};
    if (n == 0) return res;
    IntMatrix& b = res.basis;
    IntMatrix& H = res.transform;
    const mpz_class da = delta.get_num(), db = delta.get_den();

    // 1-based indices as in the classical integral formulation.
    std::vector<mpz_class> d(n + 1, 0);
    std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1, 0));
    auto col = [](std::size_t i) { return i - 1; };

    d[0] = 1;
    d[1] = dot_cols(b, 0, 0);
    require(d[1] != 0, "LLL basis has a zero vector");

    auto red = [&](std::size_t k, std::size_t l) {
        if (2 * abs(lam[k][l]) <= d[l]) return;
        mpz_class q = round_div(lam[k][l], d[l]);
        for (std::size_t r = 0; r < b.rows(); ++r) b(r, col(k)) -= q * b(r, col(l));
        for (std::size_t r = 0; r < n; ++r) H(r, col(k)) -= q * H(r, col(l));
        lam[k][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    std::size_t k = 2, kmax = 1;
    auto swap_k = [&](std::size_t kk) {
        swap_cols(b, col(kk), col(kk - 1));
        swap_cols(H, col(kk), col(kk - 1));
        for (std::size_t j = 1; j + 1 < kk; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
        mpz_class l = lam[kk][kk - 1];
        mpz_class B = (d[kk - 2] * d[kk] + l * l) / d[kk - 1];
        for (std::size_t i = kk + 1; i <= kmax; ++i) {
            mpz_class t = lam[i][kk];
            lam[i][kk] = (d[kk] * lam[i][kk - 1] - l * t) / d[kk - 1];
            lam[i][kk - 1] = (B * t + l * lam[i][kk]) / d[kk];
        }
        d[kk - 1] = B;
    };

    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                mpz_class u = dot_cols(b, col(k), col(j));
                for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
                if (j < k)
                    lam[k][j] = u;
                else
                    d[k] = u;
            }
            require(d[k] != 0, "LLL basis vectors are linearly dependent");
        }
        red(k, k - 1);
        if (db * d[k] * d[k - 2] < da * d[k - 1] * d[k - 1] - db * lam[k][k - 1] * lam[k][k - 1]) {
            swap_k(k);
            if (k > 2) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 1;) red(k, l);
            ++k;
        }
    }
    return res;
}

RealLllResult lll_reduce(const RealMatrix& basis, long scale_bits, const mpq_class& delta) {
    IntMatrix proxy(basis.rows(), basis.cols());
    for (std::size_t i = 0; i < basis.rows(); ++i)
        for (std::size_t j = 0; j < basis.cols(); ++j) proxy(i, j) = ldexp(basis(i, j), scale_bits).round_z();
    LllResult r = lll_reduce(proxy, delta);
    return {basis * to_real(r.transform), r.transform};
}

GramSchmidt gram_schmidt(const IntMatrix& basis) {
    const std::size_t m = basis.rows(), k = basis.cols();
    GramSchmidt gs;
    gs.mu = RatMatrix(k, k);
    gs.bstar = RatMatrix(m, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t r = 0; r < m; ++r) gs.bstar(r, i) = basis(r, i);
        for (std::size_t j = 0; j < i; ++j) {
            mpq_class dot = 0;
            for (std::size_t r = 0; r < m; ++r) dot += mpq_class(basis(r, i)) * gs.bstar(r, j);
            gs.mu(i, j) = dot / gs.bstar_sq[j];
            for (std::size_t r = 0; r < m; ++r) gs.bstar(r, i) -= gs.mu(i, j) * gs.bstar(r, j);
        }
        mpq_class sq = 0;
        for (std::size_t r = 0; r < m; ++r) sq += gs.bstar(r, i) * gs.bstar(r, i);
        require(sq != 0, "basis vectors are linearly dependent");
        gs.bstar_sq.push_back(sq);
        gs.mu(i, i) = 1;
    }
    return gs;
}

bool is_lll_reduced(const IntMatrix& basis, const mpq_class& delta) {
    GramSchmidt gs = gram_schmidt(basis);
    const std::size_t k = basis.cols();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(gs.mu(i, j)) > mpq_class(1, 2)) return false;
    for (std::size_t i = 1; i < k; ++i) {
        mpq_class mu = gs.mu(i, i - 1);
        if (gs.bstar_sq[i] < (delta - mu * mu) * gs.bstar_sq[i - 1]) return false;
    }
    return true;
}

Real lattice_lower_bound(const IntMatrix& reduced, const std::optional<std::vector<mpq_class>>& target) {
    const std::size_t m = reduced.rows(), k = reduced.cols();
    require(k >= 1, "empty lattice basis");
    GramSchmidt gs = gram_schmidt(reduced);
    // Round square roots down by a relative margin so the bound stays certified.
    const Real shrink = Real(1) - two_pow(-(working_precision() - 8));
    auto sqrt_down = [&](const mpq_class& q) { return sqrt(Real(q)) * shrink; };

    if (!target) {
        mpq_class best = gs.bstar_sq[0];
        for (const auto& v : gs.bstar_sq) best = std::min(best, v);
        return sqrt_down(best);
    }
    require(target->size() == m, "target has the wrong dimension");
    const auto& y = *target;
    // Coordinates of y along b*_i, then back-substitute for the basis coordinates sigma.
    std::vector<mpq_class> tau(k);
    mpq_class span_sq = 0;
    for (std::size_t i = 0; i < k; ++i) {
        mpq_class dot = 0;
        for (std::size_t r = 0; r < m; ++r) dot += y[r] * gs.bstar(r, i);
        tau[i] = dot / gs.bstar_sq[i];
        span_sq += tau[i] * dot;
    }
    mpq_class ysq = 0;
    for (const auto& v : y) ysq += v * v;
    mpq_class perp_sq = ysq - span_sq;

    std::vector<mpq_class> sigma(k);
    for (std::size_t i = k; i-- > 0;) {
        sigma[i] = tau[i];
        for (std::size_t j = i + 1; j < k; ++j) sigma[i] -= gs.mu(j, i) * sigma[j];
    }
    std::size_t i0 = k;
    for (std::size_t i = k; i-- > 0;)
        if (sigma[i].get_den() != 1) {
            i0 = i;
            break;
        }
    mpq_class along = 0;
    if (i0 < k) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), sigma[i0].get_num_mpz_t(), sigma[i0].get_den_mpz_t());
        mpq_class frac = sigma[i0] - mpq_class(fl);
        mpq_class dist = std::min<mpq_class>(frac, mpq_class(1 - frac));
        mpq_class mn = gs.bstar_sq[i0];
        for (std::size_t i = i0; i < k; ++i) mn = std::min(mn, gs.bstar_sq[i]);
        along = dist * dist * mn;
    }
    return sqrt_down(perp_sq + along);
}

std::vector<LatticePoint<Real>> fincke_pohst_enumerate(const RealMatrix& basis, const Real& radius,
                                                       const std::optional<std::vector<Real>>& target,
                                                       const EnumerationOptions& opts) {
    const Real slack = Real(1) + two_pow(-working_precision() / 2);
    return enumerate_impl<Real>(basis, radius, target, opts, slack);
}

std::vector<LatticePoint<double>> fincke_pohst_enumerate_fast(const RealMatrix& basis, double radius,
                                                              const EnumerationOptions& opts) {
    return enumerate_impl<double>(basis, radius, std::nullopt, opts, 1.0 + 1e-9);
}

}  // namespace sunit
