#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "sunit/lattice.hpp"

using namespace sunit;

namespace {

IntMatrix random_basis(std::mt19937_64& rng, std::size_t k, int span = 6) {
    std::uniform_int_distribution<int> d(-span, span);
    while (true) {
        IntMatrix B(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) B(i, j) = d(rng);
        if (determinant(B) != 0) return B;
    }
}

// Oracle: textbook Gram-Schmidt over Q, written independently of the library.
struct Gs {
    std::vector<std::vector<mpq_class>> bstar;
    std::vector<mpq_class> norm_sq;
    std::vector<std::vector<mpq_class>> mu;
};

Gs oracle_gs(const IntMatrix& B) {
    const std::size_t m = B.rows(), k = B.cols();
    Gs g;
    g.mu.assign(k, std::vector<mpq_class>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<mpq_class> v(m);
        for (std::size_t r = 0; r < m; ++r) v[r] = B(r, i);
        for (std::size_t j = 0; j < i; ++j) {
            mpq_class dot = 0;
            for (std::size_t r = 0; r < m; ++r) dot += mpq_class(B(r, i)) * g.bstar[j][r];
            g.mu[i][j] = dot / g.norm_sq[j];
            for (std::size_t r = 0; r < m; ++r) v[r] -= g.mu[i][j] * g.bstar[j][r];
        }
        mpq_class n = 0;
        for (const auto& x : v) n += x * x;
        g.bstar.push_back(v);
        g.norm_sq.push_back(n);
    }
    return g;
}

RealMatrix to_real_basis(const IntMatrix& B) { return to_real(B); }

// Oracle: every coefficient vector with ||B x - y||^2 <= r_sq, by scanning a provable box.
std::set<std::vector<long long>> brute_force(const IntMatrix& B, const std::vector<double>& y, double r_sq) {
    const std::size_t k = B.cols();
    RatMatrix inv = inverse(to_rat(B));
    // x = B^{-1}(v + y) with ||v|| <= r, so |x_i| <= ||row_i|| r + |(B^{-1} y)_i|.
    std::vector<long long> lo(k), hi(k);
    for (std::size_t i = 0; i < k; ++i) {
        double rn = 0, c = 0;
        for (std::size_t j = 0; j < k; ++j) {
            double e = inv(i, j).get_d();
            rn += e * e;
            c += e * y[j];
        }
        double w = std::sqrt(rn) * std::sqrt(r_sq) + 1e-9;
        lo[i] = static_cast<long long>(std::ceil(c - w));
        hi[i] = static_cast<long long>(std::floor(c + w));
    }
    std::set<std::vector<long long>> out;
    std::vector<long long> x(lo);
    while (true) {
        double n = 0;
        for (std::size_t r = 0; r < k; ++r) {
            double v = -y[r];
            for (std::size_t j = 0; j < k; ++j) v += B(r, j).get_d() * static_cast<double>(x[j]);
            n += v * v;
        }
        if (n <= r_sq) out.insert(x);
        std::size_t t = 0;
        while (t < k && x[t] == hi[t]) {
            x[t] = lo[t];
            ++t;
        }
        if (t == k) break;
        ++x[t];
    }
    return out;
}

// Number of candidates the brute-force oracle would scan around the origin.
double box_volume(const IntMatrix& B, double r_sq) {
    RatMatrix inv = inverse(to_rat(B));
    double vol = 1;
    for (std::size_t i = 0; i < B.cols(); ++i) {
        double rn = 0;
        for (std::size_t j = 0; j < B.cols(); ++j) rn += inv(i, j).get_d() * inv(i, j).get_d();
        vol *= 2 * std::sqrt(rn) * std::sqrt(r_sq) + 2;
    }
    return vol;
}

double shortest_sq(const IntMatrix& B) {
    // Column norms bound lambda_1 from above; scan below that radius.
    double r_sq = 1e300;
    for (std::size_t j = 0; j < B.cols(); ++j) {
        double n = 0;
        for (std::size_t r = 0; r < B.rows(); ++r) n += B(r, j).get_d() * B(r, j).get_d();
        r_sq = std::min(r_sq, n);
    }
    double best = r_sq;
    for (const auto& x : brute_force(B, std::vector<double>(B.rows(), 0.0), r_sq + 0.5)) {
        double n = 0;
        bool zero = true;
        for (std::size_t r = 0; r < B.rows(); ++r) {
            double v = 0;
            for (std::size_t j = 0; j < B.cols(); ++j) v += B(r, j).get_d() * static_cast<double>(x[j]);
            n += v * v;
        }
        for (auto c : x) zero = zero && c == 0;
        if (!zero) best = std::min(best, n);
    }
    return best;
}

}  // namespace

TEST_CASE("LLL on a textbook basis") {
    IntMatrix B(3, 3);
    long vals[3][3] = {{1, -1, 3}, {1, 0, 5}, {1, 2, 6}};  // columns (1,1,1), (-1,0,2), (3,5,6)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) B(i, j) = vals[i][j];
    LllResult res = lll_reduce(B);
    CHECK(is_lll_reduced(res.basis));
    CHECK(res.basis == B * res.transform);
    mpz_class d = determinant(res.transform);
    CHECK((d == 1 || d == -1));
    // Known reduced basis: (0,1,0), (1,0,1), (-1,0,2).
    mpz_class n0 = 0;
    for (int r = 0; r < 3; ++r) n0 += res.basis(r, 0) * res.basis(r, 0);
    CHECK(n0 == 1);
}

TEST_CASE("property: LLL satisfies Lovasz and size reduction and preserves the lattice") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t k = 2 + trial % 5;
        IntMatrix B = random_basis(rng, k, trial % 2 ? 6 : 40);
        LllResult res = lll_reduce(B);
        CHECK(res.basis == B * res.transform);
        mpz_class d = determinant(res.transform);
        CHECK((d == 1 || d == -1));
        Gs g = oracle_gs(res.basis);
        for (std::size_t i = 1; i < k; ++i) {
            for (std::size_t j = 0; j < i; ++j) CHECK(abs(g.mu[i][j]) <= mpq_class(1, 2));
            mpq_class m = g.mu[i][i - 1];
            CHECK(g.norm_sq[i] >= (mpq_class(3, 4) - m * m) * g.norm_sq[i - 1]);
        }
        CHECK(is_lll_reduced(res.basis));
    }
}

TEST_CASE("property: first reduced vector is within 2^((k-1)/2) of the shortest") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t k = 2 + trial % 5;
        IntMatrix B = random_basis(rng, k, 8);
        LllResult res = lll_reduce(B);
        double b1 = 0;
        for (std::size_t r = 0; r < k; ++r) b1 += res.basis(r, 0).get_d() * res.basis(r, 0).get_d();
        double lambda = shortest_sq(res.basis);
        CHECK(b1 <= std::pow(2.0, static_cast<double>(k - 1)) * lambda + 1e-9);
    }
}

TEST_CASE("library Gram-Schmidt agrees with the oracle") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        IntMatrix B = random_basis(rng, 2 + trial % 4);
        GramSchmidt gs = gram_schmidt(B);
        Gs g = oracle_gs(B);
        for (std::size_t i = 0; i < B.cols(); ++i) {
            CHECK(gs.bstar_sq[i] == g.norm_sq[i]);
            for (std::size_t j = 0; j < i; ++j) CHECK(gs.mu(i, j) == g.mu[i][j]);
        }
    }
}

TEST_CASE("property: homogeneous lower bound never exceeds the minimum") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = 2 + trial % 4;
        IntMatrix B = lll_reduce(random_basis(rng, k, 7)).basis;
        double lb = lattice_lower_bound(B).to_double();
        CHECK(lb > 0);
        CHECK(lb * lb <= shortest_sq(B) + 1e-9);
    }
}

TEST_CASE("property: inhomogeneous lower bound never exceeds the true distance") {
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<int> num(-60, 60), den(1, 7);
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t k = 2 + trial % 4;
        IntMatrix B = lll_reduce(random_basis(rng, k, 6)).basis;
        std::vector<mpq_class> y;
        std::vector<double> yd;
        for (std::size_t i = 0; i < k; ++i) {
            mpq_class q(num(rng), den(rng));
            q.canonicalize();
            y.push_back(q);
            yd.push_back(q.get_d());
        }
        double lb = lattice_lower_bound(B, y).to_double();
        // True distance by brute force within a radius that surely contains the closest point.
        double r_sq = 0;
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < k; ++r) r_sq += B(r, j).get_d() * B(r, j).get_d();
        auto pts = brute_force(B, yd, r_sq);
        double best = 1e300;
        for (const auto& x : pts) {
            double n = 0;
            for (std::size_t r = 0; r < k; ++r) {
                double v = -yd[r];
                for (std::size_t j = 0; j < k; ++j) v += B(r, j).get_d() * static_cast<double>(x[j]);
                n += v * v;
            }
            best = std::min(best, n);
        }
        REQUIRE(best < 1e300);
        CHECK(lb * lb <= best + 1e-9);
        // Targets outside the lattice get a strictly positive bound.
        RatMatrix inv = inverse(to_rat(B));
        bool in_lattice = true;
        for (std::size_t i = 0; i < k; ++i) {
            mpq_class c = 0;
            for (std::size_t j = 0; j < k; ++j) c += inv(i, j) * y[j];
            in_lattice = in_lattice && c.get_den() == 1;
        }
        if (!in_lattice) CHECK(lb > 0);
    }
}

TEST_CASE("property: Fincke-Pohst matches brute force") {
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> frac(0.3, 2.5);
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t k = 1 + trial % 5;
        IntMatrix B;
        double r_sq = 0;
        do {
            B = random_basis(rng, k, 5);
            double base = 1e300;
            for (std::size_t j = 0; j < k; ++j) {
                double n = 0;
                for (std::size_t r = 0; r < k; ++r) n += B(r, j).get_d() * B(r, j).get_d();
                base = std::min(base, n);
            }
            // Integer lattices have integer squared norms; stay off the boundary.
            r_sq = std::floor(base * frac(rng)) + 0.5;
        } while (box_volume(B, r_sq) > 2e5);  // keep the oracle cheap
        auto expect = brute_force(B, std::vector<double>(k, 0.0), r_sq);

        auto exact = fincke_pohst_enumerate(to_real_basis(B), sqrt(Real(r_sq)));
        std::set<std::vector<long long>> got;
        for (const auto& p : exact) got.insert(p.coeffs);
        CHECK(got == expect);
        CHECK(got.size() == exact.size());

        auto fast = fincke_pohst_enumerate_fast(to_real_basis(B), std::sqrt(r_sq));
        std::set<std::vector<long long>> got_fast;
        for (const auto& p : fast) got_fast.insert(p.coeffs);
        CHECK(got_fast == expect);
    }
}

TEST_CASE("property: Fincke-Pohst with a target matches brute force") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> t(-8.0, 8.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = 1 + trial % 4;
        IntMatrix B = random_basis(rng, k, 5);
        std::vector<double> y;
        std::vector<Real> yr;
        for (std::size_t i = 0; i < k; ++i) {
            y.push_back(t(rng));
            yr.emplace_back(y.back());
        }
        double r_sq = 30.123;
        auto expect = brute_force(B, y, r_sq);
        auto pts = fincke_pohst_enumerate(to_real_basis(B), sqrt(Real(r_sq)), yr);
        std::set<std::vector<long long>> got;
        for (const auto& p : pts) got.insert(p.coeffs);
        CHECK(got == expect);
    }
}

TEST_CASE("rank-one enumeration lists the small multiples") {
    RealMatrix b(2, 1);
    b(0, 0) = Real(3);
    b(1, 0) = Real(4);  // length 5
    auto pts = fincke_pohst_enumerate(b, Real(10.5));
    std::set<long long> c;
    for (const auto& p : pts) c.insert(p.coeffs[0]);
    CHECK(c == std::set<long long>{-2, -1, 0, 1, 2});
}

TEST_CASE("enumeration respects its point cap") {
    RealMatrix I = to_real(IntMatrix::identity(4));
    EnumerationOptions o;
    o.max_points = 100;
    CHECK_THROWS_AS(fincke_pohst_enumerate(I, Real(10), std::nullopt, o), BudgetExceeded);
}

TEST_CASE("real-basis LLL returns a unimodular transform of the input") {
    std::mt19937_64 rng(48);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t k = 2 + trial % 4;
        RealMatrix B(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) B(i, j) = Real(d(rng));
        RealLllResult res = lll_reduce(B, 64);
        mpz_class det = determinant(res.transform);
        CHECK((det == 1 || det == -1));
        RealMatrix expect = B * to_real(res.transform);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) CHECK(abs(expect(i, j) - res.basis(i, j)) < ldexp(Real(1), -200));
    }
}

TEST_CASE("dependent columns are rejected") {
    IntMatrix B(2, 2);
    B(0, 0) = 1;
    B(1, 0) = 2;
    B(0, 1) = 2;
    B(1, 1) = 4;
    CHECK_THROWS_AS(lll_reduce(B), ValidationError);
}
