#include "sunit/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace sunit {

void trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const QPoly& a) {
    QPoly t = a;
    trim(t);
    return static_cast<int>(t.size()) - 1;
}

QPoly to_qpoly(const std::vector<mpz_class>& a) {
    QPoly q(a.begin(), a.end());
    trim(q);
    return q;
}

QPoly derivative(const QPoly& a) {
    QPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
    trim(d);
    return d;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    QPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    trim(c);
    return c;
}

QPoly operator-(const QPoly& a, const QPoly& b) {
    QPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    trim(c);
    return c;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    trim(c);
    return c;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    QPoly bb = b;
    trim(bb);
    if (bb.empty()) throw std::domain_error("polynomial division by zero");
    r = a;
    trim(r);
    q.clear();
    if (r.size() < bb.size()) return;
    q.assign(r.size() - bb.size() + 1, 0);
    const mpq_class& lead = bb.back();
    while (r.size() >= bb.size()) {
        std::size_t shift = r.size() - bb.size();
        mpq_class c = r.back() / lead;
        q[shift] = c;
        for (std::size_t i = 0; i < bb.size(); ++i) r[i + shift] -= c * bb[i];
        r.pop_back();
        trim(r);
    }
    trim(q);
}

QPoly mod(const QPoly& a, const QPoly& b) {
    QPoly q, r;
    divmod(a, b, q, r);
    return r;
}

QPoly gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        mpq_class lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

QPoly inverse_mod(const QPoly& a, const QPoly& m) {
    // Extended Euclid tracking only the coefficient of a.
    QPoly r0 = m, r1 = mod(a, m);
    QPoly t0, t1{mpq_class(1)};
    trim(r0);
    while (!r1.empty()) {
        QPoly q, r;
        divmod(r0, r1, q, r);
        QPoly t = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        t0 = std::move(t1);
        t1 = std::move(t);
    }
    if (r0.size() != 1) throw std::domain_error("element is not invertible");
    for (auto& c : t0) c /= r0[0];
    return mod(t0, m);
}

mpq_class resultant(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    if (a.empty() || b.empty()) return 0;
    mpq_class res = 1;
    while (true) {
        int m = static_cast<int>(a.size()) - 1;
        int n = static_cast<int>(b.size()) - 1;
        if (n == 0) {
            mpq_class p = 1;
            for (int i = 0; i < m; ++i) p *= b[0];
            return res * p;
        }
        QPoly r = mod(a, b);
        if (r.empty()) return 0;
        int dr = static_cast<int>(r.size()) - 1;
        if ((m % 2 == 1) && (n % 2 == 1)) res = -res;
        for (int i = 0; i < m - dr; ++i) res *= b.back();
        a = std::move(b);
        b = std::move(r);
    }
}

int count_real_roots(const QPoly& a) {
    std::vector<QPoly> seq{a, derivative(a)};
    trim(seq[0]);
    if (seq[0].size() < 2) return 0;
    while (!seq.back().empty()) {
        QPoly r = mod(seq[seq.size() - 2], seq.back());
        for (auto& c : r) c = -c;
        seq.push_back(std::move(r));
    }
    seq.pop_back();
    auto changes = [&](bool at_plus) {
        int count = 0, prev = 0;
        for (const auto& p : seq) {
            int sg = sgn(p.back());
            if (!at_plus && (p.size() - 1) % 2 == 1) sg = -sg;
            if (sg != 0 && prev != 0 && sg != prev) ++count;
            if (sg != 0) prev = sg;
        }
        return count;
    };
    return changes(false) - changes(true);
}

Complex evaluate(const QPoly& a, const Complex& z) {
    Complex acc;
    for (std::size_t i = a.size(); i-- > 0;) {
        acc *= z;
        acc.re += Real(a[i]);
    }
    return acc;
}

Real evaluate(const QPoly& a, const Real& x) {
    Real acc(0);
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * x + Real(a[i]);
    return acc;
}

Real abs_evaluate(const QPoly& a, const Real& r) {
    Real acc(0);
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * r + abs(Real(a[i]));
    return acc;
}

}  // namespace sunit
