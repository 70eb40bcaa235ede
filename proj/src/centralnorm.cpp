#include "sunit/centralnorm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "sunit/errors.hpp"

namespace sunit {

Real center(const RealVec& x) {
    require(!x.empty(), "center of an empty vector");
    RealVec y = x;
    std::stable_sort(y.begin(), y.end());
    return y[(y.size() + 1) / 2 - 1];
}

Real central_norm(const RealVec& x) {
    if (x.empty()) return Real(0);
    Real c = center(x);
    Real sum(0);
    for (const auto& v : x) sum += abs(v - c);
    return sum;
}

RealVec centralize(const RealVec& x) {
    Real c = center(x);
    RealVec out;
    out.reserve(x.size());
    for (const auto& v : x) out.push_back(v - c);
    return out;
}

HullCoefficients hull_coefficients(const RealVec& x) {
    const std::size_t n = x.size();
    require(n >= 1, "hull coefficients of an empty vector");
    require(x.back().is_zero(), "last coordinate must be zero");
    Real yl = center(x);
    HullCoefficients h;
    h.plus.assign(n, Real(0));
    h.minus.assign(n, Real(0));
    h.plus[0] = max(yl, Real(0));
    h.minus[0] = max(-yl, Real(0));
    for (std::size_t i = 1; i < n; ++i) {
        Real d = x[i - 1] - yl;
        h.plus[i] = max(d, Real(0));
        h.minus[i] = max(-d, Real(0));
    }
    return h;
}

RealMatrix PseudoInverseFamily::realized() const {
    const std::size_t k = w_rows.size();
    const std::size_t s = k + 1;
    RealMatrix out(k, s);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < s; ++j) out(i, j) = w_rows[i][j] - u[i];
    return out;
}

PseudoInverseFamily pseudo_inverse_family(const RealMatrix& R) {
    const std::size_t s = R.rows();
    require(s >= 2 && R.cols() + 1 == s, "log matrix must be s x (s-1)");
    std::size_t best = s;
    Real best_det(0);
    for (std::size_t d = 0; d < s; ++d) {
        Real det = abs(determinant(drop_row(R, d)));
        if (det > best_det) {
            best_det = det;
            best = d;
        }
    }
    require(best < s, "log matrix has rank below s-1");

    PseudoInverseFamily fam;
    fam.deleted_row = best;
    fam.W = inverse(drop_row(R, best));
    const std::size_t k = s - 1;
    for (std::size_t i = 0; i < k; ++i) {
        RealVec w(s, Real(0));
        for (std::size_t j = 0, c = 0; j < s; ++j) {
            if (j == best) continue;
            w[j] = fam.W(i, c++);
        }
        fam.u.push_back(center(w));
        fam.w_rows.push_back(std::move(w));
    }
    return fam;
}

NormReport norm_of_rows(const std::vector<RealVec>& w_rows) {
    NormReport rep;
    rep.n_new = Real(0);
    for (std::size_t i = 0; i < w_rows.size(); ++i) {
        rep.centers.push_back(center(w_rows[i]));
        rep.per_row.push_back(central_norm(w_rows[i]));
        if (i == 0 || rep.per_row[i] > rep.n_new) {
            rep.n_new = rep.per_row[i];
            rep.argmax_row = i;
        }
    }
    return rep;
}

NormReport system_norm_new(const RealMatrix& R) {
    PseudoInverseFamily fam = pseudo_inverse_family(R);
    NormReport rep = norm_of_rows(fam.w_rows);
    rep.n_old = system_norm_old(R);
    return rep;
}

Real system_norm_old(const RealMatrix& R) {
    const std::size_t s = R.rows();
    require(s >= 2 && R.cols() + 1 == s, "log matrix must be s x (s-1)");
    bool found = false;
    Real best(0);
    for (std::size_t d = 0; d < s; ++d) {
        RealMatrix inv;
        try {
            inv = inverse(drop_row(R, d));
        } catch (const std::domain_error&) {
            continue;
        }
        Real v = row_norm(inv);
        if (!found || v < best) best = v;
        found = true;
    }
    require(found, "every (s-1) x (s-1) submatrix is singular");
    return best;
}

GeneralizedValuationSpec GeneralizedValuationSpec::make(std::vector<mpq_class> r) {
    require(!r.empty(), "empty valuation exponent vector");
    GeneralizedValuationSpec g;
    g.q = 1;
    for (auto& x : r) {
        x.canonicalize();
        require(x != 0, "valuation exponents must be nonzero");
        mpz_class num = abs(x.get_num());
        mpz_lcm(g.q.get_mpz_t(), g.q.get_mpz_t(), num.get_mpz_t());
    }
    for (const auto& x : r) {
        mpq_class t = mpq_class(g.q) / x;
        t.canonicalize();
        g.t.push_back(t.get_num());
    }
    g.r = std::move(r);
    return g;
}

RealMatrix prime_log_matrix(const RealMatrix& R, const GeneralizedValuationSpec& spec) {
    require(spec.r.size() == R.rows(), "one exponent per place required");
    RealMatrix out = R;
    for (std::size_t i = 0; i < R.rows(); ++i) {
        Real ri(spec.r[i]);
        for (std::size_t j = 0; j < R.cols(); ++j) out(i, j) *= ri;
    }
    return out;
}

Real generalized_row_norm(const RealVec& w, const GeneralizedValuationSpec& spec) {
    require(w.size() == spec.r.size(), "row length must equal the number of places");
    // Weighted center of the tuple holding |t_j| copies of r_j w_j.
    struct Entry {
        Real value;
        mpz_class weight;
    };
    std::vector<Entry> e;
    mpz_class total = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        e.push_back({Real(spec.r[j]) * w[j], abs(spec.t[j])});
        total += e.back().weight;
    }
    std::stable_sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
    mpz_class l = (total + 1) / 2;
    mpz_class seen = 0;
    Real c;
    for (const auto& x : e) {
        seen += x.weight;
        if (seen >= l) {
            c = x.value;
            break;
        }
    }
    Real sum(0);
    for (const auto& x : e) sum += Real(x.weight) * abs(x.value - c);
    return sum / Real(spec.q);
}

Real generalized_system_norm(const RealMatrix& R_primed, const GeneralizedValuationSpec& spec) {
    PseudoInverseFamily fam = pseudo_inverse_family(R_primed);
    Real best(0);
    for (const auto& w : fam.w_rows) best = max(best, generalized_row_norm(w, spec));
    return best;
}

}  // namespace sunit
