#include "sunit/optimizer.hpp"

#include <algorithm>
#include <thread>

#include "sunit/errors.hpp"
#include "scan.hpp"

namespace sunit {

UnimodularTransform::UnimodularTransform(IntMatrix A) {
    require(A.rows() == A.cols() && A.rows() >= 1, "transform must be a nonempty square matrix");
    mpz_class det = determinant(A);
    require(det == 1 || det == -1, "transform is not unimodular");
    inv_ = to_int(sunit::inverse(to_rat(A)));
    a_ = std::move(A);
}

UnimodularTransform UnimodularTransform::identity(std::size_t n) {
    return UnimodularTransform(IntMatrix::identity(n), IntMatrix::identity(n));
}

UnimodularTransform operator*(const UnimodularTransform& x, const UnimodularTransform& y) {
    return UnimodularTransform(x.a_ * y.a_, y.inv_ * x.inv_);
}

Real strict_tolerance() { return two_pow(-working_precision() / 4); }
Real certification_tolerance() { return two_pow(-working_precision() / 2); }

namespace {

// Lexicographic order of candidate rows follows the mixed-radix index with
// the lowest coordinate most significant and digit values ascending.
struct RowScan {
    std::vector<long long> a;
    Real value;
};

RowScan scan_row(const std::vector<RealVec>& w, const std::vector<std::vector<double>>& wd, std::size_t j,
                 unsigned threads) {
    const std::size_t k = w.size();
    std::vector<long> lo(k, -1), hi(k, 1);
    lo[j] = hi[j] = 1;
    BoxScan scan(lo, hi);
    std::vector<std::uint64_t> shortlist = scan.shortlist_min(wd, threads);
    RowScan best;
    bool have = false;
    std::vector<Real> values;
    for (auto idx : shortlist) values.push_back(central_norm(scan.combine(w, scan.digits(idx))));
    Real mn = *std::min_element(values.begin(), values.end());
    const Real tie = certification_tolerance();
    for (std::size_t i = 0; i < shortlist.size(); ++i)
        if (values[i] <= mn + tie) {
            best.a = scan.digits(shortlist[i]);
            best.value = values[i];
            have = true;
            break;
        }
    require(have, "empty candidate scan");
    return best;
}

}  // namespace

HeuristicResult heuristic_optimize(const RealMatrix& R, const HeuristicOptions& opts) {
    PseudoInverseFamily fam = pseudo_inverse_family(R);
    std::vector<RealVec> w = fam.w_rows;
    const std::size_t k = w.size();
    IntMatrix acc = IntMatrix::identity(k);  // current rows = acc * initial rows
    const Real tol = strict_tolerance();

    HeuristicResult res{UnimodularTransform::identity(k), {}, {}};
    NormReport rep = norm_of_rows(w);
    res.trace.n_initial = rep.n_new;

    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        const Real& n = rep.n_new;
        auto wd = to_double_rows(w);
        bool moved = false;
        for (std::size_t j = 0; j < k && !moved; ++j) {
            if (rep.per_row[j] < n - tol) continue;
            RowScan best = scan_row(w, wd, j, opts.threads);
            if (!(best.value < rep.per_row[j] - tol)) continue;

            TraceStep ts;
            ts.row = j;
            ts.candidate = best.a;
            ts.row_before = rep.per_row[j];
            ts.row_after = best.value;
            RealVec nw(w[j].size(), Real(0));
            std::vector<mpz_class> accrow(k, 0);
            for (std::size_t t = 0; t < k; ++t) {
                if (best.a[t] == 0) continue;
                Real c(best.a[t]);
                for (std::size_t x = 0; x < nw.size(); ++x) nw[x] += c * w[t][x];
                for (std::size_t x = 0; x < k; ++x) accrow[x] += mpz_class(static_cast<long>(best.a[t])) * acc(t, x);
            }
            w[j] = std::move(nw);
            for (std::size_t x = 0; x < k; ++x) acc(j, x) = accrow[x];
            rep = norm_of_rows(w);
            ts.n_value = rep.n_new;
            res.trace.steps.push_back(std::move(ts));
            moved = true;
        }
        if (!moved) break;
    }
    // Rows of R' transform by acc, so R transforms by acc^-1.
    UnimodularTransform rows(acc);
    res.transform = UnimodularTransform(rows.inverse());
    res.final_report = rep;
    res.final_report.n_old = system_norm_old(apply_transform(R, res.transform));
    return res;
}

RealMatrix apply_transform(const RealMatrix& R, const UnimodularTransform& A) {
    require(R.cols() == A.size(), "transform size does not match the unit count");
    return R * to_real(A.matrix());
}

TransformedSystem apply_transform(const RealMatrix& R, const UnimodularTransform& A, const UnitSystem& units,
                                  const NumberFieldSpec& spec) {
    require(units.size() == A.size(), "transform size does not match the unit count");
    TransformedSystem out;
    out.R = apply_transform(R, A);
    const std::size_t k = A.size();
    for (std::size_t j = 0; j < k; ++j) {
        Coords c = field_one(spec);
        for (std::size_t i = 0; i < k; ++i) {
            const mpz_class& e = A.matrix()(i, j);
            if (e == 0) continue;
            require(e.fits_slong_p(), "exponent too large");
            c = field_mul(c, field_pow(units.coordinates[i], e.get_si(), spec), spec);
        }
        out.units.coordinates.push_back(std::move(c));
    }
    out.units.exponents = units.exponents * A.matrix();
    return out;
}

mpz_class transformed_initial_bound(const mpz_class& c_ini, const UnimodularTransform& A) {
    require(c_ini >= 1, "initial bound must be at least 1");
    return row_norm(A.inverse()) * c_ini;
}

std::string power_product(const IntMatrix& exponents, std::size_t j) {
    std::string out;
    for (std::size_t i = 0; i < exponents.rows(); ++i) {
        const mpz_class& e = exponents(i, j);
        if (e == 0) continue;
        if (!out.empty()) out += "*";
        out += "e" + std::to_string(i + 1);
        if (e != 1) out += "^" + e.get_str();
    }
    return out.empty() ? "1" : out;
}

}  // namespace sunit
