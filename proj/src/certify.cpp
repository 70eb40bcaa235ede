#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "scan.hpp"
#include "sunit/errors.hpp"
#include "sunit/lattice.hpp"
#include "sunit/optimizer.hpp"

namespace sunit {

std::vector<long> entry_bounds(const RealMatrix& R, const Real& n) {
    std::vector<long> c(R.cols(), 0);
    for (std::size_t t = 0; t < R.cols(); ++t) {
        Real m(0);
        for (std::size_t i = 0; i < R.rows(); ++i) m = max(m, abs(R(i, t)));
        c[t] = static_cast<long>((n * m).floor_z().get_si());
    }
    return c;
}

namespace {

struct Setup {
    PseudoInverseFamily fam;
    NormReport rep;
};

Setup setup(const RealMatrix& R) {
    Setup st{pseudo_inverse_family(R), {}};
    st.rep = norm_of_rows(st.fam.w_rows);
    return st;
}

// Re-evaluates candidates in MPFR and records the best improving one.
void judge(Certificate& cert, const std::vector<RealVec>& w, const std::vector<long long>& a) {
    Real v = central_norm(BoxScan::combine(w, a));
    if (!(v < cert.n - certification_tolerance())) return;
    if (cert.verdict == Verdict::Optimal || v < cert.witness_norm - certification_tolerance()) {
        cert.verdict = Verdict::ImprovementFound;
        cert.witness = a;
        cert.witness_norm = v;
    }
}

}  // namespace

Certificate certify_exhaustive(const RealMatrix& R, const CertifyOptions& opts) {
    Setup st = setup(R);
    Certificate cert;
    cert.method = CertMethod::Exhaustive;
    cert.n = st.rep.n_new;
    cert.row = st.rep.argmax_row;
    cert.c_bounds = entry_bounds(R, cert.n);
    cert.c0 = *std::max_element(cert.c_bounds.begin(), cert.c_bounds.end());
    const std::size_t k = cert.c_bounds.size(), j = cert.row;
    if (cert.c_bounds[j] < 1) return cert;  // no row with a_j > 0 fits the hull

    std::vector<long> lo(k), hi(k);
    for (std::size_t t = 0; t < k; ++t) {
        lo[t] = -cert.c_bounds[t];
        hi[t] = cert.c_bounds[t];
    }
    lo[j] = 1;
    BoxScan scan(lo, hi);
    if (scan.size() > opts.budget)
        throw BudgetExceeded("exhaustive certification needs " + std::to_string(scan.size()) +
                             " candidates; use the Fincke-Pohst path");
    cert.examined = scan.size();
    auto wd = to_double_rows(st.fam.w_rows);
    for (auto idx : scan.shortlist_below(wd, cert.n.to_double(), opts.threads))
        judge(cert, st.fam.w_rows, scan.digits(idx));
    return cert;
}

Certificate certify_fincke_pohst(const RealMatrix& R, const CertifyOptions& opts) {
    Setup st = setup(R);
    Certificate cert;
    cert.method = CertMethod::FinckePohst;
    cert.n = st.rep.n_new;
    cert.row = st.rep.argmax_row;
    cert.c_bounds = entry_bounds(R, cert.n);
    cert.c0 = *std::max_element(cert.c_bounds.begin(), cert.c_bounds.end());
    const auto& w = st.fam.w_rows;
    const std::size_t k = w.size(), s = w[0].size();

    // Orthogonal projection of each w_t onto the complement of (1, ..., 1).
    RealMatrix basis(s, k);
    for (std::size_t t = 0; t < k; ++t) {
        Real mean(0);
        for (const auto& v : w[t]) mean += v;
        mean /= Real(static_cast<long>(s));
        for (std::size_t x = 0; x < s; ++x) basis(x, t) = w[t][x] - mean;
    }
    Real radius = cert.n;
    if (opts.radius == FpRadius::Loose) radius *= sqrt(Real(static_cast<long>(s)));

    EnumerationOptions eo;
    eo.max_points = opts.budget;
    eo.scale_bits = std::min<long>(working_precision() / 4, 96);
    auto points = fincke_pohst_enumerate_fast(basis, radius.to_double(), eo);
    for (const auto& p : points) {
        if (p.coeffs[cert.row] <= 0) continue;
        ++cert.examined;
        judge(cert, w, p.coeffs);
    }
    return cert;
}

UnimodularTransform complete_witness(const std::vector<long long>& a, std::size_t j) {
    const std::size_t k = a.size();
    require(j < k, "witness row index out of range");
    IntMatrix A = IntMatrix::identity(k);
    if (a[j] == 1 || a[j] == -1) {
        for (std::size_t t = 0; t < k; ++t) A(j, t) = static_cast<long>(a[t]);
        return UnimodularTransform(A);
    }
    // Column operations V with a * V = e_1; then V^-1 has a as its first row.
    std::vector<mpz_class> v;
    for (auto x : a) v.emplace_back(static_cast<long>(x));
    IntMatrix V = IntMatrix::identity(k);
    for (std::size_t t = 1; t < k; ++t) {
        if (v[t] == 0) continue;
        mpz_class g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), v[0].get_mpz_t(), v[t].get_mpz_t());
        mpz_class p = v[0] / g, q = v[t] / g;
        // [c0 ct] <- [c0 ct] * [[x, -q], [y, p]], determinant x p + y q = 1.
        for (std::size_t r = 0; r < k; ++r) {
            mpz_class c0 = V(r, 0), ct = V(r, t);
            V(r, 0) = c0 * x + ct * y;
            V(r, t) = -c0 * q + ct * p;
        }
        v[0] = g;
        v[t] = 0;
    }
    require(v[0] == 1 || v[0] == -1, "witness row is not primitive (gcd > 1)");
    if (v[0] == -1)
        for (std::size_t r = 0; r < k; ++r) V(r, 0) = -V(r, 0);
    UnimodularTransform vt(V);
    IntMatrix Ainv = vt.inverse();
    if (j != 0)
        for (std::size_t c = 0; c < k; ++c) std::swap(Ainv(0, c), Ainv(j, c));
    return UnimodularTransform(Ainv);
}

std::optional<UnimodularTransform> full_matrix_search(const RealMatrix& R, std::uint64_t node_budget) {
    Setup st = setup(R);
    const auto& w = st.fam.w_rows;
    const std::size_t k = w.size();
    const Real n = st.rep.n_new;
    std::vector<long> c = entry_bounds(R, n);
    std::vector<long> lo(k), hi(k);
    for (std::size_t t = 0; t < k; ++t) {
        lo[t] = -c[t];
        hi[t] = c[t];
    }
    BoxScan scan(lo, hi);
    require(scan.size() <= node_budget, "full matrix search box exceeds the budget");

    struct Cand {
        std::vector<long long> a;
        Real norm;
    };
    std::vector<Cand> cands;
    auto wd = to_double_rows(w);
    for (auto idx : scan.shortlist_below(wd, n.to_double(), 1)) {
        std::vector<long long> a = scan.digits(idx);
        auto nz = std::find_if(a.begin(), a.end(), [](long long x) { return x != 0; });
        if (nz == a.end() || *nz < 0) continue;  // one sign per +-pair
        Real v = central_norm(BoxScan::combine(w, a));
        if (v < n - strict_tolerance()) cands.push_back({a, v});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.norm < y.norm; });
    if (cands.size() < k) return std::nullopt;

    // Smallest prefix of the sorted candidates containing a unimodular k-subset
    // that uses its last element; that subset minimizes the largest row norm.
    std::uint64_t nodes = 0;
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t limit) -> bool {
        if (++nodes > node_budget) throw BudgetExceeded("full matrix search exceeded its node budget");
        if (pick.size() == k) {
            IntMatrix M(k, k);
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t t = 0; t < k; ++t) M(r, t) = static_cast<long>(cands[pick[r]].a[t]);
            mpz_class d = determinant(M);
            return d == 1 || d == -1;
        }
        for (std::size_t i = start; i < limit; ++i) {
            pick.push_back(i);
            if (dfs(i + 1, limit)) return true;
            pick.pop_back();
        }
        return false;
    };
    for (std::size_t last = k - 1; last < cands.size(); ++last) {
        pick.assign(1, last);
        if (!dfs(0, last)) continue;
        // pick[0] is the new maximum; order rows to keep the identity where possible.
        IntMatrix A(k, k);
        std::vector<std::size_t> rows = pick;
        std::sort(rows.begin(), rows.end());
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t t = 0; t < k; ++t) A(r, t) = static_cast<long>(cands[rows[r]].a[t]);
        UnimodularTransform rowsT(A);
        return UnimodularTransform(rowsT.inverse());
    }
    return std::nullopt;
}

OptimizeResult optimize(const RealMatrix& R, const OptimizeOptions& opts) {
    const std::size_t k = R.cols();
    OptimizeResult res{UnimodularTransform::identity(k), {}, std::nullopt, {}, 0};
    auto certify = [&](const RealMatrix& M) {
        return *opts.certify == CertMethod::Exhaustive ? certify_exhaustive(M, opts.cert)
                                                        : certify_fincke_pohst(M, opts.cert);
    };
    const Real tol = strict_tolerance();

    UnimodularTransform total = UnimodularTransform::identity(k);
    for (std::size_t round = 0; round < opts.max_rounds; ++round) {
        ++res.rounds;
        HeuristicResult h = heuristic_optimize(apply_transform(R, total), opts.heuristic);
        total = total * h.transform;
        res.traces.push_back(h.trace);
        res.final_report = h.final_report;
        if (!opts.certify) break;

        RealMatrix cur = apply_transform(R, total);
        Certificate cert = certify(cur);
        res.certificate = cert;
        if (cert.verdict == Verdict::Optimal) break;

        // Re-enter the heuristic from the completed witness; keep it only if N drops.
        std::optional<UnimodularTransform> next;
        try {
            UnimodularTransform rows = complete_witness(cert.witness, cert.row);
            next = UnimodularTransform(rows.inverse());
        } catch (const ValidationError&) {
        }
        bool improved = false;
        if (next) {
            HeuristicResult h2 = heuristic_optimize(apply_transform(cur, *next), opts.heuristic);
            if (h2.final_report.n_new < cert.n - tol) {
                total = total * *next * h2.transform;
                res.traces.push_back(h2.trace);
                res.final_report = h2.final_report;
                improved = true;
            }
        }
        if (!improved && opts.full_matrix_fallback) {
            if (auto fm = full_matrix_search(cur)) {
                total = total * *fm;
                improved = true;
            }
        }
        if (!improved) break;
    }
    res.transform = total;
    RealMatrix fin = apply_transform(R, total);
    res.final_report = system_norm_new(fin);
    return res;
}

}  // namespace sunit
