#include "sunit/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sunit/errors.hpp"
#include "sunit/lattice.hpp"

namespace sunit {

namespace {

mpz_class pow_z(const mpz_class& b, std::size_t e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Real norm_of_col(const IntMatrix& m, std::size_t c) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, c) * m(i, c);
    return sqrt(Real(s));
}

mpz_class floor_at_least_one(const Real& x) {
    mpz_class z = x.floor_z();
    return z < 1 ? mpz_class(1) : z;
}

}  // namespace

ArchimedeanProblem derive_archimedean_problem(const RealVec& row, const Real& cstar, std::size_t s,
                                              const Real& alpha_abs, const mpz_class& x0) {
    require(cstar > Real(0), "C* must be positive");
    require(s >= 2, "need s >= 2");
    require(x0 >= 1, "X0 must be at least 1");
    ArchimedeanProblem pb;
    pb.xi = row;
    pb.c1 = Real(1) / (Real(static_cast<long>(s - 1)) * cstar);
    pb.c2 = 2 * alpha_abs;
    pb.x0 = x0;
    return pb;
}

ReductionStep reduce_archimedean(const ArchimedeanProblem& pb, long guard_bits) {
    const std::size_t k = pb.xi.size();
    require(k >= 1, "empty linear form");
    require(std::any_of(pb.xi.begin(), pb.xi.end(), [](const Real& v) { return !v.is_zero(); }),
            "degenerate linear form (all coefficients zero)");
    require(pb.c1 > Real(0) && pb.c2 > Real(0), "C1 and C2 must be positive");

    // Columns (2^g e_j, round(2^g H xi_j)).
    IntMatrix B(k + 1, k);
    const Real h(pb.h);
    for (std::size_t j = 0; j < k; ++j) {
        B(j, j) = 1;
        B(j, j) <<= static_cast<mp_bitcnt_t>(guard_bits);
        B(k, j) = ldexp(h * pb.xi[j], guard_bits).round_z();
    }
    LllResult red = lll_reduce(B);

    ReductionStep st;
    const Real x0(pb.x0);
    const long kk = static_cast<long>(k);
    st.measure = ldexp(norm_of_col(red.basis, 0), -guard_bits);
    st.threshold = sqrt(Real((kk + 1) * (1L << (kk - 1)))) * x0 +
                   pow(Real(2), Real(kk - 1) / Real(2)) * Real(kk) * x0 * two_pow(-guard_bits - 1);
    st.passed = st.measure >= st.threshold;
    if (st.passed) st.new_bound = floor_at_least_one((log(h) + log(pb.c2) - log(x0)) / pb.c1);
    return st;
}

PadicProblem derive_padic_problem(const Real& cstar, std::size_t s, const FinitePlaceSpec& place,
                                  const PadicData& data, std::size_t u, const mpz_class& x0) {
    require(cstar > Real(0), "C* must be positive");
    require(s >= 2, "need s >= 2");
    require(!data.kappa.empty(), "missing kappa digits");
    require(data.s_prime == s || data.s_prime + 1 == s, "s' must be s or s-1");
    require(u >= 1 && u <= data.digits, "kappa digits are not known to the requested precision u");
    const mpz_class pu = pow_z(place.p, data.digits);
    for (const auto& row : data.kappa) {
        require(row.size() == data.s_prime + 1, "each kappa row needs s'+1 entries");
        for (const auto& v : row) require(v >= 0 && v < pu, "kappa residues must lie in [0, p^digits)");
    }
    PadicProblem pb;
    pb.p = place.p;
    pb.u = u;
    pb.digits = data.digits;
    pb.kappa = data.kappa;
    pb.s_prime = data.s_prime;
    pb.x0 = x0;
    const Real fel = Real(static_cast<long>(place.f * place.e)) * log(Real(place.p));
    pb.c1 = Real(1) / (fel * Real(static_cast<long>(s - 1)) * cstar);
    pb.c2 = log(data.alpha_abs) / fel;
    pb.c3 = data.c3 ? *data.c3 : pb.c2 + Real(data.ord_lambda);
    return pb;
}

IntMatrix padic_lattice(const PadicProblem& pb) {
    const std::size_t sp = pb.s_prime, n0 = pb.n0(), m = sp + n0;
    const mpz_class pu = pow_z(pb.p, pb.u);
    IntMatrix L(m, m);
    for (std::size_t j = 0; j < sp; ++j) {
        L(j, j) = 1;
        for (std::size_t i = 0; i < n0; ++i) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), pb.kappa[i][j + 1].get_mpz_t(), pu.get_mpz_t());
            L(sp + i, j) = r;
        }
    }
    for (std::size_t i = 0; i < n0; ++i) L(sp + i, sp + i) = pu;
    return L;
}

std::vector<mpq_class> padic_target(const PadicProblem& pb) {
    const std::size_t sp = pb.s_prime, n0 = pb.n0();
    const mpz_class pu = pow_z(pb.p, pb.u);
    std::vector<mpq_class> y(sp + n0, 0);
    for (std::size_t i = 0; i < n0; ++i) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), pb.kappa[i][0].get_mpz_t(), pu.get_mpz_t());
        y[sp + i] = -r;
    }
    return y;
}

ReductionStep reduce_padic(const PadicProblem& pb) {
    require(pb.u >= 1 && pb.u <= pb.digits, "kappa digits are not known to the requested precision u");
    require(pb.c1 > Real(0), "C1 must be positive");
    LllResult red = lll_reduce(padic_lattice(pb));
    std::vector<mpq_class> y = padic_target(pb);
    bool zero = std::all_of(y.begin(), y.end(), [](const mpq_class& v) { return v == 0; });

    ReductionStep st;
    st.measure = zero ? lattice_lower_bound(red.basis) : lattice_lower_bound(red.basis, y);
    st.threshold = sqrt(Real(static_cast<long>(pb.s_prime))) * Real(pb.x0);
    st.passed = st.measure > st.threshold;
    if (st.passed) st.new_bound = floor_at_least_one((Real(static_cast<long>(pb.u)) + pb.c3) / pb.c1);
    return st;
}

namespace {

struct PlaceRun {
    PlaceOutcome outcome;
    std::vector<ReductionLogEntry> log;
};

PlaceRun run_archimedean(std::size_t v, const LogEmbeddingMatrix& R, const PlaceSet& places, const Real& cstar,
                         const mpz_class& c_ini, const Real& alpha_abs, std::size_t max_esc) {
    PlaceRun run;
    run.outcome.place = v;
    run.outcome.label = places.label(v);
    run.outcome.reducible = true;
    const long guard = R.precision_bits / 4;
    const RealVec xi = R.entries.row(v);
    Real xi_max(1);
    for (const auto& x : xi) xi_max = max(xi_max, abs(x));
    const std::size_t k = xi.size();

    mpz_class x0 = c_ini;
    while (true) {
        ArchimedeanProblem pb = derive_archimedean_problem(xi, cstar, R.s(), alpha_abs, x0);
        long e = static_cast<long>(std::ceil(static_cast<double>(k + 1) * std::log10(x0.get_d()))) + 2;
        bool passed = false;
        ReductionStep last;
        for (std::size_t esc = 0; esc <= max_esc && !passed; ++esc, e += 2) {
            mpz_pow_ui(pb.h.get_mpz_t(), mpz_class(10).get_mpz_t(), static_cast<unsigned long>(e));
            const double need = e * std::log2(10.0) + std::log2(xi_max.to_double()) + guard + 16;
            if (need > static_cast<double>(R.precision_bits))
                throw PrecisionError("archimedean reduction needs more working precision");
            last = reduce_archimedean(pb, guard);
            run.log.push_back({v, "H=10^" + std::to_string(e), x0, last});
            passed = last.passed;
        }
        ++run.outcome.iterations;
        if (!passed) {
            run.outcome.note = "lattice test failed at every H";
            break;
        }
        if (last.new_bound > x0 - 1) break;
        x0 = last.new_bound;
    }
    run.outcome.bound = x0;
    return run;
}

PlaceRun run_padic(std::size_t v, const PlaceSet& places, const PadicData& data, const Real& cstar,
                   const mpz_class& c_ini, std::size_t max_esc) {
    const FinitePlaceSpec& fp = places.finite_places[data.finite_index];
    PlaceRun run;
    run.outcome.place = v;
    run.outcome.label = places.label(v);
    run.outcome.reducible = true;
    const double logp = std::log(fp.p.get_d());
    const std::size_t m = data.s_prime + data.kappa.size();

    mpz_class x0 = c_ini;
    while (true) {
        std::size_t u = static_cast<std::size_t>(std::ceil(static_cast<double>(m) * std::log(x0.get_d()) / logp)) + 2;
        bool passed = false;
        ReductionStep last;
        for (std::size_t esc = 0; esc <= max_esc && !passed; ++esc) {
            if (u > data.digits) {
                run.outcome.note = "kappa digits exhausted at u=" + std::to_string(u);
                break;
            }
            PadicProblem pb = derive_padic_problem(cstar, places.s(), fp, data, u, x0);
            last = reduce_padic(pb);
            run.log.push_back({v, "u=" + std::to_string(u), x0, last});
            passed = last.passed;
            u = std::max(u + 1, static_cast<std::size_t>(std::ceil(1.1 * static_cast<double>(u))));
        }
        ++run.outcome.iterations;
        if (!passed) {
            if (run.outcome.note.empty()) run.outcome.note = "lattice test failed at every u";
            break;
        }
        if (last.new_bound > x0 - 1) break;
        x0 = last.new_bound;
    }
    run.outcome.bound = x0;
    return run;
}

}  // namespace

ReductionOutcome reduce_to_fixpoint(const LogEmbeddingMatrix& R, const PlaceSet& places, const Real& cstar,
                                    const mpz_class& c_ini, const ReductionOptions& opts) {
    require(c_ini >= 1, "initial bound must be at least 1");
    require(R.s() == places.s(), "log matrix and place set disagree on s");
    const std::size_t s = R.s();
    std::vector<const PadicData*> padic(s, nullptr);
    for (const auto& d : opts.padic) {
        require(d.finite_index < places.finite_places.size(), "p-adic data refers to an unknown finite place");
        padic[places.infinite() + d.finite_index] = &d;
    }

    std::vector<PlaceRun> runs(s);
    std::vector<std::exception_ptr> errors(s);
    const long prec = working_precision();
    auto work = [&](std::size_t v) {
        try {
            PrecisionGuard guard(prec);
            Real alpha = v < opts.alpha_abs.size() ? opts.alpha_abs[v] : Real(1);
            if (!places.is_finite(v)) {
                runs[v] = run_archimedean(v, R, places, cstar, c_ini, alpha, opts.max_escalations);
            } else if (padic[v]) {
                runs[v] = run_padic(v, places, *padic[v], cstar, c_ini, opts.max_escalations);
            } else {
                runs[v].outcome.place = v;
                runs[v].outcome.label = places.label(v);
                runs[v].outcome.bound = c_ini;
                runs[v].outcome.note = "no p-adic data; not reduced";
            }
        } catch (...) {
            errors[v] = std::current_exception();
        }
    };
    unsigned nt = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
    if (nt <= 1) {
        for (std::size_t v = 0; v < s; ++v) work(v);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t v = t; v < s; v += nt) work(v);
            });
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    ReductionOutcome out;
    out.c_red = 0;
    for (auto& r : runs) {
        out.iterations += r.outcome.iterations;
        out.log.insert(out.log.end(), r.log.begin(), r.log.end());
        if (r.outcome.reducible)
            out.c_red = std::max(out.c_red, r.outcome.bound);
        else
            out.warnings.push_back(r.outcome.label + ": " + r.outcome.note);
        out.places.push_back(std::move(r.outcome));
    }
    if (out.c_red == 0) {
        out.c_red = c_ini;
        out.warnings.push_back("no place could be reduced");
    }
    return out;
}

WildangerConstants wildanger_constants(const RealMatrix& R, const mpz_class& c_red, const Real& s1, const Real& s2,
                                       const Real& s3, const Real& k_next, const Real& cstar) {
    Real lim = max(max(s1, s2), max(s3, (s3 - Real(1)) / s1));
    require(k_next > lim && k_next > Real(1), "K_next must exceed max(s1, s2, s3, (s3-1)/s1) and 1");
    WildangerConstants w;
    Real best(0);
    for (std::size_t v = 0; v < R.rows(); ++v) {
        Real sum(0);
        for (std::size_t j = 0; j < R.cols(); ++j) sum += abs(R(v, j));
        best = max(best, sum);
    }
    w.k0 = exp(Real(c_red) * best);
    Real top = s1 * k_next + Real(1);
    w.c_plus = max(max(log(top / s2), log(top / s3)), log(k_next));
    w.h_next = cstar * w.c_plus;
    return w;
}

Real domain_ratio(const mpz_class& c_red0, const mpz_class& c_red1, std::size_t s) {
    require(c_red0 >= 1 && c_red1 >= 1, "bounds must be positive");
    mpq_class q(2 * c_red1 + 1, 2 * c_red0 + 1);
    q.canonicalize();
    mpq_class r = 1;
    for (std::size_t i = 0; i < 2 * s - 2; ++i) r *= q;
    return Real(r);
}

}  // namespace sunit
