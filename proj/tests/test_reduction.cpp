#include <cmath>
#include <random>

#include "doctest.h"
#include "sunit/optimizer.hpp"
#include "sunit/pipeline.hpp"
#include "sunit/problem.hpp"
#include "sunit/reduction.hpp"

using namespace sunit;

namespace {

struct Loaded {
    ProblemDocument doc;
    PlaceSet places;
    LogEmbeddingMatrix lm;
};

Loaded load(const char* name) {
    Loaded l{load_problem(name), {}, {}};
    l.places = compute_embeddings(l.doc.field, 256, l.doc.finite_places);
    l.lm = build_log_matrix(UnitSystem::from_integer(l.doc.s_units), l.places, l.doc.field);
    return l;
}

mpz_class pow_z(long base, unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

// Oracle: exhaustive scan of |k_i| <= x0 for ord_p(k0 + sum k_i kappa_i) >= u.
bool small_box_has_solution(const std::vector<long long>& kappa, long long p_u, long long x0) {
    const std::size_t sp = kappa.size() - 1;
    std::vector<long long> k(sp, -x0);
    while (true) {
        long long v = kappa[0];
        for (std::size_t i = 0; i < sp; ++i) v = (v + k[i] * kappa[i + 1]) % p_u;
        if (v == 0) return true;
        std::size_t t = 0;
        while (t < sp && k[t] == x0) {
            k[t] = -x0;
            ++t;
        }
        if (t == sp) return false;
        ++k[t];
    }
}

}  // namespace

TEST_CASE("archimedean constants") {
    auto row = RealVec{Real(1), Real(2)};
    ArchimedeanProblem pb = derive_archimedean_problem(row, Real("2.285921"), 10, Real(1), 10000);
    CHECK(std::abs(pb.c1.to_double() - 1.0 / (9 * 2.285921)) < 1e-12);
    CHECK(std::abs(pb.c1.to_double() - 0.048604) < 1e-5);
    CHECK(pb.c2 == Real(2));
    ArchimedeanProblem two = derive_archimedean_problem({Real(1)}, Real(3), 2, Real(1), 10);
    CHECK(abs(two.c1 - Real(1) / Real(3)) < ldexp(Real(1), -200));
}

TEST_CASE("archimedean step evaluates the bound formula once the test passes") {
    ArchimedeanProblem pb = derive_archimedean_problem({log(Real(2))}, Real(10), 2, Real(1), 10000);
    CHECK(abs(pb.c1 - Real("0.1")) < ldexp(Real(1), -200));
    pb.h = pow_z(10, 10);
    ReductionStep st = reduce_archimedean(pb, 64);
    REQUIRE(st.passed);
    CHECK(st.new_bound == 145);  // (10 ln 10 + ln 2 - 4 ln 10) / 0.1 = 145.08...
    CHECK(st.measure >= st.threshold);
}

TEST_CASE("property: the archimedean test never passes on planted small solutions") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::uniform_int_distribution<int> coef(-100, 100);
    int planted = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + trial % 3;
        RealVec xi(k);
        std::vector<long> x(k);
        for (std::size_t j = 0; j + 1 < k; ++j) {
            xi[j] = Real(d(rng));
            x[j] = coef(rng);
        }
        x[k - 1] = 1;
        // Sum x_j xi_j = 0 exactly in working precision.
        Real s(0);
        for (std::size_t j = 0; j + 1 < k; ++j) s += Real(x[j]) * xi[j];
        xi[k - 1] = -s;
        ArchimedeanProblem pb = derive_archimedean_problem(xi, Real(1), k + 1, Real(1), 100);
        for (int e : {6, 10, 14}) {
            pb.h = pow_z(10, static_cast<unsigned long>(e));
            CHECK_FALSE(reduce_archimedean(pb, 64).passed);
        }
        ++planted;
    }
    CHECK(planted == 100);
}

TEST_CASE("p-adic constants") {
    auto l = load("example1");
    PadicData data;
    data.s_prime = 4;
    data.digits = 60;
    data.kappa = {std::vector<mpz_class>(5, 0)};
    PadicProblem pb = derive_padic_problem(Real("0.931871"), 5, l.doc.finite_places[0], data, 10, 1000);
    CHECK(std::abs(pb.c1.to_double() - 1.0 / (8 * std::log(2.0) * 4 * 0.931871)) < 1e-12);
    CHECK(std::abs(pb.c1.to_double() - 0.048375) < 1e-5);
    CHECK(pb.c2.is_zero());
    CHECK(pb.c3 == Real(0));
    data.ord_lambda = 3;
    CHECK(derive_padic_problem(Real(1), 5, l.doc.finite_places[0], data, 10, 1000).c3 == Real(3));
    data.c3 = Real("1.5");
    CHECK(derive_padic_problem(Real(1), 5, l.doc.finite_places[0], data, 10, 1000).c3 == Real("1.5"));
    data.c3.reset();
    data.kappa = {std::vector<mpz_class>(3, 0)};  // wrong column count for s' = 4
    CHECK_THROWS_AS(derive_padic_problem(Real(1), 5, l.doc.finite_places[0], data, 10, 1000), ValidationError);
}

TEST_CASE("p-adic lattice shape") {
    FinitePlaceSpec fp;
    fp.p = 3;
    PadicData data;
    data.s_prime = 2;
    data.digits = 20;
    data.kappa = {{mpz_class(5), mpz_class(7), mpz_class(11)}};
    PadicProblem pb = derive_padic_problem(Real(1), 3, fp, data, 4, 10);
    IntMatrix L = padic_lattice(pb);
    REQUIRE(L.rows() == 3);
    REQUIRE(L.cols() == 3);
    CHECK(L(0, 0) == 1);
    CHECK(L(1, 1) == 1);
    CHECK(L(2, 0) == 7);
    CHECK(L(2, 1) == 11);
    CHECK(L(2, 2) == 81);
    auto y = padic_target(pb);
    CHECK(y[0] == 0);
    CHECK(y[2] == -5);
}

TEST_CASE("all-zero kappa never passes") {
    FinitePlaceSpec fp;
    fp.p = 3;
    PadicData data;
    data.s_prime = 2;
    data.digits = 20;
    data.kappa = {{mpz_class(0), mpz_class(0), mpz_class(0)}};
    PadicProblem pb = derive_padic_problem(Real(1), 3, fp, data, 8, 1);
    CHECK_FALSE(reduce_padic(pb).passed);
}

TEST_CASE("property: p-adic test agrees with an exhaustive small-box scan") {
    std::mt19937_64 rng(62);
    const long long p_u = 6561;  // 3^8
    std::uniform_int_distribution<long long> res(0, p_u - 1);
    FinitePlaceSpec fp;
    fp.p = 3;
    int passes = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const long long x0 = std::vector<long long>{5, 10, 20, 50}[trial % 4];
        std::vector<long long> kappa{res(rng), res(rng), res(rng)};
        PadicData data;
        data.s_prime = 2;
        data.digits = 8;
        data.kappa = {{mpz_class(static_cast<long>(kappa[0])), mpz_class(static_cast<long>(kappa[1])),
                       mpz_class(static_cast<long>(kappa[2]))}};
        PadicProblem pb = derive_padic_problem(Real(1), 3, fp, data, 8, mpz_class(static_cast<long>(x0)));
        ReductionStep st = reduce_padic(pb);
        bool solution = small_box_has_solution(kappa, p_u, x0);
        if (st.passed) {
            ++passes;
            CHECK_FALSE(solution);
            CHECK(st.new_bound >= 1);
            // New bound is floor((u + C3) / C1).
            CHECK(st.new_bound == ((Real(8) + pb.c3) / pb.c1).floor_z());
        }
        if (solution) CHECK_FALSE(st.passed);
    }
    CHECK(passes > 10);
}

TEST_CASE("reduction to a fixpoint is monotone") {
    auto l = load("example4");
    Real cstar = system_norm_new(l.lm.entries).n_new;
    ReductionOutcome out = reduce_to_fixpoint(l.lm, l.places, cstar, 10000);
    CHECK(out.c_red <= 10000);
    CHECK(out.c_red >= 1);
    CHECK(out.warnings.empty());
    for (const auto& p : out.places) CHECK(p.bound <= out.c_red);
    // Within one place the tested X0 never increases.
    for (std::size_t i = 0; i < out.log.size(); ++i) {
        const auto& e = out.log[i];
        if (e.step.passed) CHECK(e.step.new_bound >= 1);
        if (i > 0 && out.log[i - 1].place == e.place) CHECK(e.x0 <= out.log[i - 1].x0);
    }
}

TEST_CASE("reduced bound is nearly linear in C*") {
    auto l = load("example3");
    Real cstar = system_norm_new(l.lm.entries).n_new;
    mpz_class full = reduce_to_fixpoint(l.lm, l.places, cstar, 2076).c_red;
    mpz_class half = reduce_to_fixpoint(l.lm, l.places, cstar / Real(2), 2076).c_red;
    double ratio = half.get_d() / full.get_d();
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
}

TEST_CASE("finite places without p-adic data are reported, not reduced") {
    auto l = load("example1");
    ReductionOutcome out = reduce_to_fixpoint(l.lm, l.places, system_norm_new(l.lm.entries).n_new, 1066);
    REQUIRE(out.places.size() == 5);
    CHECK_FALSE(out.places[4].reducible);
    CHECK(out.c_red < 1066);
    CHECK_FALSE(out.warnings.empty());
}

TEST_CASE("domain ratio of known bound pairs") {
    CHECK(truncate6(domain_ratio(1031, 651, 5).to_double()) == "0.025325");
    CHECK(truncate6(domain_ratio(2079, 1011, 10).to_double()) == "0.000002");
    CHECK(truncate6(domain_ratio(1664, 824, 9).to_double()) == "0.000013");
    CHECK(truncate6(domain_ratio(792, 386, 9).to_double()) == "0.000010");
    CHECK(domain_ratio(7, 7, 4) == Real(1));
}

TEST_CASE("Wildanger constants") {
    auto l = load("example1");
    auto opt = heuristic_optimize(l.lm.entries);
    RealMatrix r3 = apply_transform(l.lm.entries, opt.transform);
    const Real one(1), k(10);
    WildangerConstants a = wildanger_constants(l.lm.entries, 1031, one, one, one, k, Real("1.442695"));
    WildangerConstants b = wildanger_constants(r3, 651, one, one, one, k, Real("0.931871"));
    CHECK(b.k0 < a.k0);
    // Homogeneous case: C+ = log(K + 1).
    CHECK(abs(a.c_plus - log(Real(11))) < ldexp(Real(1), -200));
    // H_next is linear in C*.
    WildangerConstants h = wildanger_constants(l.lm.entries, 1031, one, one, one, k, Real("0.7213475"));
    CHECK(abs(h.h_next * Real(2) - a.h_next) < ldexp(Real(1), -200));
    CHECK_THROWS_AS(wildanger_constants(l.lm.entries, 1031, Real(5), one, one, Real(4), one), ValidationError);
}
