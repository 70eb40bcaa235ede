#pragma once

#include <cstddef>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "sunit/centralnorm.hpp"
#include "sunit/numfield.hpp"

namespace sunit {

struct ArchimedeanProblem {
    RealVec xi;  // row of R at one infinite place
    Real c1, c2;
    mpz_class x0;
    mpz_class h = 1;
};

// C1 = 1/((s-1) C*), C2 = 2 |alpha_1|_v.
ArchimedeanProblem derive_archimedean_problem(const RealVec& row, const Real& cstar, std::size_t s,
                                              const Real& alpha_abs, const mpz_class& x0);

struct ReductionStep {
    bool passed = false;
    Real measure;    // ||b_1|| (archimedean) or the lower bound on l(L, y) (p-adic)
    Real threshold;
    mpz_class new_bound;  // meaningful when passed
};

// Lattice test of the archimedean lemma on an integer proxy scaled by 2^guard_bits.
ReductionStep reduce_archimedean(const ArchimedeanProblem& pb, long guard_bits);

struct PadicData {
    std::size_t finite_index = 0;  // which finite place
    std::size_t s_prime = 0;
    std::size_t digits = 0;  // kappa residues are known mod p^digits
    // n0 rows of s'+1 residues: kappa_{0,i}, ..., kappa_{s',i}.
    std::vector<std::vector<mpz_class>> kappa;
    long ord_lambda = 0;
    std::optional<Real> c3;
    Real alpha_abs = Real(1);
};

struct PadicProblem {
    mpz_class p;
    std::size_t u = 1;
    std::size_t digits = 0;
    std::vector<std::vector<mpz_class>> kappa;
    Real c1, c2, c3;
    mpz_class x0;
    std::size_t s_prime = 0;
    std::size_t n0() const { return kappa.size(); }
};

// C1 = 1/(f e log p (s-1) C*), C2 = log|alpha_1|_v/(f e log p), C3 = C2 + ord_p(lambda) unless given.
PadicProblem derive_padic_problem(const Real& cstar, std::size_t s, const FinitePlaceSpec& place,
                                  const PadicData& data, std::size_t u, const mpz_class& x0);

// Lattice L and target y for the current u.
IntMatrix padic_lattice(const PadicProblem& pb);
std::vector<mpq_class> padic_target(const PadicProblem& pb);
ReductionStep reduce_padic(const PadicProblem& pb);

struct ReductionLogEntry {
    std::size_t place = 0;
    std::string parameter;  // "H=10^e" or "u=n"
    mpz_class x0;
    ReductionStep step;
};

struct PlaceOutcome {
    std::size_t place = 0;
    std::string label;
    bool reducible = false;
    mpz_class bound;
    std::size_t iterations = 0;
    std::string note;
};

struct ReductionOutcome {
    std::vector<ReductionLogEntry> log;
    std::vector<PlaceOutcome> places;
    mpz_class c_red;  // max over reducible places
    std::size_t iterations = 0;
    std::vector<std::string> warnings;
};

struct ReductionOptions {
    std::size_t max_escalations = 30;
    std::vector<PadicData> padic;
    std::vector<Real> alpha_abs;  // per place, default 1
    unsigned threads = 1;
};

// Raises PrecisionError when H outgrows the precision of R.
ReductionOutcome reduce_to_fixpoint(const LogEmbeddingMatrix& R, const PlaceSet& places, const Real& cstar,
                                    const mpz_class& c_ini, const ReductionOptions& opts = {});

struct WildangerConstants {
    Real k0, c_plus, h_next;
};

WildangerConstants wildanger_constants(const RealMatrix& R, const mpz_class& c_red, const Real& s1, const Real& s2,
                                       const Real& s3, const Real& k_next, const Real& cstar);

// ((2 C_red1 + 1) / (2 C_red0 + 1))^(2s-2).
Real domain_ratio(const mpz_class& c_red0, const mpz_class& c_red1, std::size_t s);

}  // namespace sunit
