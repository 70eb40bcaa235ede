#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sunit/centralnorm.hpp"
#include "sunit/matrix.hpp"
#include "sunit/numfield.hpp"

namespace sunit {

class UnimodularTransform {
public:
    // Throws ValidationError unless det(A) = +-1.
    explicit UnimodularTransform(IntMatrix A);
    static UnimodularTransform identity(std::size_t n);

    const IntMatrix& matrix() const { return a_; }
    const IntMatrix& inverse() const { return inv_; }
    std::size_t size() const { return a_.rows(); }
    bool is_identity() const { return a_ == IntMatrix::identity(a_.rows()); }

    friend UnimodularTransform operator*(const UnimodularTransform& x, const UnimodularTransform& y);

private:
    UnimodularTransform(IntMatrix a, IntMatrix inv) : a_(std::move(a)), inv_(std::move(inv)) {}
    IntMatrix a_, inv_;
};

struct TraceStep {
    std::size_t row;                 // row of the pseudo-inverse that was replaced
    std::vector<long long> candidate;  // new row = sum_t candidate[t] * w_t
    Real row_before, row_after;
    Real n_value;                    // N after the step
};

struct OptimizationTrace {
    Real n_initial;
    std::vector<TraceStep> steps;
    std::size_t k() const { return steps.size(); }
};

struct HeuristicOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    std::size_t max_steps = 100000;
};

struct HeuristicResult {
    UnimodularTransform transform;  // R_new = R * transform
    OptimizationTrace trace;
    NormReport final_report;
};

// Tolerance below which a change in central norm is treated as noise.
Real strict_tolerance();
Real certification_tolerance();

HeuristicResult heuristic_optimize(const RealMatrix& R, const HeuristicOptions& opts = {});

RealMatrix apply_transform(const RealMatrix& R, const UnimodularTransform& A);

struct TransformedSystem {
    RealMatrix R;
    UnitSystem units;
};
// New unit j is prod_i eps_i^{A_ij}; exponents stay relative to the original system.
TransformedSystem apply_transform(const RealMatrix& R, const UnimodularTransform& A, const UnitSystem& units,
                                  const NumberFieldSpec& spec);

// ceil(||A^-1||_row * C_ini).
mpz_class transformed_initial_bound(const mpz_class& c_ini, const UnimodularTransform& A);

// Product expression such as "e1*e2*e3*e4^2" for column j.
std::string power_product(const IntMatrix& exponents, std::size_t j);

enum class CertMethod { Exhaustive, FinckePohst };
enum class Verdict { Optimal, ImprovementFound };
enum class FpRadius { Tight, Loose };  // N or sqrt(s) * N

struct Certificate {
    CertMethod method = CertMethod::Exhaustive;
    long c0 = 0;
    std::vector<long> c_bounds;  // per coordinate
    std::uint64_t examined = 0;
    Verdict verdict = Verdict::Optimal;
    std::size_t row = 0;  // j, the row attaining N
    Real n;
    std::vector<long long> witness;  // set when an improvement exists
    Real witness_norm;
};

struct CertifyOptions {
    std::uint64_t budget = 50'000'000;
    FpRadius radius = FpRadius::Tight;
    unsigned threads = 0;
};

// Per-coordinate bounds c_t = floor(N * max_i |R(i,t)|).
std::vector<long> entry_bounds(const RealMatrix& R, const Real& n);

Certificate certify_exhaustive(const RealMatrix& R, const CertifyOptions& opts = {});
Certificate certify_fincke_pohst(const RealMatrix& R, const CertifyOptions& opts = {});

// Unimodular A' with row j equal to a (row replacement, or extended-gcd completion).
UnimodularTransform complete_witness(const std::vector<long long>& a, std::size_t j);

// Last resort: search unimodular matrices whose rows lie in the c_t box and all
// have central norm below N. Returns the best one found, if any.
std::optional<UnimodularTransform> full_matrix_search(const RealMatrix& R, std::uint64_t node_budget = 10'000'000);

struct OptimizeOptions {
    std::optional<CertMethod> certify;
    HeuristicOptions heuristic;
    CertifyOptions cert;
    bool full_matrix_fallback = false;
    std::size_t max_rounds = 8;
};

struct OptimizeResult {
    UnimodularTransform transform;
    std::vector<OptimizationTrace> traces;  // one per heuristic round
    std::optional<Certificate> certificate;
    NormReport final_report;
    std::size_t rounds = 0;
};

// Heuristic, then certification, re-entering the heuristic from any improving witness.
OptimizeResult optimize(const RealMatrix& R, const OptimizeOptions& opts = {});

}  // namespace sunit
