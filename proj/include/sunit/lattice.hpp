#pragma once

#include <cstddef>
#include <gmpxx.h>
#include <optional>
#include <vector>

#include "sunit/matrix.hpp"
#include "sunit/real.hpp"

namespace sunit {

// Lattice bases are stored column-wise: column j is the j-th basis vector.

struct LllResult {
    IntMatrix basis;      // input * transform
    IntMatrix transform;  // unimodular
};

// Exact all-integer LLL. Throws ValidationError on dependent columns.
LllResult lll_reduce(const IntMatrix& basis, const mpq_class& delta = mpq_class(3, 4));

struct RealLllResult {
    RealMatrix basis;
    IntMatrix transform;
};

// Reduces round(2^scale_bits * basis) and applies the transform to the real basis.
RealLllResult lll_reduce(const RealMatrix& basis, long scale_bits, const mpq_class& delta = mpq_class(3, 4));

struct GramSchmidt {
    RatMatrix mu;                    // mu(i, j), j < i
    std::vector<mpq_class> bstar_sq;  // ||b*_i||^2
    RatMatrix bstar;                 // columns b*_i
};
GramSchmidt gram_schmidt(const IntMatrix& basis);
bool is_lll_reduced(const IntMatrix& basis, const mpq_class& delta = mpq_class(3, 4));

// Certified lower bound for min ||v - y|| over lattice vectors v != y (v != 0 when no target).
Real lattice_lower_bound(const IntMatrix& reduced, const std::optional<std::vector<mpq_class>>& target = std::nullopt);

template <class T>
struct LatticePoint {
    std::vector<long long> coeffs;  // with respect to the input basis
    std::vector<T> vector;          // basis * coeffs - target
    T norm_sq;
};

struct EnumerationOptions {
    std::size_t max_points = 5'000'000;
    bool reduce_first = true;
    long scale_bits = 64;
};

// All x with ||basis * x - target|| <= radius, in deterministic order.
std::vector<LatticePoint<Real>> fincke_pohst_enumerate(const RealMatrix& basis, const Real& radius,
                                                       const std::optional<std::vector<Real>>& target = std::nullopt,
                                                       const EnumerationOptions& opts = {});

// Double-precision variant for scans whose results are re-verified by the caller.
std::vector<LatticePoint<double>> fincke_pohst_enumerate_fast(const RealMatrix& basis, double radius,
                                                              const EnumerationOptions& opts = {});

}  // namespace sunit
