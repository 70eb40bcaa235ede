#pragma once

#include <cstddef>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "sunit/matrix.hpp"
#include "sunit/polynomial.hpp"
#include "sunit/real.hpp"

namespace sunit {

// Element of K as coordinates with respect to the integral basis.
using Coords = std::vector<mpq_class>;

struct NumberFieldSpec {
    std::vector<mpz_class> min_poly;  // ascending
    RatMatrix integral_basis;         // row i: omega_i in powers of theta

    // Validates degree, constant term, squarefreeness and basis invertibility.
    static NumberFieldSpec make(std::vector<mpz_class> min_poly, std::optional<RatMatrix> basis = std::nullopt);

    std::size_t degree() const { return min_poly.size() - 1; }
    QPoly poly() const { return to_qpoly(min_poly); }
    QPoly to_power_basis(const Coords& c) const;
    Coords from_power_basis(const QPoly& p) const;

private:
    RatMatrix basis_inverse_;
};

struct FinitePlaceSpec {
    mpz_class p;
    int f = 1;
    int e = 1;
    // One entry per unit of the input system.
    std::optional<std::vector<long long>> ord_vector;
    std::optional<Coords> generator;
    bool unique_prime = false;

    mpz_class norm() const;  // p^f
    void validate(const NumberFieldSpec& spec, std::size_t unit_count) const;
};

struct PlaceSet {
    std::vector<Real> real_roots;
    std::vector<Complex> complex_roots;  // Im > 0 representatives
    std::vector<FinitePlaceSpec> finite_places;
    long precision_bits = 0;

    std::size_t r1() const { return real_roots.size(); }
    std::size_t r2() const { return complex_roots.size(); }
    std::size_t infinite() const { return r1() + r2(); }
    std::size_t s() const { return infinite() + finite_places.size(); }
    std::string label(std::size_t v) const;
    bool is_complex(std::size_t v) const { return v >= r1() && v < infinite(); }
    bool is_finite(std::size_t v) const { return v >= infinite(); }
};

struct UnitSystem {
    std::vector<Coords> coordinates;
    // Column j: exponents of unit j over the original system.
    IntMatrix exponents;

    static UnitSystem from_integer(const std::vector<std::vector<long long>>& units);
    std::size_t size() const { return coordinates.size(); }
};

struct LogEmbeddingMatrix {
    RealMatrix entries;  // rows = places, columns = units
    long precision_bits = 0;
    std::vector<std::string> places;

    std::size_t s() const { return entries.rows(); }
};

// Aberth iteration at the requested precision. Throws PrecisionError if the
// inclusion disks cannot separate and classify every root.
PlaceSet compute_embeddings(const NumberFieldSpec& spec, long precision_bits,
                            std::vector<FinitePlaceSpec> finite_places = {});

// Values at every infinite embedding: real roots first, then complex representatives.
std::vector<Complex> embed_element(const Coords& coords, const NumberFieldSpec& spec, const PlaceSet& places);

mpq_class field_norm(const Coords& coords, const NumberFieldSpec& spec);

// ord_P via the norm; requires the unique-prime flag.
long long ord_at_finite_place(const Coords& coords, const FinitePlaceSpec& place, const NumberFieldSpec& spec);

LogEmbeddingMatrix build_log_matrix(const UnitSystem& units, const PlaceSet& places, const NumberFieldSpec& spec);

struct ProductFormulaCheck {
    bool ok;
    Real max_deviation;
};
ProductFormulaCheck check_product_formula(const RealMatrix& R, const Real& tol);

Coords field_mul(const Coords& a, const Coords& b, const NumberFieldSpec& spec);
Coords field_inv(const Coords& a, const NumberFieldSpec& spec);
Coords field_pow(const Coords& a, long long e, const NumberFieldSpec& spec);
Coords field_one(const NumberFieldSpec& spec);

}  // namespace sunit
