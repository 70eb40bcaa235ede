#pragma once

#include <gmpxx.h>
#include <vector>

#include "sunit/real.hpp"

namespace sunit {

// Dense polynomial over Q, ascending coefficients, no trailing zeros.
using QPoly = std::vector<mpq_class>;

void trim(QPoly& a);
int degree(const QPoly& a);  // -1 for the zero polynomial
QPoly to_qpoly(const std::vector<mpz_class>& a);
QPoly derivative(const QPoly& a);
QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const QPoly& b);
// a = q*b + r with deg r < deg b.
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly mod(const QPoly& a, const QPoly& b);
QPoly gcd(QPoly a, QPoly b);  // monic, or zero
// Inverse of a modulo m. Throws std::domain_error if not coprime.
QPoly inverse_mod(const QPoly& a, const QPoly& m);
mpq_class resultant(QPoly a, QPoly b);
// Number of distinct real roots (Sturm sequence).
int count_real_roots(const QPoly& a);

Complex evaluate(const QPoly& a, const Complex& z);
Real evaluate(const QPoly& a, const Real& x);
// Sum |a_i| |z|^i, used for rounding error bounds.
Real abs_evaluate(const QPoly& a, const Real& r);

}  // namespace sunit
