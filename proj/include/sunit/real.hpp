#pragma once

#include <compare>
#include <gmpxx.h>
#include <mpfr.h>
#include <ostream>
#include <string>

namespace sunit {

// Working precision in bits for newly created Reals on this thread.
long working_precision();
void set_working_precision(long bits);

class PrecisionGuard {
public:
    explicit PrecisionGuard(long bits) : saved_(working_precision()) { set_working_precision(bits); }
    ~PrecisionGuard() { set_working_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    long saved_;
};

// MPFR value. Arithmetic results take the thread's working precision.
class Real {
public:
    Real();
    Real(int v);
    Real(long v);
    Real(long long v);
    Real(double v);
    explicit Real(const mpz_class& v);
    explicit Real(const mpq_class& v);
    explicit Real(const std::string& decimal);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    long precision() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long long to_ll() const;  // truncation toward zero
    mpz_class floor_z() const;
    mpz_class ceil_z() const;
    mpz_class round_z() const;
    mpq_class to_q() const;  // exact
    std::string str(int digits = 20) const;
    std::string fixed(int decimals) const;  // truncated toward zero
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real operator-() const;

    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }
    friend Real operator*(Real a, const Real& b) { return a *= b; }
    friend Real operator/(Real a, const Real& b) { return a /= b; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b);

private:
    mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real log2(const Real& x);
Real log10(const Real& x);
Real pow(const Real& x, const Real& y);
Real floor(const Real& x);
Real ceil(const Real& x);
Real ldexp(const Real& x, long e);  // x * 2^e
Real pi();
Real two_pow(long e);
const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

struct Complex {
    Real re, im;

    Complex() = default;
    Complex(Real r, Real i = Real()) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    Complex operator-() const { return Complex(-re, -im); }
};

Real abs(const Complex& z);
Real norm2(const Complex& z);  // |z|^2
Complex conj(const Complex& z);

}  // namespace sunit
