#include "sunit/real.hpp"

#include <cstdlib>
#include <memory>

#include "sunit/errors.hpp"

namespace sunit {

namespace {
thread_local long t_precision = 256;
}

long working_precision() { return t_precision; }

void set_working_precision(long bits) {
    require(bits >= MPFR_PREC_MIN && bits <= 1 << 20, "precision out of range");
    t_precision = bits;
}

Real::Real() {
    mpfr_init2(v_, t_precision);
    mpfr_set_zero(v_, 1);
}
Real::Real(int v) : Real(static_cast<long>(v)) {}
Real::Real(long v) {
    mpfr_init2(v_, t_precision);
    mpfr_set_si(v_, v, MPFR_RNDN);
}
Real::Real(long long v) {
    mpfr_init2(v_, t_precision);
    mpfr_set_sj(v_, v, MPFR_RNDN);
}
Real::Real(double v) {
    mpfr_init2(v_, t_precision);
    mpfr_set_d(v_, v, MPFR_RNDN);
}
Real::Real(const mpz_class& v) {
    mpfr_init2(v_, t_precision);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}
Real::Real(const mpq_class& v) {
    mpfr_init2(v_, t_precision);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}
Real::Real(const std::string& decimal) {
    mpfr_init2(v_, t_precision);
    if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw ValidationError("not a decimal number: " + decimal);
    }
}
Real::Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}
Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}
Real& Real::operator=(const Real& o) {
    if (this != &o) {
        if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}
Real::~Real() { mpfr_clear(v_); }

long long Real::to_ll() const { return mpfr_get_sj(v_, MPFR_RNDZ); }

mpz_class Real::floor_z() const {
    require(mpfr_number_p(v_), "floor of non-finite value");
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}
mpz_class Real::ceil_z() const {
    require(mpfr_number_p(v_), "ceil of non-finite value");
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDU);
    return z;
}
mpz_class Real::round_z() const {
    require(mpfr_number_p(v_), "round of non-finite value");
    Real t(*this);
    mpfr_round(t.v_, v_);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
    return z;
}
mpq_class Real::to_q() const {
    require(mpfr_number_p(v_), "non-finite value");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    mpq_class q(m);
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
    q.canonicalize();
    return q;
}

std::string Real::str(int digits) const {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

std::string Real::fixed(int decimals) const {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(decimals) + "RZf";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    if (out.size() > 1 && out[0] == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

Real& Real::operator+=(const Real& o) {
    Real r;
    mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
    return *this = std::move(r);
}
Real& Real::operator-=(const Real& o) {
    Real r;
    mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
    return *this = std::move(r);
}
Real& Real::operator*=(const Real& o) {
    Real r;
    mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
    return *this = std::move(r);
}
Real& Real::operator/=(const Real& o) {
    if (mpfr_zero_p(o.v_)) throw std::domain_error("division by zero");
    Real r;
    mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
    return *this = std::move(r);
}
Real Real::operator-() const {
    Real r;
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

#define SUNIT_UNARY(name, call)                 \
    Real name(const Real& x) {                  \
        Real r;                                 \
        call(r.get(), x.get(), MPFR_RNDN);      \
        return r;                               \
    }
SUNIT_UNARY(abs, mpfr_abs)
SUNIT_UNARY(exp, mpfr_exp)
SUNIT_UNARY(log2, mpfr_log2)
SUNIT_UNARY(log10, mpfr_log10)
#undef SUNIT_UNARY

Real sqrt(const Real& x) {
    if (x.sign() < 0) throw std::domain_error("sqrt of negative value");
    Real r;
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}
Real log(const Real& x) {
    if (x.sign() <= 0) throw std::domain_error("log of non-positive value");
    Real r;
    mpfr_log(r.get(), x.get(), MPFR_RNDN);
    return r;
}
Real pow(const Real& x, const Real& y) {
    Real r;
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}
Real floor(const Real& x) {
    Real r;
    mpfr_floor(r.get(), x.get());
    return r;
}
Real ceil(const Real& x) {
    Real r;
    mpfr_ceil(r.get(), x.get());
    return r;
}
Real ldexp(const Real& x, long e) {
    Real r;
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}
Real pi() {
    Real r;
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}
Real two_pow(long e) { return ldexp(Real(1), e); }
const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& x) {
    return os << x.str(static_cast<int>(os.precision()));
}

Complex& Complex::operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
}
Complex& Complex::operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}
Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}
Complex& Complex::operator/=(const Complex& o) {
    Real d = norm2(o);
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z) {
    Real r;
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}
Complex conj(const Complex& z) { return Complex(z.re, -z.im); }

}  // namespace sunit
