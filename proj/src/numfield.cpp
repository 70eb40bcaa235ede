#include "sunit/numfield.hpp"

#include <algorithm>
#include <stdexcept>

#include "sunit/errors.hpp"

namespace sunit {

namespace {

constexpr long kGuardBits = 64;
constexpr int kMaxAberthIterations = 4000;

long ord_p(const mpz_class& v, const mpz_class& p) {
    if (v == 0) throw ValidationError("valuation of zero");
    mpz_class t = v;
    return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t()));
}

long ord_p(const mpq_class& v, const mpz_class& p) { return ord_p(v.get_num(), p) - ord_p(v.get_den(), p); }

struct Aberth {
    std::vector<Complex> z;
    std::vector<Real> radius;
};

// Simultaneous iteration followed by Gerschgorin-type inclusion radii
// r_i = n |p(z_i)| / |lc prod_{j != i} (z_i - z_j)|.
Aberth aberth(const QPoly& f) {
    const std::size_t n = static_cast<std::size_t>(degree(f));
    std::vector<Real> a;
    for (const auto& c : f) a.emplace_back(c);
    QPoly df = derivative(f);
    std::vector<Real> da;
    for (const auto& c : df) da.emplace_back(c);

    Real rho = pow(abs(a[0]) / abs(a[n]), Real(1) / Real(static_cast<long>(n)));
    Aberth out;
    const Real two_pi = 2 * pi();
    for (std::size_t k = 0; k < n; ++k) {
        Real ang = two_pi * Real(static_cast<long>(k)) / Real(static_cast<long>(n)) + Real(0.7);
        Real c, s;
        mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
        out.z.emplace_back(rho * c, rho * s);
    }

    auto horner = [](const std::vector<Real>& coef, const Complex& x) {
        Complex acc;
        for (std::size_t i = coef.size(); i-- > 0;) {
            acc *= x;
            acc.re += coef[i];
        }
        return acc;
    };

    const Real stop = two_pow(-(working_precision() - 8));
    int calm = 0;
    for (int it = 0; it < kMaxAberthIterations && calm < 2; ++it) {
        Real worst(0);
        for (std::size_t k = 0; k < n; ++k) {
            Complex pz = horner(a, out.z[k]);
            if (pz.re.is_zero() && pz.im.is_zero()) continue;
            Complex dz = horner(da, out.z[k]);
            Complex w = norm2(dz).is_zero() ? Complex(Real(1e-3)) : pz / dz;
            Complex sum;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) sum += Complex(Real(1)) / (out.z[k] - out.z[j]);
            Complex denom = Complex(Real(1)) - w * sum;
            Complex corr = norm2(denom).is_zero() ? w : w / denom;
            out.z[k] -= corr;
            Real rel = abs(corr) / max(Real(1), abs(out.z[k]));
            if (rel > worst) worst = rel;
        }
        calm = worst < stop ? calm + 1 : 0;
    }

    // Horner rounding bound: |fl(p(z)) - p(z)| <= 4n u sum |a_i||z|^i.
    const Real unit = two_pow(-working_precision());
    for (std::size_t i = 0; i < n; ++i) {
        Real pz = abs(horner(a, out.z[i]));
        pz += 4 * Real(static_cast<long>(n)) * unit * abs_evaluate(f, abs(out.z[i]));
        Real prod = abs(a[n]);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) prod *= abs(out.z[i] - out.z[j]);
        if (prod.is_zero()) throw PrecisionError("coincident root approximations");
        out.radius.push_back(Real(static_cast<long>(n)) * pz / prod);
    }
    return out;
}

}  // namespace

NumberFieldSpec NumberFieldSpec::make(std::vector<mpz_class> min_poly, std::optional<RatMatrix> basis) {
    NumberFieldSpec spec;
    while (!min_poly.empty() && min_poly.back() == 0) min_poly.pop_back();
    require(min_poly.size() >= 3, "minimal polynomial must have degree at least 2");
    require(min_poly[0] != 0, "minimal polynomial must have nonzero constant term");
    spec.min_poly = std::move(min_poly);
    QPoly f = spec.poly();
    require(sunit::degree(gcd(f, derivative(f))) == 0, "minimal polynomial is not squarefree");
    const std::size_t n = spec.degree();
    spec.integral_basis = basis ? *basis : RatMatrix::identity(n);
    require(spec.integral_basis.rows() == n && spec.integral_basis.cols() == n, "integral basis must be n x n");
    try {
        spec.basis_inverse_ = inverse(spec.integral_basis);
    } catch (const std::domain_error&) {
        throw ValidationError("integral basis is singular");
    }
    return spec;
}

QPoly NumberFieldSpec::to_power_basis(const Coords& c) const {
    const std::size_t n = degree();
    require(c.size() == n, "element coordinates must have length n");
    QPoly p(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) p[j] += c[i] * integral_basis(i, j);
    }
    trim(p);
    return p;
}

Coords NumberFieldSpec::from_power_basis(const QPoly& p) const {
    const std::size_t n = degree();
    require(static_cast<std::size_t>(std::max(0, sunit::degree(p) + 1)) <= n, "polynomial not reduced");
    Coords c(n, 0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0) continue;
        for (std::size_t i = 0; i < n; ++i) c[i] += p[j] * basis_inverse_(j, i);
    }
    return c;
}

mpz_class FinitePlaceSpec::norm() const {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(f));
    return r;
}

void FinitePlaceSpec::validate(const NumberFieldSpec& spec, std::size_t unit_count) const {
    require(p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0, "finite place: p must be prime");
    require(f >= 1 && e >= 1, "finite place: e and f must be positive");
    if (unique_prime)
        require(spec.degree() % static_cast<std::size_t>(e * f) == 0, "finite place: e*f must divide n");
    if (ord_vector)
        require(ord_vector->size() == unit_count, "finite place: ord vector length must equal unit count");
    else
        require(unique_prime, "finite place: need an ord vector or the unique-prime flag");
    if (generator) {
        require(unique_prime, "finite place: generator requires the unique-prime flag");
        require(ord_at_finite_place(*generator, *this, spec) == 1, "finite place: generator must have ord 1");
    }
}

std::string PlaceSet::label(std::size_t v) const {
    if (v < r1()) return "real:" + std::to_string(v + 1);
    if (v < infinite()) return "complex:" + std::to_string(v - r1() + 1);
    return "finite:p=" + finite_places[v - infinite()].p.get_str();
}

UnitSystem UnitSystem::from_integer(const std::vector<std::vector<long long>>& units) {
    UnitSystem u;
    for (const auto& row : units) {
        Coords c;
        for (long long x : row) c.emplace_back(static_cast<long>(x));
        u.coordinates.push_back(std::move(c));
    }
    u.exponents = IntMatrix::identity(units.size());
    return u;
}

PlaceSet compute_embeddings(const NumberFieldSpec& spec, long precision_bits, std::vector<FinitePlaceSpec> finite_places) {
    PrecisionGuard guard(precision_bits + kGuardBits);
    const QPoly f = spec.poly();
    const std::size_t n = spec.degree();
    Aberth ab = aberth(f);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!(abs(ab.z[i] - ab.z[j]) > ab.radius[i] + ab.radius[j]))
                throw PrecisionError("root inclusion disks overlap");
    const Real target = two_pow(-precision_bits);
    for (std::size_t i = 0; i < n; ++i)
        if (ab.radius[i] > target * max(Real(1), abs(ab.z[i])))
            throw PrecisionError("root not certified to requested precision");

    PlaceSet ps;
    ps.precision_bits = precision_bits;
    std::size_t upper = 0, lower = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (abs(ab.z[i].im) > ab.radius[i]) {
            // Non-real root; its conjugate must sit in another disk.
            bool paired = false;
            Complex c = conj(ab.z[i]);
            for (std::size_t j = 0; j < n && !paired; ++j)
                paired = j != i && abs(c - ab.z[j]) <= ab.radius[i] + ab.radius[j];
            if (!paired) throw PrecisionError("conjugate root not located");
            if (ab.z[i].im.sign() > 0) {
                ps.complex_roots.push_back(ab.z[i]);
                ++upper;
            } else {
                ++lower;
            }
            continue;
        }
        // The disk meets the real axis; real iff the mirrored disk meets no other disk.
        Complex c = conj(ab.z[i]);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && abs(c - ab.z[j]) <= ab.radius[i] + ab.radius[j])
                throw PrecisionError("cannot decide whether a root is real");
        ps.real_roots.push_back(ab.z[i].re);
    }
    if (upper != lower || ps.r1() + 2 * ps.r2() != n) throw PrecisionError("inconsistent root classification");

    std::sort(ps.real_roots.begin(), ps.real_roots.end());
    std::sort(ps.complex_roots.begin(), ps.complex_roots.end(), [](const Complex& x, const Complex& y) {
        if (x.re != y.re) return x.re < y.re;
        return x.im < y.im;
    });
    ps.finite_places = std::move(finite_places);
    return ps;
}

std::vector<Complex> embed_element(const Coords& coords, const NumberFieldSpec& spec, const PlaceSet& places) {
    QPoly g = spec.to_power_basis(coords);
    std::vector<Complex> out;
    out.reserve(places.infinite());
    for (const auto& r : places.real_roots) out.emplace_back(evaluate(g, r), Real(0));
    for (const auto& z : places.complex_roots) out.push_back(evaluate(g, z));
    return out;
}

mpq_class field_norm(const Coords& coords, const NumberFieldSpec& spec) {
    QPoly g = spec.to_power_basis(coords);
    require(!g.empty(), "norm of the zero element");
    QPoly f = spec.poly();
    mpq_class lc_pow = 1;
    for (int i = 0; i < degree(g); ++i) lc_pow *= f.back();
    return resultant(f, g) / lc_pow;
}

long long ord_at_finite_place(const Coords& coords, const FinitePlaceSpec& place, const NumberFieldSpec& spec) {
    require(place.unique_prime, "ord via the norm requires the unique-prime flag");
    mpq_class nm = field_norm(coords, spec);
    long v = ord_p(nm, place.p);
    require(v % place.f == 0, "norm valuation not divisible by the residue degree");
    return v / place.f;
}

LogEmbeddingMatrix build_log_matrix(const UnitSystem& units, const PlaceSet& places, const NumberFieldSpec& spec) {
    const std::size_t s = places.s();
    require(units.size() + 1 == s, "unit system must have exactly s-1 units");
    require(units.exponents.cols() == units.size(), "exponent bookkeeping has the wrong shape");
    for (const auto& fp : places.finite_places) fp.validate(spec, units.exponents.rows());

    PrecisionGuard guard(places.precision_bits);
    LogEmbeddingMatrix lm;
    lm.precision_bits = places.precision_bits;
    lm.entries = RealMatrix(s, units.size());
    for (std::size_t v = 0; v < s; ++v) lm.places.push_back(places.label(v));

    for (std::size_t j = 0; j < units.size(); ++j) {
        std::vector<Complex> vals = embed_element(units.coordinates[j], spec, places);
        for (std::size_t v = 0; v < places.infinite(); ++v) {
            Real m = abs(vals[v]);
            require(!m.is_zero(), "unit vanishes at an embedding");
            lm.entries(v, j) = places.is_complex(v) ? 2 * log(m) : log(m);
        }
        for (std::size_t t = 0; t < places.finite_places.size(); ++t) {
            const FinitePlaceSpec& fp = places.finite_places[t];
            mpz_class ord = 0;
            if (fp.ord_vector) {
                for (std::size_t i = 0; i < units.exponents.rows(); ++i)
                    ord += mpz_class(static_cast<long>((*fp.ord_vector)[i])) * units.exponents(i, j);
            } else {
                ord = static_cast<long>(ord_at_finite_place(units.coordinates[j], fp, spec));
            }
            lm.entries(places.infinite() + t, j) = -Real(ord) * Real(static_cast<long>(fp.f)) * log(Real(fp.p));
        }
    }
    auto check = check_product_formula(lm.entries, two_pow(-places.precision_bits / 2));
    require(check.ok, "product formula violated (a unit has valuation outside S); deviation " +
                          check.max_deviation.str(6));
    return lm;
}

ProductFormulaCheck check_product_formula(const RealMatrix& R, const Real& tol) {
    Real worst(0);
    for (std::size_t j = 0; j < R.cols(); ++j) {
        Real sum(0);
        for (std::size_t i = 0; i < R.rows(); ++i) sum += R(i, j);
        if (abs(sum) > worst) worst = abs(sum);
    }
    return {worst < tol, worst};
}

Coords field_one(const NumberFieldSpec& spec) { return spec.from_power_basis(QPoly{mpq_class(1)}); }

Coords field_mul(const Coords& a, const Coords& b, const NumberFieldSpec& spec) {
    QPoly p = mod(spec.to_power_basis(a) * spec.to_power_basis(b), spec.poly());
    return spec.from_power_basis(p);
}

Coords field_inv(const Coords& a, const NumberFieldSpec& spec) {
    QPoly g = spec.to_power_basis(a);
    require(!g.empty(), "inverse of the zero element");
    return spec.from_power_basis(inverse_mod(g, spec.poly()));
}

Coords field_pow(const Coords& a, long long e, const NumberFieldSpec& spec) {
    Coords base = e < 0 ? field_inv(a, spec) : a;
    unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Coords acc = field_one(spec);
    while (k) {
        if (k & 1) acc = field_mul(acc, base, spec);
        k >>= 1;
        if (k) base = field_mul(base, base, spec);
    }
    return acc;
}

}  // namespace sunit
