#include "sunit/problem.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sunit/errors.hpp"

namespace sunit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

const json& field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

const json* optional_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return (it == obj.end() || it->is_null()) ? nullptr : &*it;
}

const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
}

// Integers may be JSON numbers or decimal strings (for values beyond 64 bits).
mpz_class integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) != 0) fail(path, "expected an integer, got \"" + v.get<std::string>() + "\"");
        return z;
    }
    fail(path, "expected an integer");
}

long long small_integer(const json& v, const std::string& path) {
    mpz_class z = integer(v, path);
    if (!z.fits_slong_p()) fail(path, "integer out of range");
    return z.get_si();
}

// Rationals are integers or strings "a/b".
mpq_class rational(const json& v, const std::string& path) {
    if (v.is_number_integer()) return mpq_class(integer(v, path));
    if (!v.is_string()) fail(path, "expected a rational number");
    mpq_class q;
    std::string s = v.get<std::string>();
    if (s.empty() || q.set_str(s, 10) != 0) fail(path, "expected a rational number, got \"" + s + "\"");
    if (q.get_den() == 0) fail(path, "zero denominator");
    q.canonicalize();
    return q;
}

// Reals are numbers or decimal strings.
Real real(const json& v, const std::string& path) {
    if (v.is_number_integer()) return Real(v.get<long long>());
    if (v.is_number()) return Real(v.get<double>());
    if (v.is_string()) {
        try {
            return Real(v.get<std::string>());
        } catch (const std::exception&) {
            fail(path, "expected a decimal number");
        }
    }
    fail(path, "expected a number");
}

std::vector<long long> int_row(const json& v, const std::string& path, std::size_t len) {
    array(v, path);
    if (v.size() != len) fail(path, "expected length " + std::to_string(len) + ", got " + std::to_string(v.size()));
    std::vector<long long> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(small_integer(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Coords rat_row(const json& v, const std::string& path, std::size_t len) {
    array(v, path);
    if (v.size() != len) fail(path, "expected length " + std::to_string(len) + ", got " + std::to_string(v.size()));
    Coords out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

FinitePlaceSpec parse_place(const json& v, const std::string& path, std::size_t n, std::size_t units) {
    if (!v.is_object()) fail(path, "expected an object");
    FinitePlaceSpec fp;
    fp.p = integer(field(v, path, "p"), path + ".p");
    if (fp.p < 2 || mpz_probab_prime_p(fp.p.get_mpz_t(), 30) == 0) fail(path + ".p", "must be prime");
    if (auto* f = optional_field(v, "f")) fp.f = static_cast<int>(small_integer(*f, path + ".f"));
    if (auto* e = optional_field(v, "e")) fp.e = static_cast<int>(small_integer(*e, path + ".e"));
    if (fp.f < 1) fail(path + ".f", "must be positive");
    if (fp.e < 1) fail(path + ".e", "must be positive");
    if (static_cast<std::size_t>(fp.e) * static_cast<std::size_t>(fp.f) > n) fail(path, "e*f exceeds the field degree");
    if (auto* u = optional_field(v, "unique_prime")) {
        if (!u->is_boolean()) fail(path + ".unique_prime", "expected a boolean");
        fp.unique_prime = u->get<bool>();
    }
    if (auto* g = optional_field(v, "generator")) fp.generator = rat_row(*g, path + ".generator", n);
    if (auto* o = optional_field(v, "ord_vector")) fp.ord_vector = int_row(*o, path + ".ord_vector", units);
    if (!fp.ord_vector && !fp.unique_prime)
        fail(path, "needs either 'ord_vector' or 'unique_prime': true to compute valuations");
    return fp;
}

PadicData parse_padic(const json& v, const std::string& path, std::size_t finite_count) {
    if (!v.is_object()) fail(path, "expected an object");
    PadicData d;
    long long idx = small_integer(field(v, path, "place"), path + ".place");
    if (idx < 0 || static_cast<std::size_t>(idx) >= finite_count)
        fail(path + ".place", "index " + std::to_string(idx) + " does not name a finite place");
    d.finite_index = static_cast<std::size_t>(idx);
    long long sp = small_integer(field(v, path, "s_prime"), path + ".s_prime");
    long long digits = small_integer(field(v, path, "digits"), path + ".digits");
    if (sp < 1) fail(path + ".s_prime", "must be positive");
    if (digits < 1) fail(path + ".digits", "must be positive");
    d.s_prime = static_cast<std::size_t>(sp);
    d.digits = static_cast<std::size_t>(digits);
    const json& kap = array(field(v, path, "kappa"), path + ".kappa");
    if (kap.empty()) fail(path + ".kappa", "needs at least one row");
    for (std::size_t i = 0; i < kap.size(); ++i) {
        std::string rp = path + ".kappa[" + std::to_string(i) + "]";
        array(kap[i], rp);
        if (kap[i].size() != d.s_prime + 1)
            fail(rp, "expected length " + std::to_string(d.s_prime + 1) + ", got " + std::to_string(kap[i].size()));
        std::vector<mpz_class> row;
        for (std::size_t j = 0; j < kap[i].size(); ++j) row.push_back(integer(kap[i][j], rp + "[" + std::to_string(j) + "]"));
        d.kappa.push_back(std::move(row));
    }
    if (auto* o = optional_field(v, "ord_lambda")) d.ord_lambda = small_integer(*o, path + ".ord_lambda");
    if (auto* c = optional_field(v, "c3")) d.c3 = real(*c, path + ".c3");
    if (auto* a = optional_field(v, "alpha_abs")) {
        d.alpha_abs = real(*a, path + ".alpha_abs");
        if (d.alpha_abs.sign() <= 0) fail(path + ".alpha_abs", "must be positive");
    }
    return d;
}

}  // namespace

ProblemDocument parse_problem(const std::string& json_text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) fail(source, "top level must be an object");

    ProblemDocument out;
    if (auto* n = optional_field(doc, "name")) out.name = n->is_string() ? n->get<std::string>() : "";
    if (auto* d = optional_field(doc, "description")) out.description = d->is_string() ? d->get<std::string>() : "";

    const json& fj = field(doc, "$", "field");
    if (!fj.is_object()) fail("field", "expected an object");
    const json& mp = array(field(fj, "field", "min_poly"), "field.min_poly");
    std::vector<mpz_class> poly;
    for (std::size_t i = 0; i < mp.size(); ++i) poly.push_back(integer(mp[i], "field.min_poly[" + std::to_string(i) + "]"));
    if (poly.size() < 3) fail("field.min_poly", "degree must be at least 2");
    if (poly.back() != 1) fail("field.min_poly", "must be monic with ascending coefficients");
    const std::size_t n = poly.size() - 1;

    std::optional<RatMatrix> basis;
    if (auto* b = optional_field(fj, "integral_basis")) {
        array(*b, "field.integral_basis");
        if (b->size() != n) fail("field.integral_basis", "expected " + std::to_string(n) + " rows, got " + std::to_string(b->size()));
        RatMatrix B(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            Coords row = rat_row((*b)[i], "field.integral_basis[" + std::to_string(i) + "]", n);
            for (std::size_t j = 0; j < n; ++j) B(i, j) = row[j];
        }
        basis = std::move(B);
    }
    try {
        out.field = NumberFieldSpec::make(poly, basis);
    } catch (const ValidationError& e) {
        fail("field", e.what());
    }

    const json& su = array(field(doc, "$", "s_units"), "s_units");
    for (std::size_t i = 0; i < su.size(); ++i) out.s_units.push_back(int_row(su[i], "s_units[" + std::to_string(i) + "]", n));

    if (auto* fp = optional_field(doc, "finite_places")) {
        array(*fp, "finite_places");
        for (std::size_t i = 0; i < fp->size(); ++i)
            out.finite_places.push_back(parse_place((*fp)[i], "finite_places[" + std::to_string(i) + "]", n, out.s_units.size()));
    }

    if (auto* pb = optional_field(doc, "precision_bits")) {
        out.precision_bits = small_integer(*pb, "precision_bits");
        if (out.precision_bits < 64 || out.precision_bits > 16384) fail("precision_bits", "must lie in [64, 16384]");
    }
    out.initial_bound = integer(field(doc, "$", "initial_bound"), "initial_bound");
    if (out.initial_bound < 1) fail("initial_bound", "must be positive");
    if (auto* sc = optional_field(doc, "initial_bound_scope")) {
        std::string v = sc->is_string() ? sc->get<std::string>() : "";
        if (v == "any_system") out.bound_any_system = true;
        else if (v != "system") fail("initial_bound_scope", "expected \"system\" or \"any_system\"");
    }

    // Signature from an exact Sturm count, so dimension checks need no numerics.
    int real_roots = count_real_roots(out.field.poly());
    out.r1 = static_cast<std::size_t>(real_roots);
    out.r2 = (n - out.r1) / 2;
    if (out.s_units.size() + 1 != out.s())
        fail("s_units", "expected " + std::to_string(out.s() - 1) + " units for s = " + std::to_string(out.s()) +
                            " places (r1 = " + std::to_string(out.r1) + ", r2 = " + std::to_string(out.r2) +
                            ", finite = " + std::to_string(out.finite_places.size()) + "), got " +
                            std::to_string(out.s_units.size()));

    if (auto* pd = optional_field(doc, "padic")) {
        array(*pd, "padic");
        for (std::size_t i = 0; i < pd->size(); ++i)
            out.padic.push_back(parse_padic((*pd)[i], "padic[" + std::to_string(i) + "]", out.finite_places.size()));
    }

    if (auto* r = optional_field(doc, "generalized_r")) {
        array(*r, "generalized_r");
        if (r->size() != out.s()) fail("generalized_r", "expected length " + std::to_string(out.s()) + ", got " + std::to_string(r->size()));
        std::vector<mpq_class> rv;
        for (std::size_t i = 0; i < r->size(); ++i) {
            mpq_class q = rational((*r)[i], "generalized_r[" + std::to_string(i) + "]");
            if (q <= 0) fail("generalized_r[" + std::to_string(i) + "]", "must be positive");
            rv.push_back(q);
        }
        out.generalized_r = std::move(rv);
    }

    if (auto* w = optional_field(doc, "wildanger")) {
        if (!w->is_object()) fail("wildanger", "expected an object");
        out.wildanger = WildangerInputs{real(field(*w, "wildanger", "s1"), "wildanger.s1"),
                                        real(field(*w, "wildanger", "s2"), "wildanger.s2"),
                                        real(field(*w, "wildanger", "s3"), "wildanger.s3"),
                                        real(field(*w, "wildanger", "k_next"), "wildanger.k_next")};
    }
    return out;
}

ProblemDocument load_problem(const std::string& path_or_name) {
    std::ifstream in(path_or_name);
    if (!in) {
        for (const auto& ex : bundled_examples())
            if (path_or_name == ex.name) return parse_problem(ex.json, ex.name);
        throw ValidationError(path_or_name + ": cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), path_or_name);
}

}  // namespace sunit
