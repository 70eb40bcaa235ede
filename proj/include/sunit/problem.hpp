#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "sunit/numfield.hpp"
#include "sunit/reduction.hpp"

namespace sunit {

// Inputs for the Wildanger-style constants; the sieve itself is external.
struct WildangerInputs {
    Real s1, s2, s3, k_next;
};

struct ProblemDocument {
    std::string name;
    std::string description;
    NumberFieldSpec field;
    std::vector<std::vector<long long>> s_units;  // integral-basis coordinates
    std::vector<FinitePlaceSpec> finite_places;
    long precision_bits = 256;
    mpz_class initial_bound;
    // True when the bound holds for exponents over any fundamental system
    // (no rescaling by the transform); false when it refers to s_units only.
    bool bound_any_system = false;
    std::vector<PadicData> padic;
    std::optional<std::vector<mpq_class>> generalized_r;
    std::optional<WildangerInputs> wildanger;

    std::size_t r1 = 0, r2 = 0;  // signature, from an exact real-root count
    std::size_t s() const { return r1 + r2 + finite_places.size(); }
};

// Throws ValidationError with a field path ("s_units[2]: ...") on any schema violation.
ProblemDocument parse_problem(const std::string& json_text, const std::string& source = "<input>");
// Reads a file; a bare bundled name such as "example1" also resolves.
ProblemDocument load_problem(const std::string& path_or_name);

struct BundledExample {
    const char* name;
    const char* json;
};
const std::vector<BundledExample>& bundled_examples();

}  // namespace sunit
