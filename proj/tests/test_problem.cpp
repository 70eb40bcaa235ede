#include <string>

#include "doctest.h"
#include "sunit/errors.hpp"
#include "sunit/problem.hpp"

using namespace sunit;

namespace {

// Q(sqrt 2) with the unit 1 + sqrt 2.
const char* kQuadratic = R"({
  "field": { "min_poly": [-2, 0, 1] },
  "s_units": [[1, 1]],
  "initial_bound": 100
})";

std::string error_of(const std::string& text) {
    try {
        parse_problem(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

std::string with(const std::string& base, const std::string& from, const std::string& to) {
    std::string s = base;
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("bundled examples load") {
    REQUIRE(bundled_examples().size() == 4);
    ProblemDocument d = load_problem("example1");
    CHECK(d.field.degree() == 8);
    CHECK(d.s() == 5);
    CHECK(d.r1 == 0);
    CHECK(d.r2 == 4);
    CHECK(d.initial_bound == 1066);
    CHECK_FALSE(d.bound_any_system);
    CHECK(load_problem("example2").s() == 10);
    CHECK(load_problem("example3").r1 == 9);
    CHECK(load_problem("example4").bound_any_system);
}

TEST_CASE("minimal document") {
    ProblemDocument d = parse_problem(kQuadratic);
    CHECK(d.s() == 2);
    CHECK(d.finite_places.empty());
    CHECK(d.precision_bits == 256);
    CHECK(d.padic.empty());
    CHECK_FALSE(d.generalized_r.has_value());
}

TEST_CASE("integers may be decimal strings") {
    ProblemDocument d = parse_problem(with(kQuadratic, "\"initial_bound\": 100", "\"initial_bound\": \"123456789012345678901234567890\""));
    CHECK(d.initial_bound == mpz_class("123456789012345678901234567890"));
}

TEST_CASE("schema errors carry a field path") {
    CHECK(error_of("{ not json").find("invalid JSON") != std::string::npos);
    CHECK(error_of("[1, 2]").find("top level") != std::string::npos);
    CHECK(error_of(with(kQuadratic, "\"initial_bound\": 100", "\"x\": 1")).find("initial_bound") != std::string::npos);
    CHECK(error_of(with(kQuadratic, "[[1, 1]]", "[[1, 1, 0]]")).find("s_units[0]: expected length 2, got 3") !=
          std::string::npos);
    CHECK(error_of(with(kQuadratic, "[[1, 1]]", "[[1, 1], [3, 2]]")).find("s_units: expected 1 units") !=
          std::string::npos);
    CHECK(error_of(with(kQuadratic, "[-2, 0, 1]", "[-2, 0, 2]")).find("field.min_poly") != std::string::npos);
    CHECK(error_of(with(kQuadratic, "[-2, 0, 1]", "[1, 2, 1]")).find("field") != std::string::npos);
    CHECK(error_of(with(kQuadratic, "\"initial_bound\": 100", "\"initial_bound\": 0")).find("initial_bound") !=
          std::string::npos);
    CHECK(error_of(with(kQuadratic, "\"initial_bound\": 100", "\"initial_bound\": 100, \"precision_bits\": 32"))
              .find("precision_bits") != std::string::npos);
    CHECK(error_of(with(kQuadratic, "\"initial_bound\": 100", "\"initial_bound\": 100, \"initial_bound_scope\": \"all\""))
              .find("initial_bound_scope") != std::string::npos);
}

TEST_CASE("wrong-length unit in a bundled example names the index") {
    std::string text = bundled_examples()[0].json;
    text = with(text, "[1, 0, 0, 1, 0, -1, 0, 0]", "[1, 0, 0, 1, 0, -1, 0]");
    CHECK(error_of(text).find("s_units[2]") != std::string::npos);
}

TEST_CASE("finite place validation") {
    std::string base = with(kQuadratic, "\"s_units\": [[1, 1]]",
                            "\"s_units\": [[1, 1], [0, 1]], \"finite_places\": [{ \"p\": 2, \"f\": 1, \"e\": 2, "
                            "\"unique_prime\": true }]");
    ProblemDocument d = parse_problem(base);
    CHECK(d.s() == 3);
    CHECK(error_of(with(base, "\"p\": 2", "\"p\": 4")).find("finite_places[0].p: must be prime") != std::string::npos);
    CHECK(error_of(with(base, "\"e\": 2", "\"e\": 3")).find("finite_places[0]") != std::string::npos);
    CHECK(error_of(with(base, ", \"unique_prime\": true", "")).find("ord_vector") != std::string::npos);
    CHECK_NOTHROW(parse_problem(with(base, "\"unique_prime\": true", "\"ord_vector\": [0, 1]")));
    CHECK(error_of(with(base, "\"unique_prime\": true", "\"ord_vector\": [0]")).find("finite_places[0].ord_vector") !=
          std::string::npos);
}

TEST_CASE("p-adic section") {
    std::string base = with(kQuadratic, "\"s_units\": [[1, 1]]",
                            "\"s_units\": [[1, 1], [0, 1]], \"finite_places\": [{ \"p\": 2, \"e\": 2, "
                            "\"unique_prime\": true }], \"padic\": [{ \"place\": 0, \"s_prime\": 2, \"digits\": 30, "
                            "\"kappa\": [[\"5\", 7, \"123456789\"]], \"ord_lambda\": 1 }]");
    ProblemDocument d = parse_problem(base);
    REQUIRE(d.padic.size() == 1);
    CHECK(d.padic[0].kappa[0][2] == 123456789);
    CHECK(d.padic[0].ord_lambda == 1);
    CHECK(error_of(with(base, "\"place\": 0", "\"place\": 1")).find("padic[0].place") != std::string::npos);
    CHECK(error_of(with(base, "[\"5\", 7, \"123456789\"]", "[\"5\", 7]")).find("padic[0].kappa[0]") !=
          std::string::npos);
    CHECK(error_of(with(base, "\"5\"", "\"five\"")).find("padic[0].kappa[0][0]") != std::string::npos);
}

TEST_CASE("generalized r vector") {
    ProblemDocument d = parse_problem(with(kQuadratic, "\"initial_bound\": 100",
                                           "\"initial_bound\": 100, \"generalized_r\": [\"1/2\", 3]"));
    REQUIRE(d.generalized_r);
    CHECK((*d.generalized_r)[0] == mpq_class(1, 2));
    CHECK(error_of(with(kQuadratic, "\"initial_bound\": 100", "\"initial_bound\": 100, \"generalized_r\": [1]"))
              .find("generalized_r: expected length 2") != std::string::npos);
    CHECK(error_of(with(kQuadratic, "\"initial_bound\": 100", "\"initial_bound\": 100, \"generalized_r\": [1, 0]"))
              .find("generalized_r[1]") != std::string::npos);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ValidationError);
}
