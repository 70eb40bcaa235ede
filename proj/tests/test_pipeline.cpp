#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "sunit/errors.hpp"
#include "sunit/pipeline.hpp"

using namespace sunit;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(SUNITOPT_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = std::string(TEST_TMP_DIR) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("truncation to six decimals") {
    CHECK(truncate6(0.6459239) == "0.645923");
    CHECK(truncate6(0.0253257) == "0.025325");
    CHECK(truncate6(1.0) == "1.000000");
    CHECK(truncate6(0.0000029) == "0.000002");
}

TEST_CASE("machine report round-trips") {
    PipelineFlags f;
    f.certify = CertMethod::FinckePohst;
    Report r = run_pipeline(load_problem("example1"), f);
    std::string text = emit_report(r, ReportFormat::Machine);
    Report back = parse_report(text);
    r.timings.clear();
    CHECK(back == r);
    CHECK(emit_report(back, ReportFormat::Machine) == text);
    CHECK(text.find("sunit-report/1") != std::string::npos);
    CHECK_THROWS_AS(parse_report("{}"), ValidationError);
}

TEST_CASE("reports are deterministic") {
    PipelineFlags one, many;
    one.threads = 1;
    many.threads = 4;
    auto doc = load_problem("example4");
    CHECK(emit_report(run_pipeline(doc, one), ReportFormat::Machine) ==
          emit_report(run_pipeline(doc, many), ReportFormat::Machine));
}

TEST_CASE("report contents for example 1") {
    Report r = run_pipeline(load_problem("example1"));
    CHECK_FALSE(r.certificate.has_value());
    REQUIRE(r.columns.size() == 3);
    CHECK(r.s == 5);
    CHECK(r.c_ini == "1066");
    REQUIRE(r.c_ini_transformed);
    CHECK(*r.c_ini_transformed == "3198");
    CHECK(r.power_products[0] == "e1*e2*e3*e4^2");
    for (const auto& c : r.columns) CHECK(std::abs(c.cstar_ratio - c.cstar / r.n_old_f0) < 1e-6);
    std::string human = emit_report(r, ReportFormat::Human);
    CHECK(human.find("0.645923") != std::string::npos);
    CHECK(human.find("finite:p=2") != std::string::npos);
}

TEST_CASE("flags select the work done") {
    auto doc = load_problem("example1");
    PipelineFlags f;
    f.optimize = false;
    f.reduce = false;
    f.columns = {CstarChoice::Old, CstarChoice::New};
    Report r = run_pipeline(doc, f);
    CHECK(r.steps.empty());
    CHECK_FALSE(r.n_fk.has_value());
    for (const auto& c : r.columns) CHECK_FALSE(c.c_red.has_value());

    PipelineFlags p;
    p.precision_bits = 512;
    p.initial_bound = mpz_class(500);
    Report hi = run_pipeline(doc, p);
    CHECK(hi.precision_bits == 512);
    CHECK(hi.c_ini == "500");
    CHECK(std::abs(hi.n_fk.value() - 0.931871) < 1e-5);

    CHECK(parse_cstar_choice("optimized") == CstarChoice::Optimized);
    CHECK_THROWS_AS(parse_cstar_choice("best"), ValidationError);
}

TEST_CASE("command-line exit codes") {
    CHECK(run_cli("examples") == 0);
    CHECK(run_cli("examples --format machine") == 0);
    CHECK(run_cli("norms example1") == 0);
    CHECK(run_cli("reduce example1 --cstar old --format machine") == 0);
    CHECK(run_cli("optimize example1 --certify exhaustive") == 0);
    CHECK(run_cli("norms /nonexistent.json") == 2);
    CHECK(run_cli("norms " + write_temp("bad.json", "{ \"field\": ")) == 2);
    CHECK(run_cli("norms example1 --precision-bits 8") == 2);
    CHECK(run_cli("frobnicate") == 2);
    // The loose radius on s = 9 exceeds the enumeration point cap.
    CHECK(run_cli("optimize example3 --certify fincke_pohst --fp-radius loose") == 4);
}
