// Command-line front end: norms, optimize, reduce, report, examples.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sunit/errors.hpp"
#include "sunit/pipeline.hpp"

using namespace sunit;

namespace {

struct Common {
    std::string file;
    long precision_bits = 0;
    std::string initial_bound;
    std::string format = "human";
    unsigned threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool needs_file = true) {
    if (needs_file) sub->add_option("file", c.file, "problem document (JSON) or bundled example name")->required();
    sub->add_option("--precision-bits", c.precision_bits, "working precision in bits")->check(CLI::Range(64, 16384));
    sub->add_option("--initial-bound", c.initial_bound, "initial exponent bound C_ini");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

PipelineFlags base_flags(const Common& c) {
    PipelineFlags f;
    if (c.precision_bits) f.precision_bits = c.precision_bits;
    if (!c.initial_bound.empty()) {
        mpz_class b;
        if (b.set_str(c.initial_bound, 10) != 0 || b < 1)
            throw ValidationError("--initial-bound: expected a positive integer");
        f.initial_bound = b;
    }
    f.threads = c.threads;
    return f;
}

std::optional<CertMethod> parse_certify(const std::string& s) {
    if (s == "none") return std::nullopt;
    if (s == "exhaustive") return CertMethod::Exhaustive;
    return CertMethod::FinckePohst;
}

ReportFormat format_of(const Common& c) { return c.format == "machine" ? ReportFormat::Machine : ReportFormat::Human; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-unit system optimization and exponent bound reduction"};
    app.require_subcommand(1);

    Common norms_c, opt_c, red_c, rep_c, ex_c;
    std::string opt_certify = "none", rep_certify = "none", fp_radius = "tight", cstar = "optimized";
    bool full_matrix = false;

    auto* norms = app.add_subcommand("norms", "central-norm constants N_old(F0) and N(F0)");
    add_common(norms, norms_c);

    auto* opt = app.add_subcommand("optimize", "heuristic optimization with optional certification");
    add_common(opt, opt_c);
    opt->add_option("--certify", opt_certify, "certification method")
        ->check(CLI::IsMember({"none", "exhaustive", "fincke_pohst"}));
    opt->add_option("--fp-radius", fp_radius, "Fincke-Pohst radius: N (tight) or sqrt(s) N (loose)")
        ->check(CLI::IsMember({"tight", "loose"}));
    opt->add_flag("--full-matrix-fallback", full_matrix, "last-resort unimodular matrix search");

    auto* red = app.add_subcommand("reduce", "bound reduction for one choice of C*");
    add_common(red, red_c);
    red->add_option("--cstar", cstar, "which constant to use")->check(CLI::IsMember({"old", "new", "optimized"}));

    auto* rep = app.add_subcommand("report", "full run: norms, optimization and reduction for all three C*");
    add_common(rep, rep_c);
    rep->add_option("--certify", rep_certify, "certification method")
        ->check(CLI::IsMember({"none", "exhaustive", "fincke_pohst"}));

    auto* ex = app.add_subcommand("examples", "list bundled example problems");
    add_common(ex, ex_c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*ex) {
            if (ex_c.format == "machine") {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& b : bundled_examples()) {
                    ProblemDocument d = parse_problem(b.json, b.name);
                    j.push_back({{"name", b.name}, {"description", d.description}, {"degree", d.field.degree()},
                                 {"s", d.s()}, {"initial_bound", d.initial_bound.get_str()}});
                }
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& b : bundled_examples()) {
                    ProblemDocument d = parse_problem(b.json, b.name);
                    std::cout << b.name << "  n = " << d.field.degree() << ", s = " << d.s()
                              << ", C_ini = " << d.initial_bound.get_str() << "  " << d.description << "\n";
                }
            }
            return 0;
        }

        const Common* c = nullptr;
        PipelineFlags flags;
        if (*norms) {
            c = &norms_c;
            flags = base_flags(*c);
            flags.optimize = false;
            flags.reduce = false;
            flags.columns = {CstarChoice::Old, CstarChoice::New};
        } else if (*opt) {
            c = &opt_c;
            flags = base_flags(*c);
            flags.certify = parse_certify(opt_certify);
            flags.fp_radius = fp_radius == "loose" ? FpRadius::Loose : FpRadius::Tight;
            flags.full_matrix_fallback = full_matrix;
            flags.reduce = false;
        } else if (*red) {
            c = &red_c;
            flags = base_flags(*c);
            CstarChoice choice = parse_cstar_choice(cstar);
            flags.optimize = choice == CstarChoice::Optimized;
            flags.columns = {choice};
        } else {
            c = &rep_c;
            flags = base_flags(*c);
            flags.certify = parse_certify(rep_certify);
        }
        ProblemDocument doc = load_problem(c->file);
        Report r = run_pipeline(doc, flags);
        std::cout << emit_report(r, format_of(*c));
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "error: precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: budget exceeded: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
