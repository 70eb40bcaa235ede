#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sunit/optimizer.hpp"
#include "sunit/problem.hpp"

namespace sunit {

enum class CstarChoice { Old, New, Optimized };
std::string to_string(CstarChoice c);
CstarChoice parse_cstar_choice(const std::string& s);

struct PipelineFlags {
    bool optimize = true;
    std::optional<CertMethod> certify;
    FpRadius fp_radius = FpRadius::Tight;
    bool full_matrix_fallback = false;
    bool reduce = true;
    std::vector<CstarChoice> columns{CstarChoice::Old, CstarChoice::New, CstarChoice::Optimized};
    std::optional<long> precision_bits;       // overrides the document
    std::optional<mpz_class> initial_bound;   // overrides the document
    unsigned threads = 0;
    long max_precision_bits = 16384;
};

// Plain values so that the machine format round-trips exactly.
struct ReportStep {
    std::size_t row = 0;
    std::vector<long long> candidate;
    double n_value = 0;
    bool operator==(const ReportStep&) const = default;
};

struct ReportCertificate {
    std::string method;
    long c0 = 0;
    std::vector<long> c_bounds;
    std::uint64_t examined = 0;
    std::string verdict;
    std::size_t row = 0;
    double n = 0;
    std::vector<long long> witness;
    bool operator==(const ReportCertificate&) const = default;
};

struct ReportPlace {
    std::string label;
    bool reducible = false;
    std::string bound;
    std::size_t iterations = 0;
    std::string note;
    bool operator==(const ReportPlace&) const = default;
};

struct ReportWildanger {
    double log10_k0 = 0;
    double c_plus = 0;
    double h_next = 0;
    bool operator==(const ReportWildanger&) const = default;
};

struct ReportColumn {
    std::string cstar_choice;  // old | new | optimized
    double cstar = 0;
    double cstar_ratio = 0;    // cstar / N_old(F_0)
    std::optional<std::string> c_ini;
    std::optional<std::string> c_red;
    std::optional<double> c_red_ratio;   // against the old column
    std::optional<double> domain_ratio;  // against the old column
    std::size_t iterations = 0;
    std::vector<ReportPlace> places;
    std::vector<std::string> warnings;
    std::optional<ReportWildanger> wildanger;
    bool operator==(const ReportColumn&) const = default;
};

struct Report {
    std::string name;
    std::size_t degree = 0, r1 = 0, r2 = 0, finite = 0, s = 0;
    long precision_bits = 0;
    std::vector<std::string> places;
    double n_old_f0 = 0;
    double n_f0 = 0;
    std::vector<double> row_norms_f0;
    std::optional<double> n_fk;
    std::vector<double> row_norms_fk;
    std::vector<ReportStep> steps;
    std::size_t rounds = 0;
    std::vector<std::vector<long long>> transform;  // R_k = R_0 * transform
    std::vector<std::string> power_products;
    std::string c_ini;
    std::optional<std::string> c_ini_transformed;
    std::optional<ReportCertificate> certificate;
    std::vector<ReportColumn> columns;
    std::optional<double> generalized_n_f0, generalized_n_fk;
    std::vector<std::string> warnings;
    // Wall-clock milliseconds per stage. Human format only.
    std::map<std::string, double> timings;

    bool operator==(const Report&) const = default;
};

// Retries with doubled precision on PrecisionError; PrecisionExhausted past the cap.
Report run_pipeline(const ProblemDocument& doc, const PipelineFlags& flags = {});

enum class ReportFormat { Human, Machine };
std::string emit_report(const Report& r, ReportFormat format);
// Inverse of the machine format; timings are not part of it.
Report parse_report(const std::string& machine_text);

// floor(x * 10^6) / 10^6 printed with six decimals.
std::string truncate6(double x);

}  // namespace sunit
