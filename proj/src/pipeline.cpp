#include "sunit/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "sunit/errors.hpp"
#include "sunit/reduction.hpp"

namespace sunit {

std::string to_string(CstarChoice c) {
    switch (c) {
        case CstarChoice::Old: return "old";
        case CstarChoice::New: return "new";
        case CstarChoice::Optimized: return "optimized";
    }
    return "?";
}

CstarChoice parse_cstar_choice(const std::string& s) {
    if (s == "old") return CstarChoice::Old;
    if (s == "new") return CstarChoice::New;
    if (s == "optimized") return CstarChoice::Optimized;
    throw ValidationError("unknown C* choice '" + s + "' (expected old, new or optimized)");
}

std::string truncate6(double x) {
    double t = std::floor(x * 1e6 + 1e-9) / 1e6;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", t);
    return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<double> to_doubles(const RealVec& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(x.to_double());
    return out;
}

// New kappa columns for a transformed unit system: kappa'_j = sum_i kappa_i A_ij mod p^digits.
PadicData transform_padic(const PadicData& d, const UnimodularTransform& A, const mpz_class& p) {
    PadicData out = d;
    const std::size_t k = A.size();
    if (d.s_prime < k) return out;
    mpz_class mod;
    mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), d.digits);
    for (std::size_t r = 0; r < d.kappa.size(); ++r)
        for (std::size_t j = 0; j < k; ++j) {
            mpz_class acc = 0;
            for (std::size_t i = 0; i < k; ++i) acc += d.kappa[r][1 + i] * A.matrix()(i, j);
            mpz_class m;
            mpz_mod(m.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
            out.kappa[r][1 + j] = m;
        }
    return out;
}

Report run_once(const ProblemDocument& doc, const PipelineFlags& flags, long prec) {
    PrecisionGuard guard(prec);
    Report rep;
    rep.name = doc.name;
    rep.degree = doc.field.degree();
    rep.precision_bits = prec;
    const mpz_class c_ini = flags.initial_bound ? *flags.initial_bound : doc.initial_bound;
    require(c_ini >= 1, "initial bound must be at least 1");
    rep.c_ini = c_ini.get_str();

    auto t0 = Clock::now();
    PlaceSet places = compute_embeddings(doc.field, prec, doc.finite_places);
    UnitSystem units = UnitSystem::from_integer(doc.s_units);
    LogEmbeddingMatrix lm = build_log_matrix(units, places, doc.field);
    rep.timings["embeddings"] = ms_since(t0);
    rep.r1 = places.r1();
    rep.r2 = places.r2();
    rep.finite = places.finite_places.size();
    rep.s = places.s();
    rep.places = lm.places;

    t0 = Clock::now();
    NormReport f0 = system_norm_new(lm.entries);
    rep.n_old_f0 = f0.n_old.to_double();
    rep.n_f0 = f0.n_new.to_double();
    rep.row_norms_f0 = to_doubles(f0.per_row);
    std::optional<GeneralizedValuationSpec> gspec;
    if (doc.generalized_r) {
        gspec = GeneralizedValuationSpec::make(*doc.generalized_r);
        rep.generalized_n_f0 = generalized_system_norm(prime_log_matrix(lm.entries, *gspec), *gspec).to_double();
    }
    rep.timings["norms"] = ms_since(t0);

    const std::size_t k = lm.entries.cols();
    UnimodularTransform A = UnimodularTransform::identity(k);
    std::optional<Real> n_fk;
    if (flags.optimize) {
        t0 = Clock::now();
        OptimizeOptions oo;
        oo.certify = flags.certify;
        oo.heuristic.threads = flags.threads;
        oo.cert.threads = flags.threads;
        oo.cert.radius = flags.fp_radius;
        oo.full_matrix_fallback = flags.full_matrix_fallback;
        OptimizeResult res = optimize(lm.entries, oo);
        A = res.transform;
        n_fk = res.final_report.n_new;
        rep.n_fk = n_fk->to_double();
        rep.row_norms_fk = to_doubles(res.final_report.per_row);
        rep.rounds = res.rounds;
        for (const auto& tr : res.traces)
            for (const auto& st : tr.steps) rep.steps.push_back({st.row, st.candidate, st.n_value.to_double()});
        if (res.certificate) {
            const Certificate& c = *res.certificate;
            rep.certificate = ReportCertificate{c.method == CertMethod::Exhaustive ? "exhaustive" : "fincke_pohst",
                                                c.c0,
                                                c.c_bounds,
                                                c.examined,
                                                c.verdict == Verdict::Optimal ? "optimal" : "improvement_found",
                                                c.row,
                                                c.n.to_double(),
                                                c.witness};
        }
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<long long> row;
            for (std::size_t j = 0; j < k; ++j) row.push_back(A.matrix()(i, j).get_si());
            rep.transform.push_back(std::move(row));
        }
        for (std::size_t j = 0; j < k; ++j) rep.power_products.push_back(power_product(A.matrix(), j));
        if (!doc.bound_any_system) rep.c_ini_transformed = transformed_initial_bound(c_ini, A).get_str();
        if (gspec)
            rep.generalized_n_fk =
                generalized_system_norm(prime_log_matrix(apply_transform(lm.entries, A), *gspec), *gspec).to_double();
        rep.timings["optimize"] = ms_since(t0);
    }

    std::optional<mpz_class> baseline_red;
    for (CstarChoice choice : flags.columns) {
        if (choice == CstarChoice::Optimized && !flags.optimize) continue;
        ReportColumn col;
        col.cstar_choice = to_string(choice);
        Real cstar = choice == CstarChoice::Old ? f0.n_old : choice == CstarChoice::New ? f0.n_new : *n_fk;
        col.cstar = cstar.to_double();
        col.cstar_ratio = (cstar / f0.n_old).to_double();

        if (flags.reduce) {
            t0 = Clock::now();
            LogEmbeddingMatrix cur = lm;
            mpz_class bound = c_ini;
            ReductionOptions ro;
            ro.threads = flags.threads;
            ro.padic = doc.padic;
            if (choice == CstarChoice::Optimized) {
                cur.entries = apply_transform(lm.entries, A);
                if (!doc.bound_any_system) bound = transformed_initial_bound(c_ini, A);
                for (auto& d : ro.padic) d = transform_padic(d, A, places.finite_places[d.finite_index].p);
            }
            ReductionOutcome out = reduce_to_fixpoint(cur, places, cstar, bound, ro);
            col.c_ini = bound.get_str();
            col.c_red = out.c_red.get_str();
            col.iterations = out.iterations;
            col.warnings = out.warnings;
            for (const auto& p : out.places)
                col.places.push_back({p.label, p.reducible, p.bound.get_str(), p.iterations, p.note});
            if (!baseline_red) baseline_red = out.c_red;
            col.c_red_ratio = (Real(out.c_red) / Real(*baseline_red)).to_double();
            col.domain_ratio = domain_ratio(*baseline_red, out.c_red, places.s()).to_double();
            if (doc.wildanger) {
                const auto& w = *doc.wildanger;
                WildangerConstants wc = wildanger_constants(cur.entries, out.c_red, w.s1, w.s2, w.s3, w.k_next, cstar);
                col.wildanger = ReportWildanger{log10(wc.k0).to_double(), wc.c_plus.to_double(), wc.h_next.to_double()};
            }
            rep.timings["reduce:" + col.cstar_choice] = ms_since(t0);
        }
        rep.columns.push_back(std::move(col));
    }
    return rep;
}

}  // namespace

Report run_pipeline(const ProblemDocument& doc, const PipelineFlags& flags) {
    long prec = flags.precision_bits ? *flags.precision_bits : doc.precision_bits;
    require(prec >= 64, "precision must be at least 64 bits");
    std::vector<std::string> notes;
    while (true) {
        try {
            Report r = run_once(doc, flags, prec);
            r.warnings.insert(r.warnings.begin(), notes.begin(), notes.end());
            return r;
        } catch (const PrecisionError& e) {
            if (prec * 2 > flags.max_precision_bits)
                throw PrecisionExhausted(std::string(e.what()) + " (cap " + std::to_string(flags.max_precision_bits) +
                                         " bits reached)");
            notes.push_back("precision raised from " + std::to_string(prec) + " to " + std::to_string(prec * 2) +
                            " bits: " + e.what());
            prec *= 2;
        }
    }
}

// ---- serialization ----

namespace {

using nlohmann::json;

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

json to_json(const Report& r) {
    json j;
    j["format"] = "sunit-report/1";
    j["name"] = r.name;
    j["degree"] = r.degree;
    j["r1"] = r.r1;
    j["r2"] = r.r2;
    j["finite"] = r.finite;
    j["s"] = r.s;
    j["precision_bits"] = r.precision_bits;
    j["places"] = r.places;
    j["n_old_f0"] = r.n_old_f0;
    j["n_f0"] = r.n_f0;
    j["row_norms_f0"] = r.row_norms_f0;
    j["n_fk"] = opt(r.n_fk);
    j["row_norms_fk"] = r.row_norms_fk;
    json steps = json::array();
    for (const auto& s : r.steps) steps.push_back({{"row", s.row}, {"candidate", s.candidate}, {"n", s.n_value}});
    j["steps"] = steps;
    j["rounds"] = r.rounds;
    j["transform"] = r.transform;
    j["power_products"] = r.power_products;
    j["c_ini"] = r.c_ini;
    j["c_ini_transformed"] = opt(r.c_ini_transformed);
    if (r.certificate) {
        const auto& c = *r.certificate;
        j["certificate"] = {{"method", c.method}, {"c0", c.c0},         {"c_bounds", c.c_bounds},
                            {"examined", c.examined}, {"verdict", c.verdict}, {"row", c.row},
                            {"n", c.n},           {"witness", c.witness}};
    } else {
        j["certificate"] = nullptr;
    }
    json cols = json::array();
    for (const auto& c : r.columns) {
        json cj;
        cj["cstar_choice"] = c.cstar_choice;
        cj["cstar"] = c.cstar;
        cj["cstar_ratio"] = c.cstar_ratio;
        cj["c_ini"] = opt(c.c_ini);
        cj["c_red"] = opt(c.c_red);
        cj["c_red_ratio"] = opt(c.c_red_ratio);
        cj["domain_ratio"] = opt(c.domain_ratio);
        cj["iterations"] = c.iterations;
        json pl = json::array();
        for (const auto& p : c.places)
            pl.push_back({{"label", p.label},
                          {"reducible", p.reducible},
                          {"bound", p.bound},
                          {"iterations", p.iterations},
                          {"note", p.note}});
        cj["places"] = pl;
        cj["warnings"] = c.warnings;
        if (c.wildanger)
            cj["wildanger"] = {{"log10_k0", c.wildanger->log10_k0},
                               {"c_plus", c.wildanger->c_plus},
                               {"h_next", c.wildanger->h_next}};
        else
            cj["wildanger"] = nullptr;
        cols.push_back(cj);
    }
    j["columns"] = cols;
    j["generalized_n_f0"] = opt(r.generalized_n_f0);
    j["generalized_n_fk"] = opt(r.generalized_n_fk);
    j["warnings"] = r.warnings;
    return j;
}

std::string table_cell(const std::optional<std::string>& s) { return s ? *s : "-"; }

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
    if (format == ReportFormat::Machine) return to_json(r).dump(2) + "\n";

    std::ostringstream o;
    char buf[256];
    o << (r.name.empty() ? "problem" : r.name) << ": degree " << r.degree << ", r1 = " << r.r1 << ", r2 = " << r.r2
      << ", finite places = " << r.finite << ", s = " << r.s << ", precision " << r.precision_bits << " bits\n";
    o << "places:";
    for (const auto& p : r.places) o << " " << p;
    o << "\n\n";
    std::snprintf(buf, sizeof buf, "N_old(F0) = %.10f\nN(F0)     = %.10f\n", r.n_old_f0, r.n_f0);
    o << buf;
    if (r.n_fk) {
        std::snprintf(buf, sizeof buf, "N(Fk)     = %.10f   (k = %zu steps, %zu rounds)\n", *r.n_fk, r.steps.size(),
                      r.rounds);
        o << buf;
    }
    if (r.generalized_n_f0) {
        std::snprintf(buf, sizeof buf, "generalized N(F0) = %.10f\n", *r.generalized_n_f0);
        o << buf;
    }
    if (r.generalized_n_fk) {
        std::snprintf(buf, sizeof buf, "generalized N(Fk) = %.10f\n", *r.generalized_n_fk);
        o << buf;
    }
    o << "row norms F0:";
    for (double x : r.row_norms_f0) o << " " << truncate6(x);
    o << "\n";
    if (!r.row_norms_fk.empty()) {
        o << "row norms Fk:";
        for (double x : r.row_norms_fk) o << " " << truncate6(x);
        o << "\n";
    }

    if (!r.steps.empty()) {
        o << "\nheuristic trace:\n";
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            o << "  step " << i + 1 << ": row " << r.steps[i].row + 1 << " <- (";
            for (std::size_t t = 0; t < r.steps[i].candidate.size(); ++t)
                o << (t ? ", " : "") << r.steps[i].candidate[t];
            std::snprintf(buf, sizeof buf, "), N = %.10f\n", r.steps[i].n_value);
            o << buf;
        }
    }
    if (!r.transform.empty()) {
        o << "\ntransform A (R_k = R_0 A):\n";
        for (const auto& row : r.transform) {
            o << "  [";
            for (std::size_t j = 0; j < row.size(); ++j) {
                std::snprintf(buf, sizeof buf, "%s%4lld", j ? " " : "", row[j]);
                o << buf;
            }
            o << " ]\n";
        }
        o << "optimized system:\n";
        for (std::size_t j = 0; j < r.power_products.size(); ++j)
            o << "  eps'_" << j + 1 << " = " << r.power_products[j] << "\n";
    }
    if (r.certificate) {
        const auto& c = *r.certificate;
        o << "\ncertificate: " << c.method << ", row " << c.row + 1 << ", c0 = " << c.c0 << ", examined "
          << c.examined << ", verdict " << c.verdict << "\n";
        if (!c.witness.empty()) {
            o << "  witness (";
            for (std::size_t t = 0; t < c.witness.size(); ++t) o << (t ? ", " : "") << c.witness[t];
            o << ")\n";
        }
    }

    if (!r.columns.empty()) {
        o << "\n";
        auto header = [](const std::string& c) {
            if (c == "old") return std::string("N_old(F0)");
            if (c == "new") return std::string("N(F0)");
            return std::string("N(Fk)");
        };
        std::snprintf(buf, sizeof buf, "%-14s", "");
        o << buf;
        for (const auto& c : r.columns) {
            std::snprintf(buf, sizeof buf, "%14s", header(c.cstar_choice).c_str());
            o << buf;
        }
        o << "\n";
        auto line = [&](const char* label, auto cell) {
            std::snprintf(buf, sizeof buf, "%-14s", label);
            o << buf;
            for (const auto& c : r.columns) {
                std::snprintf(buf, sizeof buf, "%14s", cell(c).c_str());
                o << buf;
            }
            o << "\n";
        };
        line("C*", [](const ReportColumn& c) { return truncate6(c.cstar); });
        line("C_ini", [](const ReportColumn& c) { return table_cell(c.c_ini); });
        line("C_red", [](const ReportColumn& c) { return table_cell(c.c_red); });
        line("C* ratio", [](const ReportColumn& c) { return truncate6(c.cstar_ratio); });
        line("C_red ratio", [](const ReportColumn& c) {
            return c.c_red_ratio ? truncate6(*c.c_red_ratio) : std::string("-");
        });
        line("domain ratio", [](const ReportColumn& c) {
            return c.domain_ratio ? truncate6(*c.domain_ratio) : std::string("-");
        });
        for (const auto& c : r.columns) {
            if (c.wildanger) {
                std::snprintf(buf, sizeof buf, "%s: log10 K0 = %.6f, C+ = %.6f, H_next = %.6f\n",
                              header(c.cstar_choice).c_str(), c.wildanger->log10_k0, c.wildanger->c_plus,
                              c.wildanger->h_next);
                o << buf;
            }
            for (const auto& p : c.places)
                if (!p.note.empty()) o << header(c.cstar_choice) << " " << p.label << ": " << p.note << "\n";
        }
    }
    for (const auto& w : r.warnings) o << "warning: " << w << "\n";
    if (!r.timings.empty()) {
        o << "\ntimings:";
        for (const auto& [stage, ms] : r.timings) {
            std::snprintf(buf, sizeof buf, " %s %.0f ms;", stage.c_str(), ms);
            o << buf;
        }
        o << "\n";
    }
    return o.str();
}

Report parse_report(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("report: invalid JSON: ") + e.what());
    }
    require(j.value("format", "") == "sunit-report/1", "report: unknown format tag");
    try {
        Report r;
        r.name = j.at("name").get<std::string>();
        r.degree = j.at("degree").get<std::size_t>();
        r.r1 = j.at("r1").get<std::size_t>();
        r.r2 = j.at("r2").get<std::size_t>();
        r.finite = j.at("finite").get<std::size_t>();
        r.s = j.at("s").get<std::size_t>();
        r.precision_bits = j.at("precision_bits").get<long>();
        r.places = j.at("places").get<std::vector<std::string>>();
        r.n_old_f0 = j.at("n_old_f0").get<double>();
        r.n_f0 = j.at("n_f0").get<double>();
        r.row_norms_f0 = j.at("row_norms_f0").get<std::vector<double>>();
        r.n_fk = get_opt<double>(j, "n_fk");
        r.row_norms_fk = j.at("row_norms_fk").get<std::vector<double>>();
        for (const auto& s : j.at("steps"))
            r.steps.push_back({s.at("row").get<std::size_t>(), s.at("candidate").get<std::vector<long long>>(),
                               s.at("n").get<double>()});
        r.rounds = j.at("rounds").get<std::size_t>();
        r.transform = j.at("transform").get<std::vector<std::vector<long long>>>();
        r.power_products = j.at("power_products").get<std::vector<std::string>>();
        r.c_ini = j.at("c_ini").get<std::string>();
        r.c_ini_transformed = get_opt<std::string>(j, "c_ini_transformed");
        if (!j.at("certificate").is_null()) {
            const json& c = j.at("certificate");
            r.certificate = ReportCertificate{c.at("method").get<std::string>(),
                                              c.at("c0").get<long>(),
                                              c.at("c_bounds").get<std::vector<long>>(),
                                              c.at("examined").get<std::uint64_t>(),
                                              c.at("verdict").get<std::string>(),
                                              c.at("row").get<std::size_t>(),
                                              c.at("n").get<double>(),
                                              c.at("witness").get<std::vector<long long>>()};
        }
        for (const auto& cj : j.at("columns")) {
            ReportColumn c;
            c.cstar_choice = cj.at("cstar_choice").get<std::string>();
            c.cstar = cj.at("cstar").get<double>();
            c.cstar_ratio = cj.at("cstar_ratio").get<double>();
            c.c_ini = get_opt<std::string>(cj, "c_ini");
            c.c_red = get_opt<std::string>(cj, "c_red");
            c.c_red_ratio = get_opt<double>(cj, "c_red_ratio");
            c.domain_ratio = get_opt<double>(cj, "domain_ratio");
            c.iterations = cj.at("iterations").get<std::size_t>();
            for (const auto& p : cj.at("places"))
                c.places.push_back({p.at("label").get<std::string>(), p.at("reducible").get<bool>(),
                                    p.at("bound").get<std::string>(), p.at("iterations").get<std::size_t>(),
                                    p.at("note").get<std::string>()});
            c.warnings = cj.at("warnings").get<std::vector<std::string>>();
            if (!cj.at("wildanger").is_null()) {
                const json& w = cj.at("wildanger");
                c.wildanger = ReportWildanger{w.at("log10_k0").get<double>(), w.at("c_plus").get<double>(),
                                              w.at("h_next").get<double>()};
            }
            r.columns.push_back(std::move(c));
        }
        r.generalized_n_f0 = get_opt<double>(j, "generalized_n_f0");
        r.generalized_n_fk = get_opt<double>(j, "generalized_n_fk");
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
    }
}

}  // namespace sunit
