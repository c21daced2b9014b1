// hdi: health-disparity indices on grouped or complex-survey data.
//
// Subcommands: index, variance, sweep, null-sim. Inputs are CSV/TSV files
// (microdata or grouped summaries); results go to stdout or --out as JSON
// or CSV, replicate vectors to a .replicates.csv sidecar next to --out.
// Exit codes: 0 ok, 1 usage, 2 parse, 3 validation, 4 estimation, 5 io.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdi/hdi.hpp"
#include "hdi/io.hpp"

namespace {

using namespace hdi;

IndexFamily parse_family(const std::string& tok) {
    static const std::map<std::string, IndexFamily> names = {
        {"ri", IndexFamily::Renyi},          {"renyi", IndexFamily::Renyi},
        {"sri", IndexFamily::SymmetrizedRenyi}, {"ge", IndexFamily::GeneralizedEntropy},
        {"sge", IndexFamily::SymmetrizedGE}, {"risge", IndexFamily::RefInvariantSymGE},
        {"rsge", IndexFamily::RefInvariantSymGE}, {"beta", IndexFamily::Beta},
        {"sbeta", IndexFamily::SymmetrizedBeta}, {"atkinson", IndexFamily::Atkinson},
        {"atk", IndexFamily::Atkinson},      {"ssri", IndexFamily::StandardizedSRI},
    };
    const auto it = names.find(io::lower(tok));
    if (it == names.end()) throw ValidationError("unknown index family '" + tok + "'");
    return it->second;
}

std::vector<IndexFamily> parse_families(const std::vector<std::string>& toks) {
    std::vector<IndexFamily> out;
    for (const std::string& t : toks) out.push_back(parse_family(t));
    return out;
}

std::vector<WeightingScheme> parse_schemes(const std::string& s) {
    if (s == "pw") return {WeightingScheme::PopulationWeighted};
    if (s == "ew") return {WeightingScheme::EquallyWeighted};
    if (s == "both")
        return {WeightingScheme::PopulationWeighted, WeightingScheme::EquallyWeighted};
    throw ValidationError("unknown scheme '" + s + "' (expected pw, ew, or both)");
}

ReferenceSpec parse_reference(const std::string& s) {
    if (s == "avg") return ReferenceSpec::population_average();
    if (s == "best") return ReferenceSpec::least_adverse();
    if (s.rfind("target:", 0) == 0) {
        const double t = io::parse_number(s.substr(7), 0);
        return ReferenceSpec::fixed_target(t);
    }
    throw ValidationError("unknown reference '" + s + "' (expected avg, best, or target:<t>)");
}

std::string reference_token(const ReferenceSpec& ref) {
    switch (ref.kind) {
        case ReferenceSpec::Kind::PopulationAverage: return "avg";
        case ReferenceSpec::Kind::LeastAdverse: return "best";
        case ReferenceSpec::Kind::FixedTarget: return "target:" + io::format_number(ref.target);
    }
    return "avg";
}

struct CommonOptions {
    std::string input;
    std::string kind = "microdata";
    std::vector<std::string> families;
    std::vector<double> alphas;
    std::string scheme = "pw";
    std::string reference = "avg";
    std::string out;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opt, const char* default_family) {
    cmd->add_option("--input", opt.input, "input file (CSV/TSV)")->required();
    cmd->add_option("--kind", opt.kind, "input kind: microdata | grouped")
        ->check(CLI::IsMember({"microdata", "grouped"}));
    opt.families = {default_family};
    cmd->add_option("--family", opt.families,
                    "index families (ri,sri,ge,sge,risge,beta,sbeta,atkinson,ssri)")
        ->delimiter(',');
    cmd->add_option("--alpha", opt.alphas, "disparity-aversion values")->delimiter(',');
    cmd->add_option("--scheme", opt.scheme, "group weighting: pw | ew | both");
    cmd->add_option("--reference", opt.reference, "disparity reference: avg | best | target:<t>");
    cmd->add_option("--out", opt.out, "output path (default: stdout)");
    cmd->add_option("--format", opt.format, "output format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", opt.seed, "RNG seed (fallback: HDI_SEED, then generated)");
}

std::uint64_t resolve_seed(const CommonOptions& opt) {
    if (opt.seed) return *opt.seed;
    if (const char* env = std::getenv("HDI_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw ValidationError("HDI_SEED is not a valid integer");
    }
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "seed: " << seed << "\n";
    return seed;
}

std::vector<double> alphas_or_default(const CommonOptions& opt) {
    return opt.alphas.empty() ? default_alpha_grid() : opt.alphas;
}

GroupedSummary load_grouped(const CommonOptions& opt) {
    if (opt.kind == "grouped") {
        const GroupedSummary g = io::ingest_grouped(opt.input);
        std::cerr << "ingested " << g.group_count() << " groups\n";
        return g;
    }
    const SurveyDataset data = io::ingest_microdata(opt.input);
    const SufficientStats st = compute_sufficient_stats(data);
    std::cerr << "ingested " << data.records().size() << " records, " << st.labels.size()
              << " groups\n";
    return st.to_grouped_summary();
}

SurveyDataset load_microdata(const CommonOptions& opt) {
    if (opt.kind != "microdata")
        throw ValidationError("this command requires --kind microdata");
    const SurveyDataset data = io::ingest_microdata(opt.input);
    const SufficientStats st = compute_sufficient_stats(data);
    std::cerr << "ingested " << data.records().size() << " records, " << st.labels.size()
              << " groups (";
    for (std::size_t j = 0; j < st.labels.size(); ++j)
        std::cerr << (j ? ", " : "") << st.labels[j] << ": " << io::format_number(st.u0[j]);
    std::cerr << ")\n";
    return data;
}

void write_output(const CommonOptions& opt, const std::vector<io::ResultRow>& rows,
                  const std::vector<io::ReplicateSeries>& replicates) {
    const io::OutputFormat fmt = io::parse_format(opt.format);
    if (!replicates.empty() && !opt.out.empty())
        io::write_replicates(replicates, io::replicates_sidecar_path(opt.out));
    if (opt.out.empty()) {
        io::emit_results(rows, fmt, std::cout);
        return;
    }
    std::ofstream os(opt.out);
    if (!os) throw IoError("cannot open '" + opt.out + "' for writing");
    io::emit_results(rows, fmt, os);
    if (!os) throw IoError("failed writing '" + opt.out + "'");
}

int cmd_index(const CommonOptions& opt) {
    const GroupedSummary g = load_grouped(opt);
    const ReferenceSpec ref = parse_reference(opt.reference);
    std::vector<io::ResultRow> rows;
    for (WeightingScheme w : parse_schemes(opt.scheme)) {
        for (IndexFamily f : parse_families(opt.families)) {
            for (double a : alphas_or_default(opt)) {
                io::ResultRow row;
                row.command = "index";
                row.family = family_name(f);
                row.scheme = scheme_name(w);
                row.alpha = a;
                row.reference = reference_token(ref);
                row.estimate = between_group_index(g, w, f, {a}, ref);
                rows.push_back(std::move(row));
            }
        }
    }
    write_output(opt, rows, {});
    return 0;
}

struct VarianceOptions {
    std::vector<std::string> methods;
    std::size_t reps = 500;
    double fay = 0.0;
    bool collapse_singletons = false;
};

int cmd_variance(const CommonOptions& opt, const VarianceOptions& vopt) {
    const SurveyDataset data = load_microdata(opt);
    const ReferenceSpec ref = parse_reference(opt.reference);
    const std::uint64_t seed = resolve_seed(opt);

    const DesignTable table(data);
    bool two_psu_design = true;
    for (std::size_t s = 0; s < table.strata_count(); ++s)
        if (table.psu_count(s) != 2) two_psu_design = false;

    std::vector<std::string> methods = vopt.methods;
    if (methods.empty()) {
        methods = {"taylor", "brr", "boot"};
        if (!two_psu_design) {
            methods = {"taylor", "boot"};
            std::cerr << "warning: design is not 2-PSU-per-stratum; dropping brr\n";
        }
    }

    ReplicationConfig cfg;
    cfg.n_reps = vopt.reps;
    cfg.fay_coefficient = vopt.fay;
    cfg.rng_seed = seed;
    TaylorOptions topt;
    topt.collapse_singleton_strata = vopt.collapse_singletons;

    std::vector<io::ResultRow> rows;
    std::vector<io::ReplicateSeries> reps;
    const std::string sidecar =
        opt.out.empty() ? std::string() : io::replicates_sidecar_path(opt.out);
    for (WeightingScheme w : parse_schemes(opt.scheme)) {
        for (IndexFamily f : parse_families(opt.families)) {
            for (double a : alphas_or_default(opt)) {
                for (const std::string& method : methods) {
                    VarianceEstimate est;
                    if (method == "taylor") {
                        est = taylor_se(data, w, f, {a}, topt);
                    } else if (method == "brr") {
                        est = brr_se(data, cfg, w, f, {a}, ref);
                    } else if (method == "boot" || method == "bootstrap") {
                        est = rescaled_bootstrap_se(data, cfg, w, f, {a}, ref);
                    } else {
                        throw ValidationError("unknown method '" + method + "'");
                    }
                    io::ResultRow row;
                    row.command = "variance";
                    row.family = family_name(f);
                    row.scheme = scheme_name(w);
                    row.alpha = a;
                    row.reference = reference_token(ref);
                    row.method = method_name(est.method);
                    row.estimate = est.point;
                    row.se = est.se;
                    if (!est.replicates.empty() && !sidecar.empty()) {
                        const std::string key = row.family + ":" + row.scheme +
                                                ":a=" + io::format_number(a) + ":" + row.method;
                        reps.push_back({key, est.replicates});
                        row.replicates_path = sidecar;
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    write_output(opt, rows, reps);
    return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& scenarios_path) {
    const GroupedSummary g = load_grouped(opt);
    Scenario baseline{"baseline", g.sizes(), g.means()};
    const std::vector<Scenario> scenarios = io::ingest_scenarios(scenarios_path);

    std::vector<io::ResultRow> rows;
    for (WeightingScheme w : parse_schemes(opt.scheme)) {
        const SweepResult res = run_sweep(baseline, scenarios, alphas_or_default(opt),
                                          parse_families(opt.families), w);
        for (const SweepCell& cell : res.cells) {
            io::ResultRow row;
            row.command = "sweep";
            row.scenario = cell.scenario;
            row.family = family_name(cell.family);
            row.scheme = scheme_name(w);
            row.alpha = cell.alpha;
            row.estimate = cell.value;
            row.abs_change = cell.abs_change;
            row.rel_change = cell.rel_change;
            rows.push_back(std::move(row));
        }
        if (res.series.size() >= 2) {
            const DiscriminationReport rep = discrimination_report(res);
            for (const auto& r : rep.rows) {
                std::cerr << "spread[" << scheme_name(w) << "] alpha=" << r.alpha << ":";
                for (std::size_t fi = 0; fi < rep.families.size(); ++fi)
                    std::cerr << " " << family_name(rep.families[fi]) << "="
                              << io::format_number(r.spread[fi]);
                if (r.sge_collapsed_sri_distinct) std::cerr << " [sge collapsed]";
                std::cerr << "\n";
            }
        }
    }
    write_output(opt, rows, {});
    return 0;
}

int cmd_null_sim(const CommonOptions& opt, std::size_t n_reps) {
    const SurveyDataset data = load_microdata(opt);
    const ReferenceSpec ref = parse_reference(opt.reference);
    ReplicationConfig cfg;
    cfg.n_reps = n_reps;
    cfg.rng_seed = resolve_seed(opt);

    std::vector<io::ResultRow> rows;
    std::vector<io::ReplicateSeries> reps;
    const std::string sidecar =
        opt.out.empty() ? std::string() : io::replicates_sidecar_path(opt.out);
    for (WeightingScheme w : parse_schemes(opt.scheme)) {
        for (IndexFamily f : parse_families(opt.families)) {
            for (double a : alphas_or_default(opt)) {
                const VarianceEstimate observed = rescaled_bootstrap_se(data, cfg, w, f, {a}, ref);
                const std::vector<double> null = null_simulation(data, cfg, w, f, {a}, ref);
                double mean = 0.0;
                for (double v : null) mean += v;
                mean /= static_cast<double>(null.size());
                double sd = 0.0;
                for (double v : null) sd += (v - mean) * (v - mean);
                sd = std::sqrt(sd / static_cast<double>(null.size()));

                const std::string base_key = std::string(family_name(f)) + ":" +
                                             scheme_name(w) + ":a=" + io::format_number(a);
                io::ResultRow obs;
                obs.command = "null-sim";
                obs.family = family_name(f);
                obs.scheme = scheme_name(w);
                obs.alpha = a;
                obs.kind = "observed";
                obs.estimate = observed.point;
                obs.se = observed.se;
                if (!sidecar.empty()) {
                    reps.push_back({base_key + ":observed", observed.replicates});
                    obs.replicates_path = sidecar;
                }
                rows.push_back(std::move(obs));

                io::ResultRow nul;
                nul.command = "null-sim";
                nul.family = family_name(f);
                nul.scheme = scheme_name(w);
                nul.alpha = a;
                nul.kind = "null";
                nul.estimate = mean;  // descriptive: mean of the null replicates
                nul.se = sd;
                nul.overlap = empirical_overlap(observed.replicates, null);
                if (!sidecar.empty()) {
                    reps.push_back({base_key + ":null", null});
                    nul.replicates_path = sidecar;
                }
                rows.push_back(std::move(nul));
            }
        }
    }
    write_output(opt, rows, reps);
    return 0;
}

int exit_code_for(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::Parse: return 2;
        case ErrorCategory::Validation: return 3;
        case ErrorCategory::Estimation: return 4;
        case ErrorCategory::Io: return 5;
    }
    return 1;
}

void report_error(const Error& e) {
    nlohmann::ordered_json j;
    j["error"]["category"] = category_name(e.category());
    j["error"]["message"] = e.what();
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reference-invariant health disparity indices on survey data"};
    app.require_subcommand(1);

    CommonOptions idx_opt, var_opt, swp_opt, nul_opt;
    VarianceOptions vopt;
    std::string scenarios_path;
    std::size_t null_reps = 500;

    CLI::App* idx = app.add_subcommand("index", "point estimates on grouped or microdata input");
    add_common(idx, idx_opt, "ssri");

    CLI::App* var = app.add_subcommand("variance", "design-based standard errors (microdata)");
    add_common(var, var_opt, "ssri");
    var->add_option("--methods", vopt.methods, "taylor, brr, boot (default: all that apply)")
        ->delimiter(',');
    var->add_option("--reps", vopt.reps, "bootstrap replicates (default 500)");
    var->add_option("--fay", vopt.fay, "Fay coefficient for BRR in [0,1) (default 0)");
    var->add_flag("--collapse-singletons", vopt.collapse_singletons,
                  "merge 1-PSU strata with a neighbor for taylor");

    CLI::App* swp = app.add_subcommand("sweep", "scenario sensitivity sweep");
    add_common(swp, swp_opt, "ssri");
    swp_opt.families = {"ssri", "risge"};
    swp->add_option("--scenarios", scenarios_path, "scenario definitions CSV")->required();

    CLI::App* nul = app.add_subcommand("null-sim", "no-disparities null simulation (microdata)");
    add_common(nul, nul_opt, "ssri");
    nul->add_option("--reps", null_reps, "bootstrap replicates (default 500)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // help exits 0; any usage error exits 1
    }

    try {
        if (idx->parsed()) return cmd_index(idx_opt);
        if (var->parsed()) return cmd_variance(var_opt, vopt);
        if (swp->parsed()) return cmd_sweep(swp_opt, scenarios_path);
        if (nul->parsed()) return cmd_null_sim(nul_opt, null_reps);
    } catch (const Error& e) {
        report_error(e);
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << R"({"error":{"category":"internal","message":")" << e.what() << "\"}}\n";
        return 1;
    }
    return 1;
}
