// tbp: design ultra-low-rate protograph LDPC codes with type-based
// protograph optimization, verify them with finite-length simulation, and
// account their CV-QKD operating points.
//
// Subcommands: optimize, threshold, expand, lift-type, lift-pcm, simulate,
// skr. Every artifact-producing run writes a manifest.json that pins the
// fully resolved configuration and seed.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tbp/alist.hpp"
#include "tbp/artifacts.hpp"
#include "tbp/channel.hpp"
#include "tbp/de.hpp"
#include "tbp/decoder.hpp"
#include "tbp/errors.hpp"
#include "tbp/kern/kernels.hpp"
#include "tbp/lifting.hpp"
#include "tbp/monte_carlo.hpp"
#include "tbp/pexit.hpp"
#include "tbp/protomatrix.hpp"
#include "tbp/skr.hpp"
#include "tbp/type_description.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

int log_level() { // 0 quiet, 1 info, 2 debug
    const char* env = std::getenv("TBP_LOG");
    if (env == nullptr) return 1;
    const std::string v = env;
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[tbp] " << msg << "\n";
}

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 1;
    std::string config_path;
};

// --config JSON supplies values for long option names (global or of the
// active subcommand); explicit command-line flags win. Boolean true stands
// for a bare flag.
void apply_config(CLI::App& app, const std::string& subcommand, const std::string& path) {
    if (path.empty()) return;
    ordered_json doc;
    try {
        doc = ordered_json::parse(tbp::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw tbp::ParseError(std::string("config: ") + e.what());
    }
    std::vector<std::string> args;
    args.push_back("tbp-config");
    if (!subcommand.empty()) args.push_back(subcommand);
    for (auto& [key, value] : doc.items()) {
        if (value.is_boolean() && !value.get<bool>()) continue;
        args.push_back("--" + key);
        if (!value.is_boolean()) args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw tbp::ParseError("config: " + std::string(e.what()));
    }
}

std::vector<double> parse_snr_grid(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        try {
            return {std::stod(text)};
        } catch (const std::exception&) {
            throw tbp::ParseError("snr grid: cannot parse \"" + text + "\" (want start:step:stop or a single value)");
        }
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw tbp::ParseError("snr grid: want start:step:stop");
    double start, step, stop;
    try {
        start = std::stod(text.substr(0, c1));
        step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        stop = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw tbp::ParseError("snr grid: cannot parse \"" + text + "\"");
    }
    if (step <= 0.0) throw tbp::ParseError("snr grid: step must be positive");
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    if (grid.empty()) throw tbp::ParseError("snr grid: empty range");
    return grid;
}

std::vector<int> parse_counts(const std::string& text) {
    std::vector<int> counts;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (cur.empty()) throw tbp::ParseError("counts: empty field in \"" + text + "\"");
            try {
                counts.push_back(std::stoi(cur));
            } catch (const std::exception&) {
                throw tbp::ParseError("counts: cannot parse \"" + cur + "\"");
            }
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    return counts;
}

fs::path ensure_out_dir(const GlobalOptions& g) {
    fs::path dir(g.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const GlobalOptions& g,
                    ordered_json inputs, ordered_json parameters, std::vector<std::string> outputs) {
    ordered_json doc;
    doc["tool"] = "tbp";
    doc["version"] = kVersion;
    doc["subcommand"] = subcommand;
    doc["seed"] = g.seed;
    doc["threads"] = g.threads;
    doc["kernel_backend"] = tbp::kern::backend_name(tbp::kern::active_backend());
    doc["inputs"] = std::move(inputs);
    doc["parameters"] = std::move(parameters);
    doc["outputs"] = outputs;
    tbp::write_text_file((dir / "manifest.json").string(), doc.dump(2) + "\n");
}

// ---- subcommand state ----

struct OptimizeArgs {
    std::string type_desc_path;
    int h = 0;
    std::string rate;
    int population = 20;
    int generations = 200;
    double weight = 0.5;
    double crossover = 0.9;
    double lo_db = -10.0, hi_db = 10.0, precision_db = 0.01;
    int max_iter = 10000;
    double tol = 1e-6;
    int mu = 100;
    std::string counts_seed; // optional initial candidate
};

int run_optimize(const GlobalOptions& g, const OptimizeArgs& a) {
    if (a.type_desc_path.empty()) throw tbp::ValidationError("optimize: --type-desc is required");
    const auto t = tbp::TypeDescription::from_json_text(tbp::read_text_file(a.type_desc_path));
    int h = a.h;
    if (!a.rate.empty()) {
        // rate (l-k)/(l+h) => h = (l-k)/R - l
        const tbp::Rational r = tbp::Rational::parse(a.rate);
        const long long lk = t.num_fixed_vn() - t.num_fixed_cn();
        if (r.num() <= 0) throw tbp::ValidationError("optimize: rate must be positive");
        const long long num = lk * r.den() - static_cast<long long>(t.num_fixed_vn()) * r.num();
        if (num <= 0 || num % r.num() != 0)
            throw tbp::ValidationError("optimize: rate " + r.str() + " is not reachable from this family");
        h = static_cast<int>(num / r.num());
        info("rate " + r.str() + " -> h = " + std::to_string(h));
    }
    if (h <= 0)
        throw tbp::ValidationError("optimize: h must be positive (the rate (l-k)/(l+h) is undefined otherwise)");

    tbp::de::DEConfig cfg;
    cfg.population = a.population;
    cfg.generations = a.generations;
    cfg.weight = a.weight;
    cfg.crossover = a.crossover;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.search = {a.lo_db, a.hi_db, a.precision_db};
    cfg.pexit_options.max_iter = a.max_iter;
    cfg.pexit_options.tol = a.tol;
    cfg.pexit_options.gh_points = a.mu;
    if (!a.counts_seed.empty()) cfg.initial_candidate = parse_counts(a.counts_seed);

    info("optimizing " + std::to_string(t.num_optimizable_cn()) + " occurrence counts, h=" + std::to_string(h));
    const auto result = tbp::de::optimize(t, h, cfg);

    const auto dir = ensure_out_dir(g);
    const auto best_proto = tbp::expand_type_description(t, result.best);
    tbp::write_text_file((dir / "best_assignment.json").string(), result.best.to_json_text());
    tbp::write_text_file((dir / "best_protomatrix.json").string(), best_proto.to_json_text());
    tbp::write_text_file((dir / "history.csv").string(), tbp::history_csv(result.history));

    const tbp::Rational rate = tbp::tbp_design_rate(t, result.best);
    const double es_star = result.best_threshold.eb_n0_db_star + 10.0 * std::log10(rate.to_double());
    const double beta = tbp::pexit::reconciliation_efficiency(rate, es_star);

    ordered_json params{{"h", h},
                        {"population", cfg.population},
                        {"generations", cfg.generations},
                        {"weight", cfg.weight},
                        {"crossover", cfg.crossover},
                        {"search_lo_db", cfg.search.lo_db},
                        {"search_hi_db", cfg.search.hi_db},
                        {"precision_db", cfg.search.precision_db},
                        {"pexit_max_iter", cfg.pexit_options.max_iter},
                        {"pexit_tol", cfg.pexit_options.tol}};
    write_manifest(dir, "optimize", g, {{"type_description", a.type_desc_path}}, params,
                   {"best_assignment.json", "best_protomatrix.json", "history.csv"});

    std::printf("rate %s  threshold %.4f dB Eb/N0  (Es/N0 %.4f dB)  beta_at_threshold %.6f\n",
                rate.str().c_str(), result.best_threshold.eb_n0_db_star, es_star, beta);
    return 0;
}

struct ThresholdArgs {
    std::string proto_path;
    std::string type_desc_path;
    std::string counts;
    std::string assignment_path;
    double lo_db = -10.0, hi_db = 10.0, precision_db = 0.01;
    int max_iter = 10000;
    double tol = 1e-6;
    int mu = 100;
};

int run_threshold(const GlobalOptions& g, const ThresholdArgs& a) {
    tbp::pexit::ThresholdSearch search{a.lo_db, a.hi_db, a.precision_db};
    tbp::pexit::PexitOptions opt;
    opt.max_iter = a.max_iter;
    opt.tol = a.tol;
    opt.gh_points = a.mu;

    tbp::Rational rate(0, 1);
    tbp::pexit::Threshold th;
    ordered_json inputs;
    if (!a.proto_path.empty()) {
        const auto b = tbp::Protomatrix::from_json_text(tbp::read_text_file(a.proto_path));
        rate = tbp::design_rate(b);
        th = tbp::pexit::threshold(b, search, opt);
        inputs["protomatrix"] = a.proto_path;
    } else if (!a.type_desc_path.empty()) {
        const auto t = tbp::TypeDescription::from_json_text(tbp::read_text_file(a.type_desc_path));
        tbp::OccurrenceAssignment assignment = a.assignment_path.empty()
            ? tbp::OccurrenceAssignment::induce(t, parse_counts(a.counts))
            : tbp::OccurrenceAssignment::from_json_text(t, tbp::read_text_file(a.assignment_path));
        rate = tbp::tbp_design_rate(t, assignment);
        th = tbp::pexit::tbp_threshold(t, assignment, search, opt);
        inputs["type_description"] = a.type_desc_path;
    } else {
        throw tbp::ValidationError("threshold: need --proto or --type-desc");
    }

    const std::string csv = tbp::threshold_csv(rate, th);
    const auto dir = ensure_out_dir(g);
    tbp::write_text_file((dir / "threshold.csv").string(), csv);
    write_manifest(dir, "threshold", g, inputs,
                   {{"lo_db", a.lo_db}, {"hi_db", a.hi_db}, {"precision_db", a.precision_db},
                    {"pexit_max_iter", a.max_iter}, {"pexit_tol", a.tol}},
                   {"threshold.csv"});
    std::fputs(csv.c_str(), stdout);
    return 0;
}

struct ExpandArgs {
    std::string type_desc_path;
    std::string counts;
    std::string assignment_path;
    int entry_cap = tbp::Protomatrix::kDefaultEntryCap;
};

int run_expand(const GlobalOptions& g, const ExpandArgs& a) {
    if (a.type_desc_path.empty()) throw tbp::ValidationError("expand: --type-desc is required");
    const auto t = tbp::TypeDescription::from_json_text(tbp::read_text_file(a.type_desc_path));
    tbp::OccurrenceAssignment assignment = a.assignment_path.empty()
        ? tbp::OccurrenceAssignment::induce(t, parse_counts(a.counts))
        : tbp::OccurrenceAssignment::from_json_text(t, tbp::read_text_file(a.assignment_path));
    const auto b = tbp::expand_type_description(t, assignment, a.entry_cap);
    const auto dir = ensure_out_dir(g);
    tbp::write_text_file((dir / "protomatrix.json").string(), b.to_json_text());
    write_manifest(dir, "expand", g, {{"type_description", a.type_desc_path}},
                   {{"h", assignment.total_optimizable()}}, {"protomatrix.json"});
    std::printf("expanded to %d x %d protomatrix, rate %s\n", b.rows(), b.cols(),
                tbp::design_rate(b).str().c_str());
    return 0;
}

struct LiftTypeArgs {
    std::string type_desc_path;
    int q_tilde = 4;
};

int run_lift_type(const GlobalOptions& g, const LiftTypeArgs& a) {
    if (a.type_desc_path.empty()) throw tbp::ValidationError("lift-type: --type-desc is required");
    const auto t = tbp::TypeDescription::from_json_text(tbp::read_text_file(a.type_desc_path));
    const auto lifted = tbp::lift_type_description(t, a.q_tilde, g.seed);
    const auto dir = ensure_out_dir(g);
    tbp::write_text_file((dir / "type_description.json").string(), lifted.to_json_text());
    write_manifest(dir, "lift-type", g, {{"type_description", a.type_desc_path}},
                   {{"q_tilde", a.q_tilde}}, {"type_description.json"});
    std::printf("expanded type description: K=%d k=%d L=%d l=%d\n", lifted.num_cn_types(),
                lifted.num_fixed_cn(), lifted.num_vn_types(), lifted.num_fixed_vn());
    return 0;
}

struct LiftPcmArgs {
    std::string proto_path;
    int q = 0;
    bool skip_girth = false;
    int max_passes = 60;
};

int run_lift_pcm(const GlobalOptions& g, const LiftPcmArgs& a) {
    if (a.proto_path.empty()) throw tbp::ValidationError("lift-pcm: --proto is required");
    const auto b = tbp::Protomatrix::from_json_text(tbp::read_text_file(a.proto_path));
    if (a.q < 1) throw tbp::ValidationError("lift-pcm: q must be positive");
    auto h = tbp::sim::lift_protomatrix(b, a.q, g.seed);
    int swaps = 0, passes = 0;
    if (!a.skip_girth) {
        auto repaired = tbp::sim::remove_4cycles(h, g.seed, a.max_passes);
        swaps = repaired.swaps;
        passes = repaired.passes;
        h = std::move(repaired.matrix);
    }
    const auto dir = ensure_out_dir(g);
    tbp::write_text_file((dir / "pcm.alist").string(), tbp::sim::to_alist(h));
    ordered_json meta;
    meta["n"] = h.cols();
    meta["m"] = h.rows();
    meta["q"] = a.q;
    meta["seed"] = g.seed;
    meta["punctured_bits"] = h.punctured_bits();
    meta["girth_repaired"] = !a.skip_girth;
    meta["swaps"] = swaps;
    meta["passes"] = passes;
    meta["source_protomatrix"] = a.proto_path;
    tbp::write_text_file((dir / "pcm.meta.json").string(), meta.dump(2) + "\n");
    write_manifest(dir, "lift-pcm", g, {{"protomatrix", a.proto_path}},
                   {{"q", a.q}, {"skip_girth", a.skip_girth}, {"max_passes", a.max_passes}},
                   {"pcm.alist", "pcm.meta.json"});
    std::printf("lifted to %d x %d (N=%d), %llu edges, %d swaps in %d passes\n", h.rows(), h.cols(),
                h.cols(), static_cast<unsigned long long>(h.num_edges()), swaps, passes);
    return 0;
}

struct SimulateArgs {
    std::string pcm_path;
    std::string meta_path;
    std::string proto_path;
    int q = 0;
    std::string snr;
    bool snr_is_eb = false;
    std::uint64_t max_frames = 100000;
    int target_errors = 100;
    int max_iter = 500;
    bool skip_girth = false;
};

int run_simulate(const GlobalOptions& g, const SimulateArgs& a) {
    std::optional<tbp::sim::SparseParityCheckMatrix> h;
    ordered_json inputs;
    if (!a.pcm_path.empty()) {
        auto parsed = tbp::sim::from_alist(tbp::read_text_file(a.pcm_path));
        inputs["pcm"] = a.pcm_path;
        if (!a.meta_path.empty()) {
            const auto meta = ordered_json::parse(tbp::read_text_file(a.meta_path));
            std::vector<int> punct = meta.value("punctured_bits", std::vector<int>{});
            h.emplace(parsed.rows(), parsed.cols(), parsed.row_cols(), std::move(punct));
            inputs["meta"] = a.meta_path;
        } else {
            h = std::move(parsed);
        }
    } else if (!a.proto_path.empty()) {
        const auto b = tbp::Protomatrix::from_json_text(tbp::read_text_file(a.proto_path));
        if (a.q < 1) throw tbp::ValidationError("simulate: q must be positive");
        auto lifted = tbp::sim::lift_protomatrix(b, a.q, g.seed);
        if (!a.skip_girth) lifted = tbp::sim::remove_4cycles(lifted, g.seed).matrix;
        h = std::move(lifted);
        inputs["protomatrix"] = a.proto_path;
    } else {
        throw tbp::ValidationError("simulate: need --pcm or --proto");
    }

    if (a.snr.empty()) throw tbp::ValidationError("simulate: --snr is required");
    std::vector<double> grid = parse_snr_grid(a.snr);
    if (a.snr_is_eb) {
        const double r = h->rate().to_double();
        for (double& v : grid) v += 10.0 * std::log10(r); // Es = Eb + 10 log10 R
    }

    info("simulating " + std::to_string(grid.size()) + " SNR points, N=" + std::to_string(h->cols()));
    const auto records = tbp::sim::monte_carlo(*h, grid, {a.max_frames, a.target_errors}, g.seed,
                                               g.threads, a.max_iter);
    const std::string csv = tbp::results_csv(records);
    const auto dir = ensure_out_dir(g);
    tbp::write_text_file((dir / "results.csv").string(), csv);
    write_manifest(dir, "simulate", g, inputs,
                   {{"snr", a.snr}, {"snr_is_eb", a.snr_is_eb}, {"max_frames", a.max_frames},
                    {"target_errors", a.target_errors}, {"max_iter", a.max_iter}},
                   {"results.csv"});
    std::fputs(csv.c_str(), stdout);
    return 0;
}

struct SkrArgs {
    double fer = -1.0;
    double beta = 1.0;
    double i_ab = 1.0;
    double chi_be = 0.0;
    std::string rate;
    std::optional<double> es_n0_db;
};

int run_skr(const GlobalOptions& g, const SkrArgs& a) {
    if (a.fer < 0.0) throw tbp::ValidationError("skr: --fer is required");
    double skr, beta = a.beta, i_ab = a.i_ab;
    if (!a.rate.empty()) {
        if (!a.es_n0_db) throw tbp::ValidationError("skr: --rate needs --esn0");
        const auto p = tbp::sim::operating_point(tbp::Rational::parse(a.rate), *a.es_n0_db, a.fer, a.chi_be);
        skr = p.skr;
        beta = p.beta;
        i_ab = p.i_ab;
        if (!p.beta_valid) info("beta exceeds 1: the rate is above the channel capacity at this SNR");
    } else {
        skr = tbp::sim::secret_key_rate({a.fer, a.beta, a.i_ab, a.chi_be});
    }
    const auto dir = ensure_out_dir(g);
    ordered_json doc{{"fer", a.fer}, {"beta", beta}, {"i_ab", i_ab}, {"chi_be", a.chi_be}, {"skr", skr}};
    tbp::write_text_file((dir / "skr.json").string(), doc.dump(2) + "\n");
    write_manifest(dir, "skr", g, {}, doc, {"skr.json"});
    std::printf("SKR = %s bits/symbol (beta %.6f, I_AB %.6f)\n", tbp::format_double(skr).c_str(), beta, i_ab);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"type-based protograph LDPC design toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.set_help_flag("--help", "print help"); // frees -h; --h mirrors the usual symbol
    app.fallthrough(true);  // global flags may follow the subcommand

    GlobalOptions g;
    app.add_option("--seed", g.seed, "global RNG seed")->capture_default_str();
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker width")->capture_default_str();
    app.add_option("--config", g.config_path, "JSON file with long-option defaults");

    OptimizeArgs oa;
    auto* opt = app.add_subcommand("optimize", "differential-evolution search over occurrence counts");
    opt->set_help_flag("--help", "print help");
    opt->add_option("--type-desc", oa.type_desc_path, "type description JSON");
    opt->add_option("--h", oa.h, "total optimizable occurrences");
    opt->add_option("--rate", oa.rate, "target design rate p/q (alternative to --h)");
    opt->add_option("--np", oa.population, "population size")->capture_default_str();
    opt->add_option("--generations", oa.generations, "generations")->capture_default_str();
    opt->add_option("--weight", oa.weight, "differential weight F")->capture_default_str();
    opt->add_option("--crossover", oa.crossover, "crossover rate CR")->capture_default_str();
    opt->add_option("--lo", oa.lo_db, "threshold search lower Eb/N0 (dB)")->capture_default_str();
    opt->add_option("--hi", oa.hi_db, "threshold search upper Eb/N0 (dB)")->capture_default_str();
    opt->add_option("--precision", oa.precision_db, "bisection bracket (dB)")->capture_default_str();
    opt->add_option("--max-iter", oa.max_iter, "PEXIT iteration cap")->capture_default_str();
    opt->add_option("--tol", oa.tol, "PEXIT convergence tolerance")->capture_default_str();
    opt->add_option("--mu", oa.mu, "Gauss-Hermite quadrature points")->capture_default_str();
    opt->add_option("--init-counts", oa.counts_seed, "comma-separated initial candidate");

    ThresholdArgs ta;
    auto* thr = app.add_subcommand("threshold", "bisected PEXIT threshold of a protograph or TBP");
    thr->add_option("--proto", ta.proto_path, "protomatrix JSON");
    thr->add_option("--type-desc", ta.type_desc_path, "type description JSON");
    thr->add_option("--counts", ta.counts, "comma-separated occurrence counts");
    thr->add_option("--assignment", ta.assignment_path, "assignment JSON");
    thr->add_option("--lo", ta.lo_db, "search lower Eb/N0 (dB)")->capture_default_str();
    thr->add_option("--hi", ta.hi_db, "search upper Eb/N0 (dB)")->capture_default_str();
    thr->add_option("--precision", ta.precision_db, "bisection bracket (dB)")->capture_default_str();
    thr->add_option("--max-iter", ta.max_iter, "PEXIT iteration cap")->capture_default_str();
    thr->add_option("--tol", ta.tol, "PEXIT convergence tolerance")->capture_default_str();
    thr->add_option("--mu", ta.mu, "Gauss-Hermite quadrature points")->capture_default_str();

    ExpandArgs ea;
    auto* exp = app.add_subcommand("expand", "expand a type description into a protomatrix");
    exp->add_option("--type-desc", ea.type_desc_path, "type description JSON");
    exp->add_option("--counts", ea.counts, "comma-separated occurrence counts");
    exp->add_option("--assignment", ea.assignment_path, "assignment JSON");
    exp->add_option("--ep", ea.entry_cap, "entry cap of the produced protomatrix")->capture_default_str();

    LiftTypeArgs lta;
    auto* lt = app.add_subcommand("lift-type", "binary expanded type description (lift factor q~)");
    lt->add_option("--type-desc", lta.type_desc_path, "type description JSON");
    lt->add_option("--q-tilde", lta.q_tilde, "type lifting factor")->capture_default_str();

    LiftPcmArgs lpa;
    auto* lp = app.add_subcommand("lift-pcm", "lift a protomatrix into a parity check matrix");
    lp->add_option("--proto", lpa.proto_path, "protomatrix JSON");
    lp->add_option("--q", lpa.q, "lifting factor");
    lp->add_flag("--skip-girth", lpa.skip_girth, "keep 4-cycles (no repair)");
    lp->add_option("--max-passes", lpa.max_passes, "repair pass limit")->capture_default_str();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo FER/BER over BI-AWGN");
    sim->add_option("--pcm", sa.pcm_path, "alist parity check matrix");
    sim->add_option("--meta", sa.meta_path, "pcm meta JSON (puncturing)");
    sim->add_option("--proto", sa.proto_path, "protomatrix JSON (lift on the fly)");
    sim->add_option("--q", sa.q, "lifting factor for --proto");
    sim->add_flag("--skip-girth", sa.skip_girth, "skip 4-cycle repair for --proto");
    sim->add_option("--snr", sa.snr, "Es/N0 grid start:step:stop in dB");
    sim->add_flag("--eb", sa.snr_is_eb, "grid is Eb/N0 instead of Es/N0");
    sim->add_option("--max-frames", sa.max_frames, "frame cap per SNR point")->capture_default_str();
    sim->add_option("--target-errors", sa.target_errors, "stop after this many frame errors (0: never)")
        ->capture_default_str();
    sim->add_option("--max-iter", sa.max_iter, "decoder iterations")->capture_default_str();

    SkrArgs ka;
    auto* skr = app.add_subcommand("skr", "secret key rate accounting");
    skr->add_option("--fer", ka.fer, "frame error rate");
    skr->add_option("--beta", ka.beta, "reconciliation efficiency")->capture_default_str();
    skr->add_option("--iab", ka.i_ab, "mutual information I_AB")->capture_default_str();
    skr->add_option("--chi-be", ka.chi_be, "Holevo information chi_BE")->capture_default_str();
    skr->add_option("--rate", ka.rate, "code rate p/q (derives beta and I_AB from --esn0)");
    double esn0_tmp = 0.0;
    auto* esn0_opt = skr->add_option("--esn0", esn0_tmp, "Es/N0 in dB for --rate");

    bool esn0_given = false;
    try {
        app.parse(argc, argv);
        esn0_given = esn0_opt->count() > 0;
        // bound variables persist across parses: load config values, then
        // re-parse the real argv so explicit flags override them
        if (!g.config_path.empty()) {
            std::string subname;
            for (auto* sub : app.get_subcommands()) subname = sub->get_name();
            apply_config(app, subname, g.config_path);
            esn0_given = esn0_given || esn0_opt->count() > 0;
            app.parse(argc, argv);
            esn0_given = esn0_given || esn0_opt->count() > 0;
        }
        if (esn0_given) ka.es_n0_db = esn0_tmp;

        if (*opt) return run_optimize(g, oa);
        if (*thr) return run_threshold(g, ta);
        if (*exp) return run_expand(g, ea);
        if (*lt) return run_lift_type(g, lta);
        if (*lp) return run_lift_pcm(g, lpa);
        if (*sim) return run_simulate(g, sa);
        if (*skr) return run_skr(g, ka);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const tbp::UndecodableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const tbp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tbp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
