// Command-line driver for the cokernel experiments.
//
// Exit codes: 0 success, 1 other library error, 2 config or usage error,
// 3 strict balance violation, 4 too many indeterminate trials, 5 I/O failure.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cokernel/error.hpp"
#include "cokernel/experiments.hpp"
#include "cokernel/theory.hpp"

namespace {

using namespace cokernel;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::optional<std::string> out;
    std::optional<std::string> formats;
    bool no_strict = false;
    std::vector<std::string> types;
};

void add_common(CLI::App& sub, Options& o) {
    sub.add_option("--config", o.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub.add_option("--seed", o.seed, "Override the master seed");
    sub.add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024));
    sub.add_option("--out", o.out, "Output path prefix");
    sub.add_option("--format", o.formats, "Comma-separated formats: csv,json,svg");
    sub.add_flag("--no-strict-balance", o.no_strict, "Run even if the entry distribution is unbalanced");
}

std::vector<std::string> split_formats(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

ExperimentConfig resolve(const Options& o) {
    auto cfg = load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output_path = *o.out;
    if (o.formats) cfg.formats = split_formats(*o.formats);
    if (o.no_strict) cfg.strict_balance = false;
    cfg.validate();
    return cfg;
}

void print_balance(const BalanceEcho& b) {
    fmt::print("balance audit at modulus {}: overall epsilon = {}\n", b.modulus, b.overall);
    for (const auto& e : b.entries) {
        std::string normal;
        for (std::size_t i = 0; i < e.normal.size(); ++i) normal += (i ? "," : "") + std::to_string(e.normal[i]);
        fmt::print("  {:<12} dim {}  epsilon {:<10} heaviest hyperplane <({}), v> = {}\n", e.ideal, e.dim, e.epsilon, normal,
                   e.offset);
    }
}

void print_written(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) fmt::print("wrote {}\n", p.string());
}

void print_timing(const RunTiming& t) {
    for (const auto& e : t.per_n) fmt::print("  n = {:<4} {:8.2f} s  {:10.1f} trials/s\n", e.n, e.seconds, e.trials_per_second);
}

int cmd_dist(const Options& o) {
    const auto cfg = resolve(o);
    RunTiming timing;
    const auto s = run_distribution_experiment(cfg, {o.threads}, &timing);
    print_balance(s.balance);
    fmt::print("{:>5} {:>8} {:>9} {:>10} {:>6} {:>10} {:>8}\n", "n", "trials", "tv", "chi2", "cells", "p-value", "indet");
    for (const auto& ns : s.per_n) {
        fmt::print("{:>5} {:>8} {:>9.5f} {:>10.3f} {:>6} {:>10} {:>8.5f}\n", ns.n, ns.trials, ns.tv_distance, ns.chi_square,
                   ns.chi_square_cells, ns.chi_square_p_value ? fmt::format("{:.4g}", *ns.chi_square_p_value) : "-",
                   ns.indeterminate_rate());
    }
    print_timing(timing);
    print_written(emit_report(s, cfg.output_path, cfg.formats));
    check_indeterminate_rate(s);
    return 0;
}

int cmd_moments(const Options& o) {
    const auto cfg = resolve(o);
    std::vector<ModuleType> targets;
    for (const auto& t : o.types) targets.push_back(ModuleType::parse(cfg.domain, t));
    RunTiming timing;
    const auto s = run_moment_experiment(cfg, targets, {o.threads}, &timing);
    fmt::print("{:>5} {:>16} {:>12} {:>10} {:>12}\n", "n", "target", "estimate", "stderr", "prediction");
    for (const auto& r : s.rows) {
        fmt::print("{:>5} {:>16} {:>12.6f} {:>10.6f} {:>12.8f}\n", r.n, r.target, r.estimate, r.std_error, r.prediction);
    }
    print_timing(timing);
    print_written(emit_report(s, cfg.output_path, cfg.formats));
    check_indeterminate_rate(s);
    return 0;
}

int cmd_galois(const Options& o) {
    const auto cfg = resolve(o);
    RunTiming timing;
    const auto s = run_galois_demo(cfg, {o.threads}, &timing);
    print_balance(s.balance);
    fmt::print("conjugate primes {} and {}; support {} under conjugation\n", s.prime, s.conjugate,
               s.invariant_support ? "invariant" : "not invariant");
    fmt::print("limiting probability of differing partitions (within caps): {:.6f}\n", s.predicted_asymmetric_mass);
    for (const auto& r : s.rows) {
        fmt::print("n = {}: partitions equal in {}/{} trials ({:.5f}); asymmetric frequency {:.5f}\n", r.n, r.conjugate_equal,
                   r.trials, r.equal_fraction, r.asymmetric_frequency);
    }
    print_timing(timing);
    print_written(emit_report(s, cfg.output_path, cfg.formats));
    check_indeterminate_rate(s);
    return 0;
}

int cmd_audit(const Options& o) {
    const auto cfg = resolve(o);
    const auto report = balance_report(cfg.make_distribution(), cfg.effective_audit_modulus());
    print_balance(echo_balance(cfg.domain, report));
    if (cfg.strict_balance && report.overall <= 0) throw BalanceError("entry distribution is not balanced");
    return 0;
}

int cmd_predict(const Options& o) {
    const auto cfg = resolve(o);
    std::vector<ModuleType> types;
    for (const auto& t : o.types) types.push_back(ModuleType::parse(cfg.domain, t));
    if (types.empty()) {
        for (const auto& t : enumerate_types(cfg.primes, std::min(cfg.cap_exponent, 3), std::min(cfg.cap_parts, 3))) {
            if (predicted_probability(t, cfg.primes, cfg.u).as_double() >= 1e-3) types.push_back(t);
        }
    }
    fmt::print("{:>20} {:>14} {:>10}\n", "type", "probability", "bound");
    for (const auto& t : types) {
        const auto p = predicted_probability(t, cfg.primes, cfg.u);
        fmt::print("{:>20} {:>14.10f} {:>10.1e}\n", t.to_string(), p.as_double(), p.truncation_bound.convert_to<double>());
    }
    const auto ps = partial_sum(cfg.primes, cfg.u, cfg.cap_exponent, cfg.cap_parts);
    fmt::print("partial sum over caps ({}, {}): {:.10f}\n", cfg.cap_exponent, cfg.cap_parts, ps.as_double());
    for (const auto& t : cfg.moment_targets) {
        fmt::print("limiting E #Sur(cok, {}) = {}\n", t.to_string(), format_rational(predicted_moment(t, cfg.u)));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-matrix cokernel experiments over Z, Z[i] and F_p[x]"};
    app.require_subcommand(1);
    Options o;
    auto* dist = app.add_subcommand("dist", "Compare sampled cokernel types with the limiting distribution");
    auto* moments = app.add_subcommand("moments", "Estimate surjection moments");
    auto* galois = app.add_subcommand("galois", "Conjugation invariance over the Gaussian integers");
    auto* audit = app.add_subcommand("audit", "Balance report for the entry distribution");
    auto* predict = app.add_subcommand("predict", "Limiting probabilities only");
    for (auto* sub : {dist, moments, galois, audit, predict}) add_common(*sub, o);
    moments->add_option("--target", o.types, "Target module type (repeatable); defaults to the config's targets");
    predict->add_option("--type", o.types, "Module type to evaluate (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*dist) return cmd_dist(o);
        if (*moments) return cmd_moments(o);
        if (*galois) return cmd_galois(o);
        if (*audit) return cmd_audit(o);
        return cmd_predict(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const BalanceError& e) {
        std::cerr << "balance error: " << e.what() << "\n";
        return 3;
    } catch (const DiagnosticsError& e) {
        std::cerr << "diagnostics error: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 5;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
