#pragma once

// Config-driven Monte Carlo runs comparing sampled cokernels with the
// limiting distribution, plus the report formats they are written in.
//
// Every trial is a pure function of (seed, n, u, trial index), and tallies
// are merged in trial order, so results do not depend on the worker count.
// Wall-clock figures live in RunTiming, outside the summaries, so that the
// emitted CSV and JSON are byte-identical across runs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cokernel/dedekind.hpp"
#include "cokernel/module_types.hpp"
#include "cokernel/sampler.hpp"
#include "cokernel/snf.hpp"

namespace cokernel {

struct DistributionSpec {
    /// A builtin_distribution name.
    std::string name = "bernoulli01";
    DistributionParams params;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

struct ExperimentConfig {
    DomainId domain;
    std::vector<PrimeIdealDesc> primes;
    int u = 0;
    std::vector<int> n_values;
    std::uint64_t trials = 1000;
    DistributionSpec distribution;
    std::uint64_t seed = 1;
    PrecisionPolicy precision;
    /// Types with a part above cap_exponent or more than cap_parts parts go to "other".
    int cap_exponent = 6;
    int cap_parts = 6;
    bool strict_balance = true;
    /// Overrides audit_modulus(domain, primes).
    std::optional<Element> audit_modulus;
    std::vector<ModuleType> moment_targets;
    /// Rational prime for the Galois demo; defaults to the first configured prime's.
    std::optional<Word> galois_prime;
    std::string output_path = "cokernel_run";
    std::vector<std::string> formats = {"csv", "json"};

    /// Throws ConfigError on an empty or unsorted n list, trials < 1, repeated
    /// primes, primes of another domain, bad caps or an invalid policy.
    void validate() const;
    EntryDistribution make_distribution() const;
    Element effective_audit_modulus() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the JSON config format documented in the README; validates the result.
ExperimentConfig parse_config(std::string_view json_text);
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

/// Balance audit as reported: rationals and elements in their text forms.
struct BalanceEcho {
    struct Entry {
        std::string ideal;
        int dim = 0;
        std::string epsilon;
        std::vector<Word> normal;
        Word offset = 0;
        friend bool operator==(const Entry&, const Entry&) = default;
    };
    std::string modulus;
    std::vector<Entry> entries;
    std::string overall;

    friend bool operator==(const BalanceEcho&, const BalanceEcho&) = default;
};

BalanceEcho echo_balance(const DomainId& domain, const BalanceReport& report);

enum class BucketKind { type, other, indeterminate };

struct Bucket {
    BucketKind kind = BucketKind::type;
    /// ModuleType::to_string for type buckets, "other" or "indeterminate" otherwise.
    std::string label;
    std::uint64_t count = 0;
    double frequency = 0;
    /// Binomial standard error sqrt(f (1 - f) / trials).
    double std_error = 0;
    double prediction = 0;
    double truncation_bound = 0;

    friend bool operator==(const Bucket&, const Bucket&) = default;
};

struct NSummary {
    int n = 0;
    std::uint64_t trials = 0;
    /// Type buckets by decreasing prediction, then "other", then "indeterminate".
    /// Every observed capped type and every type with expected count >= 5 appears.
    std::vector<Bucket> buckets;
    /// Half the L1 distance over all capped types, "other" and "indeterminate".
    double tv_distance = 0;
    /// Over buckets with expected count >= 5.
    double chi_square = 0;
    int chi_square_cells = 0;
    std::optional<double> chi_square_p_value;
    double partial_sum = 0;

    const Bucket* find(std::string_view label) const;
    double indeterminate_rate() const;

    friend bool operator==(const NSummary&, const NSummary&) = default;
};

struct EmpiricalSummary {
    ExperimentConfig config;
    BalanceEcho balance;
    std::vector<NSummary> per_n;

    friend bool operator==(const EmpiricalSummary&, const EmpiricalSummary&) = default;
};

struct RunOptions {
    int threads = 1;
};

struct RunTiming {
    struct Entry {
        int n = 0;
        double seconds = 0;
        double trials_per_second = 0;
    };
    std::vector<Entry> per_n;
};

/// Throws BalanceError if strict balance is on and the audited epsilon is 0.
EmpiricalSummary run_distribution_experiment(const ExperimentConfig& cfg, const RunOptions& options = {},
                                             RunTiming* timing = nullptr);

struct MomentEstimate {
    int n = 0;
    std::string target;
    std::uint64_t trials = 0;
    /// Mean of #Sur(observed cokernel, target) over the trials.
    double estimate = 0;
    double std_error = 0;
    /// |target|^{-u}.
    double prediction = 0;
    std::uint64_t indeterminate = 0;

    friend bool operator==(const MomentEstimate&, const MomentEstimate&) = default;
};

struct MomentSummary {
    ExperimentConfig config;
    BalanceEcho balance;
    /// Ordered by n, then by target as listed.
    std::vector<MomentEstimate> rows;

    friend bool operator==(const MomentSummary&, const MomentSummary&) = default;
};

/// Uses `targets`, or the config's moment targets when empty. Throws
/// ParameterError for a target supported at an unconfigured prime.
MomentSummary run_moment_experiment(const ExperimentConfig& cfg, const std::vector<ModuleType>& targets = {},
                                    const RunOptions& options = {}, RunTiming* timing = nullptr);

struct GaloisRow {
    int n = 0;
    std::uint64_t trials = 0;
    /// Trials whose partitions at the two conjugate primes agree, indeterminate
    /// trials included (compared through their saturated partitions).
    std::uint64_t conjugate_equal = 0;
    double equal_fraction = 0;
    std::uint64_t indeterminate = 0;
    /// Determinate trials' types with different partitions at the conjugate primes.
    std::vector<Bucket> asymmetric;
    double asymmetric_frequency = 0;

    friend bool operator==(const GaloisRow&, const GaloisRow&) = default;
};

struct GaloisReport {
    ExperimentConfig config;
    BalanceEcho balance;
    std::string prime;
    std::string conjugate;
    /// True when every support element is a rational integer.
    bool invariant_support = false;
    /// Limiting probability that the conjugate partitions differ (within the caps).
    double predicted_asymmetric_mass = 0;
    std::vector<GaloisRow> rows;

    friend bool operator==(const GaloisReport&, const GaloisReport&) = default;
};

/// Requires the Gaussian integers and a split rational prime (ParameterError
/// otherwise). Balance is audited and reported but never enforced.
GaloisReport run_galois_demo(const ExperimentConfig& cfg, const RunOptions& options = {}, RunTiming* timing = nullptr);

/// Throws DiagnosticsError if more than half the trials at some n were indeterminate.
void check_indeterminate_rate(const EmpiricalSummary& s);
void check_indeterminate_rate(const MomentSummary& s);
void check_indeterminate_rate(const GaloisReport& s);

/// CSV header: n,type,count,frequency,stderr,prediction,truncation_bound
std::string render_csv(const EmpiricalSummary& s);
std::string render_json(const EmpiricalSummary& s);
/// Frequencies against predictions, one panel per n.
std::string render_svg(const EmpiricalSummary& s);
EmpiricalSummary parse_summary_json(std::string_view text);

std::string render_csv(const MomentSummary& s);
std::string render_json(const MomentSummary& s);
MomentSummary parse_moment_json(std::string_view text);

std::string render_csv(const GaloisReport& s);
std::string render_json(const GaloisReport& s);
GaloisReport parse_galois_json(std::string_view text);

/// Writes <prefix>.csv / .json / .svg for the requested formats and returns
/// the paths written. Throws ConfigError for an unknown format and IoError
/// when a file cannot be written.
std::vector<std::filesystem::path> emit_report(const EmpiricalSummary& s, const std::filesystem::path& prefix,
                                               const std::vector<std::string>& formats);
/// Only csv and json apply; svg is ignored.
std::vector<std::filesystem::path> emit_report(const MomentSummary& s, const std::filesystem::path& prefix,
                                               const std::vector<std::string>& formats);
std::vector<std::filesystem::path> emit_report(const GaloisReport& s, const std::filesystem::path& prefix,
                                               const std::vector<std::string>& formats);

}  // namespace cokernel
