// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cokernel/error.hpp"
#include "cokernel/experiments.hpp"
#include "cokernel/snf.hpp"
#include "cokernel/theory.hpp"
#include "oracles.hpp"

using namespace cokernel;

namespace {

// Tolerances and budgets, fixed in advance of any run.
constexpr double kCountingSeconds = 60;
constexpr double kSnfSeconds = 30;
constexpr double kSingleThreadSeconds = 300;
constexpr double kQ2Trivial = 0.2887881;
constexpr double kQ2One = 0.2887881;
constexpr double kQ2Two = 0.1443940;
constexpr double kTolTrivial = 0.015;
constexpr double kTolOne = 0.015;
constexpr double kTolTwo = 0.012;
constexpr double kU1Trivial = 0.5775762;
constexpr double kTolU1 = 0.015;
constexpr double kTolMoment = 0.05;
constexpr double kMomentSlackSigmas = 2;
constexpr double kGaussianTrivial = 0.760332795871232;
constexpr double kTolGaussian = 0.02;
constexpr double kTolFunctionField = 0.015;
constexpr double kPartialSumFloor = 0.999;
constexpr double kIndeterminateCeiling = 0.01;
constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, std::string_view title, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failures;
    fmt::print("criterion {:>2} [{}] {}: {}\n", id, o.pass ? "PASS" : "FAIL", title, o.detail);
    std::fflush(stdout);
}

PrimeIdealDesc rational_prime(const DomainId& d, Word p) { return factor_rational_prime(d, p).front(); }

ExperimentConfig base_config(const DomainId& d, std::vector<PrimeIdealDesc> primes, int u, std::vector<int> ns,
                             std::uint64_t trials, DistributionSpec dist) {
    ExperimentConfig cfg;
    cfg.domain = d;
    cfg.primes = std::move(primes);
    cfg.u = u;
    cfg.n_values = std::move(ns);
    cfg.trials = trials;
    cfg.distribution = std::move(dist);
    cfg.seed = kSeed;
    return cfg;
}

ExperimentConfig criterion3_config() {
    const auto zz = DomainId::integers();
    return base_config(zz, {rational_prime(zz, 2)}, 0, {48}, 20000, {"bernoulli01", {Rational(1, 2), {}, {}, {}}});
}

double frequency(const NSummary& ns, const std::string& label) {
    const auto* b = ns.find(label);
    return b ? b->frequency : 0.0;
}

std::string check_near(const char* name, double value, double target, double tol, bool& ok) {
    const bool good = std::fabs(value - target) <= tol;
    ok = ok && good;
    return fmt::format("{} {:.5f} (target {:.7f} +- {})", name, value, target, tol);
}

std::vector<Partition> oracle_range(Word q) {
    std::vector<Partition> out;
    int max_weight = 0;
    for (Word size = q; size <= 256; size *= q) ++max_weight;
    for (const auto& p : enumerate_partitions(max_weight, max_weight)) {
        if (p.weight() <= max_weight) out.push_back(p);
    }
    return out;
}

Outcome counting_oracles() {
    const auto start = Clock::now();
    std::size_t pairs = 0;
    for (Word q : {2, 3, 4, 5}) {
        const auto parts = oracle_range(q);
        for (const auto& l : parts) {
            if (count_aut_local_exact(l, q) != oracle::brute_force_count(l, {}, q, oracle::CountMode::aut)) {
                return {false, fmt::format("Aut mismatch at q={} {}", q, l.to_string())};
            }
            for (const auto& m : parts) {
                ++pairs;
                if (count_hom_local_exact(l, m, q) != oracle::brute_force_count(l, m, q, oracle::CountMode::hom)) {
                    return {false, fmt::format("Hom mismatch at q={} {} -> {}", q, l.to_string(), m.to_string())};
                }
                if (count_sur_local_exact(l, m, q) != oracle::brute_force_count(l, m, q, oracle::CountMode::sur)) {
                    return {false, fmt::format("Sur mismatch at q={} {} -> {}", q, l.to_string(), m.to_string())};
                }
            }
        }
    }
    const double s = seconds_since(start);
    return {s < kCountingSeconds, fmt::format("{} partition pairs exact, {:.1f} s (limit {} s)", pairs, s, kCountingSeconds)};
}

Outcome snf_oracle() {
    const auto start = Clock::now();
    const auto zz = DomainId::integers();
    std::mt19937_64 rng(kSeed);
    int singular = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const int cols = n + static_cast<int>(rng() % 3);
        Matrix<std::int64_t> a(n, cols);
        Matrix<Element> m(n, cols);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < cols; ++c) {
                a(r, c) = static_cast<std::int64_t>(rng() % 19) - 9;
                m(r, c) = Integer{a(r, c)};
            }
        }
        const auto diag = oracle::integer_snf_oracle(a);
        const bool has_zero = std::any_of(diag.begin(), diag.end(), [](const BigInt& d) { return d == 0; });
        singular += has_zero;
        for (Word p : {2, 3, 5}) {
            const auto prime = rational_prime(zz, p);
            if (has_zero) {
                try {
                    (void)cokernel_local_type(m, prime);
                    return {false, fmt::format("trial {}: singular matrix not reported at p={}", trial, p)};
                } catch (const IndeterminateCokernel&) {
                }
                continue;
            }
            std::vector<int> parts;
            for (const auto& d : diag) {
                if (const int v = oracle::p_adic_valuation(d, p); v > 0) parts.push_back(v);
            }
            if (cokernel_local_type(m, prime) != Partition::from_unsorted(parts)) {
                return {false, fmt::format("trial {}: mismatch at p={}", trial, p)};
            }
        }
    }
    const double s = seconds_since(start);
    return {s < kSnfSeconds, fmt::format("1000 matrices x 3 primes exact ({} singular, reported indeterminate), {:.2f} s", singular, s)};
}

EmpiricalSummary criterion3_run;
std::string criterion3_csv;

Outcome square_bernoulli() {
    const auto start = Clock::now();
    criterion3_run = run_distribution_experiment(criterion3_config(), {1});
    criterion3_csv = render_csv(criterion3_run);
    const double s = seconds_since(start);
    const auto& ns = criterion3_run.per_n.front();
    bool ok = s < kSingleThreadSeconds;
    std::string d = check_near("trivial", frequency(ns, std::string(kTrivialTypeString)), kQ2Trivial, kTolTrivial, ok);
    d += "; " + check_near("(1)", frequency(ns, "2:(1)"), kQ2One, kTolOne, ok);
    d += "; " + check_near("(2)", frequency(ns, "2:(2)"), kQ2Two, kTolTwo, ok);
    return {ok, d + fmt::format("; {:.1f} s single-threaded", s)};
}

Outcome rectangular() {
    auto cfg = criterion3_config();
    cfg.u = 1;
    const auto s = run_distribution_experiment(cfg);
    bool ok = true;
    auto d = check_near("trivial", frequency(s.per_n.front(), std::string(kTrivialTypeString)), kU1Trivial, kTolU1, ok);
    return {ok, d};
}

Outcome moments() {
    const auto zz = DomainId::integers();
    const auto p3 = rational_prime(zz, 3);
    auto cfg = base_config(zz, {p3}, 0, {12, 24, 48}, 10000, {"bernoulli01", {Rational(1, 2), {}, {}, {}}});
    const auto target = ModuleType::parse(zz, "3:(1)");
    const auto s = run_moment_experiment(cfg, {target});
    bool ok = std::fabs(s.rows.back().estimate - 1.0) <= kTolMoment;
    std::string d;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& r = s.rows[i];
        d += fmt::format("{}n={}: {:.4f} +- {:.4f}", i ? "; " : "", r.n, r.estimate, r.std_error);
        if (i > 0) {
            const auto& prev = s.rows[i - 1];
            const double slack = kMomentSlackSigmas * std::hypot(prev.std_error, r.std_error);
            if (std::fabs(r.estimate - 1) > std::fabs(prev.estimate - 1) + slack) ok = false;
        }
    }
    return {ok, d + fmt::format(" (n=48 within +-{}, error nonincreasing up to {} combined stderr)", kTolMoment, kMomentSlackSigmas)};
}

Outcome gaussian_split() {
    const auto zi = DomainId::gaussian_integers();
    const auto g5 = factor_rational_prime(zi, 5);
    DistributionParams params;
    params.support = {Gaussian{0, 0}, Gaussian{1, 0}, Gaussian{0, 1}};
    auto cfg = base_config(zi, {g5[0]}, 0, {32}, 10000, {"uniform-support", params});
    const auto s = run_distribution_experiment(cfg);
    bool ok = s.balance.entries.size() >= 1;
    std::string eps = "missing";
    for (const auto& e : s.balance.entries) {
        if (e.ideal == "5Z[i]") eps = e.epsilon;
    }
    ok = ok && eps == "1/3";
    auto d = fmt::format("audited epsilon at 5Z[i] = {}; ", eps);
    d += check_near("trivial", frequency(s.per_n.front(), std::string(kTrivialTypeString)), kGaussianTrivial, kTolGaussian, ok);
    return {ok, d + fmt::format(" at prime {}", g5[0].label())};
}

Outcome function_field() {
    const auto f2 = DomainId::polynomials(2);
    const auto px = factor_rational_prime(f2, Polynomial{{0, 1}}).front();
    DistributionParams params;
    params.m = 3;
    auto cfg = base_config(f2, {px}, 0, {48}, 20000, {"poly-powers", params});
    const auto s = run_distribution_experiment(cfg);
    const auto& ns = s.per_n.front();
    const std::string label = px.label();
    bool ok = true;
    std::string d = check_near("trivial", frequency(ns, std::string(kTrivialTypeString)), kQ2Trivial, kTolFunctionField, ok);
    d += "; " + check_near("(1)", frequency(ns, label + ":(1)"), kQ2One, kTolFunctionField, ok);
    d += "; " + check_near("(2)", frequency(ns, label + ":(2)"), kQ2Two, kTolFunctionField, ok);
    return {ok, d};
}

Outcome galois() {
    const auto zi = DomainId::gaussian_integers();
    const auto g5 = factor_rational_prime(zi, 5);
    DistributionParams params;
    params.support = {Gaussian{0, 0}, Gaussian{1, 0}};
    auto cfg = base_config(zi, {g5[0]}, 0, {20}, 1000, {"uniform-support", params});
    cfg.strict_balance = false;
    const auto s = run_galois_demo(cfg);
    const auto& r = s.rows.front();
    std::string eps = "missing";
    for (const auto& e : s.balance.entries) {
        if (e.ideal == "5Z[i]") eps = e.epsilon;
    }
    const bool ok = r.conjugate_equal == r.trials && r.asymmetric.empty() && r.asymmetric_frequency == 0 && eps == "0";
    return {ok, fmt::format("conjugate partitions equal in {}/{} trials; {} asymmetric types observed; audited epsilon at 5Z[i] = {}",
                            r.conjugate_equal, r.trials, r.asymmetric.size(), eps)};
}

Outcome sum_to_one() {
    const auto zz = DomainId::integers();
    const auto p2 = rational_prime(zz, 2);
    bool monotone = true;
    for (int e = 0; e <= 20 && monotone; ++e) {
        for (int l = 0; l <= 20; ++l) {
            const auto here = partial_sum({p2}, 0, e, l).value;
            if (e < 20 && partial_sum({p2}, 0, e + 1, l).value < here) monotone = false;
            if (l < 20 && partial_sum({p2}, 0, e, l + 1).value < here) monotone = false;
        }
    }
    const double top = partial_sum({p2}, 0, 20, 20).as_double();
    auto cfg = base_config(zz, {p2}, 1, {16, 32, 48}, 5000, {"bernoulli01", {Rational(1, 2), {}, {}, {}}});
    const auto s = run_distribution_experiment(cfg);
    double worst = 0;
    for (const auto& ns : s.per_n) worst = std::max(worst, ns.indeterminate_rate());
    const bool ok = monotone && top > kPartialSumFloor && worst < kIndeterminateCeiling;
    return {ok, fmt::format("monotone over caps [0,20]^2: {}; partial sum at (20,20) = {:.9f}; max indeterminate rate at u=1, "
                            "n in {{16,32,48}}: {:.4f}",
                            monotone ? "yes" : "no", top, worst)};
}

Outcome determinism() {
    if (criterion3_csv.empty()) return {false, "criterion 3 run unavailable"};
    std::string d = "1 worker";
    bool ok = true;
    for (int threads : {4, 8}) {
        const auto csv = render_csv(run_distribution_experiment(criterion3_config(), {threads}));
        const bool same = csv == criterion3_csv;
        ok = ok && same;
        d += fmt::format(", {} workers {}", threads, same ? "identical" : "DIFFERENT");
    }
    return {ok, d + fmt::format(" ({} CSV bytes)", criterion3_csv.size())};
}

}  // namespace

int main() {
    report(1, "counting formulas vs brute force", counting_oracles);
    report(2, "local SNF vs integer SNF", snf_oracle);
    report(3, "square Bernoulli matrices over Z at 2", square_bernoulli);
    report(4, "rectangular u=1", rectangular);
    report(5, "surjection moment at 3", moments);
    report(6, "Gaussian split prime (2+i)", gaussian_split);
    report(7, "function field F_2[x] at (x)", function_field);
    report(8, "Galois obstruction at 5", galois);
    report(9, "partial sums reach 1", sum_to_one);
    report(10, "determinism across workers", determinism);
    fmt::print("{} of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
