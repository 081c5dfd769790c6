#include "cokernel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "cokernel/error.hpp"
#include "cokernel/theory.hpp"

namespace cokernel {

namespace {

struct TrialOutcome {
    /// One partition per prime. For an indeterminate prime this is the
    /// saturated partition at the top precision, in which parts >= K read as K.
    std::vector<Partition> parts;
    bool indeterminate = false;
};

Partition partition_from_valuations(const std::vector<int>& valuations) {
    std::vector<int> nonzero;
    for (int v : valuations) {
        if (v > 0) nonzero.push_back(v);
    }
    return Partition::from_unsorted(std::move(nonzero));
}

class TrialEngine {
public:
    TrialEngine(const EntryDistribution& dist, const std::vector<PrimeIdealDesc>& primes, const PrecisionPolicy& policy)
        : dist_(dist) {
        for (const auto& p : primes) reductions_.emplace_back(p, std::span<const Element>(dist.support()), policy);
    }

    TrialOutcome run(int n, int u, std::uint64_t seed, std::uint64_t trial) const {
        const auto indices = sample_indices(dist_, n, u, seed, trial);
        TrialOutcome out;
        for (const auto& r : reductions_) {
            try {
                out.parts.push_back(r.cokernel_local_type(indices));
            } catch (const IndeterminateCokernel& e) {
                out.indeterminate = true;
                out.parts.push_back(partition_from_valuations(e.last().valuations));
            }
        }
        return out;
    }

private:
    const EntryDistribution& dist_;
    std::vector<SupportReduction> reductions_;
};

/// Evaluates fn(trial) for every trial on `threads` workers; results are
/// indexed by trial, so the caller's reduction order is fixed.
template <class Out>
std::vector<Out> run_trials(std::uint64_t trials, int threads, const std::function<Out(std::uint64_t)>& fn) {
    std::vector<Out> out(trials);
    const auto workers = static_cast<unsigned>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(threads, 1)), 1, trials));
    if (workers == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) out[t] = fn(t);
        return out;
    }
    constexpr std::uint64_t kChunk = 32;
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    while (true) {
                        const std::uint64_t begin = next.fetch_add(kChunk);
                        if (begin >= trials) return;
                        const std::uint64_t end = std::min(trials, begin + kChunk);
                        for (std::uint64_t t = begin; t < end; ++t) out[t] = fn(t);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                    next.store(trials);
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

ModuleType type_of(const std::vector<PrimeIdealDesc>& primes, const TrialOutcome& o) {
    ModuleType t;
    for (std::size_t i = 0; i < primes.size(); ++i) t.set(primes[i], o.parts[i]);
    return t;
}

bool within_caps(const TrialOutcome& o, int cap_exponent, int cap_parts) {
    return std::all_of(o.parts.begin(), o.parts.end(),
                       [&](const Partition& p) { return p.largest() <= cap_exponent && p.length() <= cap_parts; });
}

double binomial_stderr(double f, std::uint64_t trials) { return std::sqrt(f * (1 - f) / static_cast<double>(trials)); }

double to_double(const Decimal& d) { return d.convert_to<double>(); }

/// 1 / (|Aut lambda| q^{u |lambda|}).
double local_weight(const Partition& lambda, Word q, int u) {
    const BigInt aut = count_aut_local_exact(lambda, q);
    return 1.0 / (aut.convert_to<double>() * std::pow(static_cast<double>(q), static_cast<double>(u * lambda.weight())));
}

/// Partitions in the cap box with weight at most `max_weight`.
std::vector<Partition> bounded_partitions(int cap_exponent, int cap_parts, int max_weight) {
    std::vector<Partition> out;
    std::vector<int> parts;
    std::function<void(int, int)> walk = [&](int largest, int room) {
        out.push_back(Partition(parts));
        if (static_cast<int>(parts.size()) == cap_parts) return;
        for (int v = std::min(largest, room); v >= 1; --v) {
            parts.push_back(v);
            walk(v, room - v);
            parts.pop_back();
        }
    };
    walk(cap_exponent, max_weight);
    return out;
}

/// Since sum c_j^2 >= |lambda| for the conjugate c, 1/|Aut lambda| <= q^{-|lambda|} / prod_k (1 - q^{-k}).
/// Returns the largest weight whose bound on c * weight(lambda) is still >= floor.
int weight_limit(Word q, int u, double c, double floor) {
    const double phi = euler_product(q, 0, 1e-12).as_double();
    int w = 0;
    while (w < 4096 && c * std::pow(static_cast<double>(q), -static_cast<double>((1 + u) * (w + 1))) / phi >= floor) ++w;
    return w;
}

/// Capped types whose predicted probability is at least `min_prob`, found
/// by a product search over per-prime partitions sorted by weight.
std::vector<ModuleType> likely_types(const std::vector<PrimeIdealDesc>& primes, int u, int cap_exponent, int cap_parts,
                                     double min_prob) {
    double c = 1;
    for (const auto& p : primes) c *= euler_product(p.q, u, 1e-12).as_double();
    std::vector<std::vector<std::pair<double, Partition>>> lists;
    for (const auto& p : primes) {
        std::vector<std::pair<double, Partition>> l;
        for (auto& lambda : bounded_partitions(cap_exponent, cap_parts, weight_limit(p.q, u, c, min_prob))) {
            l.emplace_back(local_weight(lambda, p.q, u), lambda);
        }
        std::stable_sort(l.begin(), l.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        lists.push_back(std::move(l));
    }
    std::vector<double> best_rest(primes.size() + 1, 1.0);
    for (std::size_t i = primes.size(); i-- > 0;) best_rest[i] = best_rest[i + 1] * lists[i].front().first;

    std::vector<ModuleType> out;
    std::vector<const Partition*> chosen(primes.size());
    std::function<void(std::size_t, double)> walk = [&](std::size_t i, double acc) {
        if (i == primes.size()) {
            ModuleType t;
            for (std::size_t k = 0; k < primes.size(); ++k) t.set(primes[k], *chosen[k]);
            out.push_back(std::move(t));
            return;
        }
        for (const auto& [w, lambda] : lists[i]) {
            if (c * acc * w * best_rest[i + 1] < min_prob) break;
            chosen[i] = &lambda;
            walk(i + 1, acc * w);
        }
    };
    walk(0, 1.0);
    return out;
}

BalanceReport audit(const ExperimentConfig& cfg, const EntryDistribution& dist) {
    return balance_report(dist, cfg.effective_audit_modulus());
}

void enforce_balance(const ExperimentConfig& cfg, const BalanceReport& report) {
    if (!cfg.strict_balance || report.overall > 0) return;
    std::string worst;
    for (const auto& e : report.entries) {
        if (e.epsilon <= 0) worst += (worst.empty() ? "" : ", ") + e.ideal.label;
    }
    throw BalanceError(fmt::format("entry distribution is not balanced (epsilon = 0 at {}); rerun without strict balance to proceed",
                                   worst));
}

using Clock = std::chrono::steady_clock;

void record(RunTiming* timing, int n, std::uint64_t trials, Clock::time_point start) {
    if (!timing) return;
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    timing->per_n.push_back({n, s, s > 0 ? static_cast<double>(trials) / s : 0.0});
}

Bucket make_bucket(BucketKind kind, std::string label, std::uint64_t count, std::uint64_t trials, double prediction,
                   double bound) {
    const double f = static_cast<double>(count) / static_cast<double>(trials);
    return {kind, std::move(label), count, f, binomial_stderr(f, trials), prediction, bound};
}

}  // namespace

BalanceEcho echo_balance(const DomainId& domain, const BalanceReport& report) {
    BalanceEcho echo;
    echo.modulus = format_element(domain, report.modulus);
    for (const auto& e : report.entries) {
        echo.entries.push_back({e.ideal.label, e.ideal.dim, format_rational(e.epsilon), e.normal, e.offset});
    }
    echo.overall = format_rational(report.overall);
    return echo;
}

const Bucket* NSummary::find(std::string_view label) const {
    for (const auto& b : buckets) {
        if (b.label == label) return &b;
    }
    return nullptr;
}

double NSummary::indeterminate_rate() const {
    const auto* b = find("indeterminate");
    return b ? b->frequency : 0.0;
}

EmpiricalSummary run_distribution_experiment(const ExperimentConfig& cfg, const RunOptions& options, RunTiming* timing) {
    cfg.validate();
    const auto dist = cfg.make_distribution();
    const auto report = audit(cfg, dist);
    enforce_balance(cfg, report);

    EmpiricalSummary summary{cfg, echo_balance(cfg.domain, report), {}};
    const TrialEngine engine(dist, cfg.primes, cfg.precision);
    const auto partial = partial_sum(cfg.primes, cfg.u, cfg.cap_exponent, cfg.cap_parts);
    const double p_in = partial.as_double();
    const double p_other = std::max(0.0, to_double(1 - partial.value));
    const double trials_d = static_cast<double>(cfg.trials);
    const auto likely = likely_types(cfg.primes, cfg.u, cfg.cap_exponent, cfg.cap_parts, 5.0 / trials_d);

    std::map<std::string, Prediction> prediction_cache;
    auto predict = [&](const ModuleType& t) -> const Prediction& {
        const auto key = t.to_string();
        auto it = prediction_cache.find(key);
        if (it == prediction_cache.end()) it = prediction_cache.emplace(key, predicted_probability(t, cfg.primes, cfg.u)).first;
        return it->second;
    };

    for (int n : cfg.n_values) {
        const auto start = Clock::now();
        const auto outcomes = run_trials<TrialOutcome>(
            cfg.trials, options.threads, [&](std::uint64_t t) { return engine.run(n, cfg.u, cfg.seed, t); });
        record(timing, n, cfg.trials, start);

        std::map<std::string, std::pair<ModuleType, std::uint64_t>> tally;
        std::uint64_t other = 0, indeterminate = 0;
        for (const auto& o : outcomes) {
            if (o.indeterminate) {
                ++indeterminate;
            } else if (!within_caps(o, cfg.cap_exponent, cfg.cap_parts)) {
                ++other;
            } else {
                auto t = type_of(cfg.primes, o);
                auto key = t.to_string();
                auto [it, fresh] = tally.try_emplace(std::move(key), std::move(t), 0);
                ++it->second.second;
            }
        }
        for (const auto& t : likely) tally.try_emplace(t.to_string(), t, 0);

        NSummary ns;
        ns.n = n;
        ns.trials = cfg.trials;
        ns.partial_sum = p_in;
        for (const auto& [label, entry] : tally) {
            const auto& pred = predict(entry.first);
            ns.buckets.push_back(make_bucket(BucketKind::type, label, entry.second, cfg.trials, pred.as_double(),
                                             to_double(pred.truncation_bound)));
        }
        std::stable_sort(ns.buckets.begin(), ns.buckets.end(), [](const Bucket& a, const Bucket& b) {
            return a.prediction != b.prediction ? a.prediction > b.prediction : a.label < b.label;
        });
        ns.buckets.push_back(make_bucket(BucketKind::other, "other", other, cfg.trials, p_other, to_double(partial.truncation_bound)));
        ns.buckets.push_back(make_bucket(BucketKind::indeterminate, "indeterminate", indeterminate, cfg.trials, 0.0, 0.0));

        // Unlisted capped types were never observed, so each contributes its prediction.
        double listed = 0, l1 = 0;
        for (const auto& b : ns.buckets) {
            l1 += std::fabs(b.frequency - b.prediction);
            if (b.kind == BucketKind::type) listed += b.prediction;
        }
        l1 += std::max(0.0, p_in - listed);
        ns.tv_distance = l1 / 2;

        for (const auto& b : ns.buckets) {
            const double expected = b.prediction * trials_d;
            if (expected < 5) continue;
            const double d = static_cast<double>(b.count) - expected;
            ns.chi_square += d * d / expected;
            ++ns.chi_square_cells;
        }
        if (ns.chi_square_cells >= 2) {
            const boost::math::chi_squared law(ns.chi_square_cells - 1);
            ns.chi_square_p_value = boost::math::cdf(boost::math::complement(law, ns.chi_square));
        }
        summary.per_n.push_back(std::move(ns));
    }
    return summary;
}

MomentSummary run_moment_experiment(const ExperimentConfig& cfg, const std::vector<ModuleType>& targets_in,
                                    const RunOptions& options, RunTiming* timing) {
    cfg.validate();
    const auto& targets = targets_in.empty() ? cfg.moment_targets : targets_in;
    if (targets.empty()) throw ParameterError("no moment targets given");
    for (const auto& t : targets) {
        for (const auto& [prime, part] : t.components()) {
            if (std::find(cfg.primes.begin(), cfg.primes.end(), prime) == cfg.primes.end()) {
                throw ParameterError(fmt::format("target {} uses a prime outside the configured set", t.to_string()));
            }
        }
    }
    const auto dist = cfg.make_distribution();
    const auto report = audit(cfg, dist);
    enforce_balance(cfg, report);

    MomentSummary summary{cfg, echo_balance(cfg.domain, report), {}};
    const TrialEngine engine(dist, cfg.primes, cfg.precision);
    // #Sur(M, N) depends only on M / pi^e M with e the largest exponent of N, and
    // every precision on the ladder exceeds any practical e, so saturated
    // partitions still give exact counts.
    for (int n : cfg.n_values) {
        const auto start = Clock::now();
        const auto outcomes = run_trials<TrialOutcome>(
            cfg.trials, options.threads, [&](std::uint64_t t) { return engine.run(n, cfg.u, cfg.seed, t); });
        record(timing, n, cfg.trials, start);

        std::uint64_t indeterminate = 0;
        std::map<std::string, std::pair<ModuleType, std::uint64_t>> observed;
        for (const auto& o : outcomes) {
            if (o.indeterminate) ++indeterminate;
            auto t = type_of(cfg.primes, o);
            auto key = t.to_string();
            ++observed.try_emplace(std::move(key), std::move(t), 0).first->second.second;
        }
        for (const auto& target : targets) {
            BigInt sum = 0, sum_sq = 0;
            for (const auto& [label, entry] : observed) {
                const BigInt s = count_sur_exact(entry.first, target);
                sum += s * entry.second;
                sum_sq += s * s * entry.second;
            }
            const Rational mean(sum, BigInt(cfg.trials));
            MomentEstimate est;
            est.n = n;
            est.target = target.to_string();
            est.trials = cfg.trials;
            est.estimate = mean.convert_to<double>();
            if (cfg.trials > 1) {
                const Rational var = (Rational(sum_sq) - Rational(sum) * mean) / Rational(BigInt(cfg.trials - 1));
                est.std_error = std::sqrt(var.convert_to<double>() / static_cast<double>(cfg.trials));
            }
            est.prediction = predicted_moment(target, cfg.u).convert_to<double>();
            est.indeterminate = indeterminate;
            summary.rows.push_back(std::move(est));
        }
    }
    return summary;
}

GaloisReport run_galois_demo(const ExperimentConfig& cfg, const RunOptions& options, RunTiming* timing) {
    cfg.validate();
    if (cfg.domain.kind != DomainKind::gaussian_integers) throw ParameterError("the Galois demo needs the Gaussian integers");
    const Word p = cfg.galois_prime.value_or(cfg.primes.front().p);
    const auto pair = factor_rational_prime(cfg.domain, p);
    if (pair.size() != 2 || pair[0].kind != PrimeKind::gaussian_split) {
        throw ParameterError(fmt::format("{} does not split in the Gaussian integers", p));
    }
    const auto dist = cfg.make_distribution();
    const auto report = balance_report(dist, Gaussian{static_cast<std::int64_t>(p), 0});

    GaloisReport out;
    out.config = cfg;
    out.balance = echo_balance(cfg.domain, report);
    out.prime = pair[0].label();
    out.conjugate = pair[1].label();
    out.invariant_support = std::all_of(dist.support().begin(), dist.support().end(),
                                        [](const Element& x) { return std::get<Gaussian>(x).im == 0; });
    {
        const Decimal c = euler_product(p, cfg.u, 1e-15).value;
        Decimal same = 0;
        // Squared weights beyond this size sum to far below double precision.
        for (const auto& lambda : bounded_partitions(cfg.cap_exponent, cfg.cap_parts, weight_limit(p, cfg.u, 1.0, 1e-9))) {
            const Decimal w = c / (Decimal(count_aut_local_exact(lambda, p).str()) * pow(Decimal(p), cfg.u * lambda.weight()));
            same += w * w;
        }
        out.predicted_asymmetric_mass = to_double(1 - same);
    }

    const TrialEngine engine(dist, pair, cfg.precision);
    for (int n : cfg.n_values) {
        const auto start = Clock::now();
        const auto outcomes = run_trials<TrialOutcome>(
            cfg.trials, options.threads, [&](std::uint64_t t) { return engine.run(n, cfg.u, cfg.seed, t); });
        record(timing, n, cfg.trials, start);

        GaloisRow row;
        row.n = n;
        row.trials = cfg.trials;
        std::map<std::string, std::pair<ModuleType, std::uint64_t>> asym;
        std::uint64_t asym_total = 0;
        for (const auto& o : outcomes) {
            if (o.indeterminate) ++row.indeterminate;
            if (o.parts[0] == o.parts[1]) {
                ++row.conjugate_equal;
            } else if (!o.indeterminate) {
                ++asym_total;
                auto t = type_of(pair, o);
                auto key = t.to_string();
                ++asym.try_emplace(std::move(key), std::move(t), 0).first->second.second;
            }
        }
        row.equal_fraction = static_cast<double>(row.conjugate_equal) / static_cast<double>(cfg.trials);
        row.asymmetric_frequency = static_cast<double>(asym_total) / static_cast<double>(cfg.trials);
        for (const auto& [label, entry] : asym) {
            const auto pred = predicted_probability(entry.first, pair, cfg.u);
            row.asymmetric.push_back(make_bucket(BucketKind::type, label, entry.second, cfg.trials, pred.as_double(),
                                                 to_double(pred.truncation_bound)));
        }
        std::stable_sort(row.asymmetric.begin(), row.asymmetric.end(), [](const Bucket& a, const Bucket& b) {
            return a.count != b.count ? a.count > b.count : a.label < b.label;
        });
        out.rows.push_back(std::move(row));
    }
    return out;
}

void check_indeterminate_rate(const EmpiricalSummary& s) {
    for (const auto& ns : s.per_n) {
        if (ns.indeterminate_rate() > 0.5) {
            throw DiagnosticsError(fmt::format("n = {}: {:.1f}% of trials were indeterminate", ns.n, 100 * ns.indeterminate_rate()));
        }
    }
}

void check_indeterminate_rate(const MomentSummary& s) {
    for (const auto& r : s.rows) {
        if (2 * r.indeterminate > r.trials) {
            throw DiagnosticsError(fmt::format("n = {}: {} of {} trials were indeterminate", r.n, r.indeterminate, r.trials));
        }
    }
}

void check_indeterminate_rate(const GaloisReport& s) {
    for (const auto& r : s.rows) {
        if (2 * r.indeterminate > r.trials) {
            throw DiagnosticsError(fmt::format("n = {}: {} of {} trials were indeterminate", r.n, r.indeterminate, r.trials));
        }
    }
}

}  // namespace cokernel
