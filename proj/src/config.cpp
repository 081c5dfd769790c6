#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cokernel/error.hpp"
#include "cokernel/experiments.hpp"

namespace cokernel {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

std::string element_text(const json& j, std::string_view field) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    fail(fmt::format("{}: expected an element literal, got {}", field, j.dump()));
}

Element element_from(const DomainId& domain, const json& j, std::string_view field) {
    try {
        return parse_element(domain, element_text(j, field));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(fmt::format("{}: {}", field, e.what()));
    }
}

Rational weight_from(const json& j, std::string_view field) {
    if (j.is_string()) return parse_weight(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number()) return weight_from_double(j.get<double>());
    fail(fmt::format("{}: expected a number or fraction string", field));
}

template <class T>
T number(const json& j, std::string_view field) {
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) fail(fmt::format("{}: {} out of range", field, v));
        return static_cast<T>(v);
    }
    if (!j.is_number_integer()) fail(fmt::format("{}: expected an integer", field));
    const auto v = j.get<std::int64_t>();
    if (v < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
        (v > 0 && static_cast<std::uint64_t>(v) > static_cast<std::uint64_t>(std::numeric_limits<T>::max()))) {
        fail(fmt::format("{}: {} out of range", field, v));
    }
    return static_cast<T>(v);
}

DomainId domain_from(const json& j) {
    if (j.is_string()) return parse_domain(j.get<std::string>());
    if (j.is_object() && j.contains("kind")) {
        const Word p = j.contains("p") ? number<Word>(j.at("p"), "domain.p") : 0;
        return parse_domain(j.at("kind").get<std::string>(), p);
    }
    fail("domain: expected a name or {\"kind\", \"p\"}");
}

PrimeIdealDesc prime_from(const DomainId& domain, const json& j) {
    auto by_rational = [&](Word p, std::optional<int> index) {
        const auto all = factor_rational_prime(domain, p);
        if (!index) {
            if (all.size() != 1) fail(fmt::format("primes: {} primes lie above {}; give an index", all.size(), p));
            return all.front();
        }
        if (*index < 0 || static_cast<std::size_t>(*index) >= all.size()) {
            fail(fmt::format("primes: index {} out of range for {}", *index, p));
        }
        return all[static_cast<std::size_t>(*index)];
    };
    try {
        if (j.is_number_integer()) {
            if (domain.kind == DomainKind::polynomials) fail("primes: polynomial primes need a generator");
            return by_rational(number<Word>(j, "primes"), std::nullopt);
        }
        if (j.is_string()) return prime_from_generator(domain, parse_element(domain, j.get<std::string>()));
        if (j.is_object()) {
            if (j.contains("generator")) return prime_from_generator(domain, element_from(domain, j.at("generator"), "primes.generator"));
            if (j.contains("rational")) {
                std::optional<int> index;
                if (j.contains("index")) index = number<int>(j.at("index"), "primes.index");
                return by_rational(number<Word>(j.at("rational"), "primes.rational"), index);
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(fmt::format("primes: {}", e.what()));
    }
    fail(fmt::format("primes: cannot read selector {}", j.dump()));
}

DistributionSpec distribution_from(const DomainId& domain, const json& j) {
    DistributionSpec spec;
    if (j.is_string()) {
        spec.name = j.get<std::string>();
        return spec;
    }
    if (!j.is_object()) fail("distribution: expected a name or an object");
    // Either {"name", q, m, support, weights} or {"builtin": name, "params": {...}}.
    const bool nested = j.contains("builtin");
    if (nested && j.contains("name")) fail("distribution: give either name or builtin");
    spec.name = nested ? j.at("builtin").get<std::string>() : j.value("name", std::string("uniform-support"));
    const json& params = nested ? j.value("params", json::object()) : j;
    if (!params.is_object()) fail("distribution.params: expected an object");
    if (params.contains("q")) spec.params.q = weight_from(params.at("q"), "distribution.q");
    if (params.contains("m")) spec.params.m = number<int>(params.at("m"), "distribution.m");
    if (params.contains("support")) {
        for (const auto& x : params.at("support")) spec.params.support.push_back(element_from(domain, x, "distribution.support"));
    }
    if (params.contains("weights")) {
        for (const auto& w : params.at("weights")) spec.params.weights.push_back(weight_from(w, "distribution.weights"));
    }
    return spec;
}

json weight_json(const Rational& r) { return format_rational(r); }

}  // namespace

void ExperimentConfig::validate() const {
    if (n_values.empty()) fail("n list is empty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1) fail("n values must be positive");
        if (i > 0 && n_values[i] <= n_values[i - 1]) fail("n list must be strictly ascending");
    }
    if (trials < 1) fail("trials must be at least 1");
    if (u < 0) fail("u must be non-negative");
    if (primes.empty()) fail("no primes configured");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!(primes[i].domain == domain)) fail(fmt::format("prime {} belongs to another domain", primes[i].label()));
        for (std::size_t k = 0; k < i; ++k) {
            if (primes[i] == primes[k]) fail(fmt::format("prime {} listed twice", primes[i].label()));
        }
    }
    if (cap_exponent < 0 || cap_parts < 0 || cap_exponent > 64 || cap_parts > 64) fail("caps must lie in [0, 64]");
    try {
        precision.validate();
    } catch (const ParameterError& e) {
        fail(e.what());
    }
    if (audit_modulus) {
        try {
            check_element(domain, *audit_modulus);
        } catch (const Error& e) {
            fail(fmt::format("audit_modulus: {}", e.what()));
        }
        if (elem_is_zero(*audit_modulus)) fail("audit_modulus must be nonzero");
    }
    for (const auto& t : moment_targets) {
        for (const auto& [prime, part] : t.components()) {
            if (std::find(primes.begin(), primes.end(), prime) == primes.end()) {
                fail(fmt::format("moment target {} uses an unconfigured prime", t.to_string()));
            }
        }
    }
    for (const auto& f : formats) {
        if (f != "csv" && f != "json" && f != "svg") fail(fmt::format("unknown output format '{}'", f));
    }
    (void)make_distribution();
}

EntryDistribution ExperimentConfig::make_distribution() const {
    try {
        return builtin_distribution(distribution.name, domain, distribution.params);
    } catch (const ParameterError& e) {
        fail(fmt::format("distribution: {}", e.what()));
    } catch (const UsageError& e) {
        fail(fmt::format("distribution: {}", e.what()));
    }
}

Element ExperimentConfig::effective_audit_modulus() const {
    return audit_modulus ? *audit_modulus : cokernel::audit_modulus(domain, primes);
}

ExperimentConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) fail("config must be a JSON object");
    static const std::vector<std::string> known = {"domain", "primes", "u", "n", "trials", "distribution", "seed",
                                                   "precision", "caps", "strict_balance", "audit_modulus",
                                                   "moment_targets", "galois_prime", "output"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) fail(fmt::format("unknown config key '{}'", key));
    }

    ExperimentConfig cfg;
    try {
        cfg.domain = domain_from(j.value("domain", json("integers")));
        if (!j.contains("primes") || !j.at("primes").is_array()) fail("primes: expected a list");
        for (const auto& p : j.at("primes")) cfg.primes.push_back(prime_from(cfg.domain, p));
        if (j.contains("u")) cfg.u = number<int>(j.at("u"), "u");
        if (!j.contains("n")) fail("n: missing");
        if (j.at("n").is_array()) {
            for (const auto& n : j.at("n")) cfg.n_values.push_back(number<int>(n, "n"));
        } else {
            cfg.n_values.push_back(number<int>(j.at("n"), "n"));
        }
        if (j.contains("trials")) cfg.trials = number<std::uint64_t>(j.at("trials"), "trials");
        if (j.contains("distribution")) cfg.distribution = distribution_from(cfg.domain, j.at("distribution"));
        if (j.contains("seed")) cfg.seed = number<std::uint64_t>(j.at("seed"), "seed");
        if (j.contains("precision")) {
            const auto& p = j.at("precision");
            if (p.contains("k_init")) cfg.precision.k_init = number<int>(p.at("k_init"), "precision.k_init");
            if (p.contains("k_max")) cfg.precision.k_max = number<int>(p.at("k_max"), "precision.k_max");
            if (p.contains("growth")) cfg.precision.growth = number<int>(p.at("growth"), "precision.growth");
        }
        if (j.contains("caps")) {
            const auto& c = j.at("caps");
            if (c.contains("exponent")) cfg.cap_exponent = number<int>(c.at("exponent"), "caps.exponent");
            if (c.contains("parts")) cfg.cap_parts = number<int>(c.at("parts"), "caps.parts");
        }
        if (j.contains("strict_balance")) {
            if (!j.at("strict_balance").is_boolean()) fail("strict_balance: expected true or false");
            cfg.strict_balance = j.at("strict_balance").get<bool>();
        }
        if (j.contains("audit_modulus") && !j.at("audit_modulus").is_null()) {
            cfg.audit_modulus = element_from(cfg.domain, j.at("audit_modulus"), "audit_modulus");
        }
        if (j.contains("moment_targets")) {
            for (const auto& t : j.at("moment_targets")) {
                if (!t.is_string()) fail("moment_targets: expected type strings");
                cfg.moment_targets.push_back(ModuleType::parse(cfg.domain, t.get<std::string>()));
            }
        }
        if (j.contains("galois_prime") && !j.at("galois_prime").is_null()) {
            cfg.galois_prime = number<Word>(j.at("galois_prime"), "galois_prime");
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            if (o.contains("path")) cfg.output_path = o.at("path").get<std::string>();
            if (o.contains("formats")) cfg.formats = o.at("formats").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        fail(fmt::format("config: {}", e.what()));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(fmt::format("config: {}", e.what()));
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["domain"] = cfg.domain.name();
    j["primes"] = json::array();
    for (const auto& p : cfg.primes) j["primes"].push_back({{"generator", p.label()}});
    j["u"] = cfg.u;
    j["n"] = cfg.n_values;
    j["trials"] = cfg.trials;
    json d;
    d["name"] = cfg.distribution.name;
    const auto& params = cfg.distribution.params;
    if (params.q) d["q"] = weight_json(*params.q);
    if (params.m) d["m"] = *params.m;
    if (!params.support.empty()) {
        d["support"] = json::array();
        for (const auto& x : params.support) d["support"].push_back(format_element(cfg.domain, x));
    }
    if (!params.weights.empty()) {
        d["weights"] = json::array();
        for (const auto& w : params.weights) d["weights"].push_back(weight_json(w));
    }
    j["distribution"] = d;
    j["seed"] = cfg.seed;
    j["precision"] = {{"k_init", cfg.precision.k_init}, {"k_max", cfg.precision.k_max}, {"growth", cfg.precision.growth}};
    j["caps"] = {{"exponent", cfg.cap_exponent}, {"parts", cfg.cap_parts}};
    j["strict_balance"] = cfg.strict_balance;
    j["audit_modulus"] = cfg.audit_modulus ? json(format_element(cfg.domain, *cfg.audit_modulus)) : json(nullptr);
    j["moment_targets"] = json::array();
    for (const auto& t : cfg.moment_targets) j["moment_targets"].push_back(t.to_string());
    j["galois_prime"] = cfg.galois_prime ? json(*cfg.galois_prime) : json(nullptr);
    j["output"] = {{"path", cfg.output_path}, {"formats", cfg.formats}};
    return j.dump(2);
}

}  // namespace cokernel
