#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cokernel/error.hpp"
#include "cokernel/experiments.hpp"

namespace cokernel {

namespace {

using nlohmann::json;

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Shortest one-significant-digit form: 1e-9, 3e-10, 0.
std::string compact_bound(double x) {
    if (x == 0) return "0";
    const std::string s = fmt::format("{:.0e}", x);
    const auto e = s.find('e');
    return s.substr(0, e) + "e" + std::to_string(std::atoi(s.c_str() + e + 1));
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string_view kind_name(BucketKind k) {
    switch (k) {
        case BucketKind::type: return "type";
        case BucketKind::other: return "other";
        case BucketKind::indeterminate: return "indeterminate";
    }
    return "type";
}

BucketKind kind_from(const std::string& s) {
    if (s == "type") return BucketKind::type;
    if (s == "other") return BucketKind::other;
    if (s == "indeterminate") return BucketKind::indeterminate;
    throw ConfigError(fmt::format("unknown bucket kind '{}'", s));
}

json to_json(const BalanceEcho& b) {
    json entries = json::array();
    for (const auto& e : b.entries) {
        entries.push_back({{"ideal", e.ideal}, {"dim", e.dim}, {"epsilon", e.epsilon}, {"normal", e.normal}, {"offset", e.offset}});
    }
    return {{"modulus", b.modulus}, {"entries", entries}, {"overall", b.overall}};
}

BalanceEcho balance_from(const json& j) {
    BalanceEcho b;
    b.modulus = j.at("modulus").get<std::string>();
    b.overall = j.at("overall").get<std::string>();
    for (const auto& e : j.at("entries")) {
        b.entries.push_back({e.at("ideal").get<std::string>(), e.at("dim").get<int>(), e.at("epsilon").get<std::string>(),
                             e.at("normal").get<std::vector<Word>>(), e.at("offset").get<Word>()});
    }
    return b;
}

json to_json(const Bucket& b) {
    return {{"kind", kind_name(b.kind)},       {"label", b.label},          {"count", b.count},
            {"frequency", b.frequency},        {"stderr", b.std_error},     {"prediction", b.prediction},
            {"truncation_bound", b.truncation_bound}};
}

Bucket bucket_from(const json& j) {
    return {kind_from(j.at("kind").get<std::string>()), j.at("label").get<std::string>(), j.at("count").get<std::uint64_t>(),
            j.at("frequency").get<double>(), j.at("stderr").get<double>(), j.at("prediction").get<double>(),
            j.at("truncation_bound").get<double>()};
}

json config_json(const ExperimentConfig& cfg) { return json::parse(config_to_json(cfg)); }

template <class F>
auto parse_with(std::string_view text, std::string_view what, F&& body) {
    try {
        return body(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("malformed {} JSON: {}", what, e.what()));
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out << content;
    out.flush();
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, std::string_view ext) {
    return prefix.string() + "." + std::string(ext);
}

template <class Summary>
std::vector<std::filesystem::path> emit_formats(const Summary& s, const std::filesystem::path& prefix,
                                                const std::vector<std::string>& formats, bool svg_supported) {
    std::vector<std::filesystem::path> written;
    for (const auto& f : formats) {
        if (f != "csv" && f != "json" && f != "svg") throw ConfigError(fmt::format("unknown output format '{}'", f));
    }
    for (const auto& f : formats) {
        std::string content;
        if (f == "csv") {
            content = render_csv(s);
        } else if (f == "json") {
            content = render_json(s);
        } else if (svg_supported) {
            if constexpr (std::is_same_v<Summary, EmpiricalSummary>) content = render_svg(s);
        } else {
            continue;
        }
        const auto path = with_suffix(prefix, f);
        write_file(path, content);
        written.push_back(path);
    }
    return written;
}

}  // namespace

std::string render_csv(const EmpiricalSummary& s) {
    std::string out = "n,type,count,frequency,stderr,prediction,truncation_bound\n";
    for (const auto& ns : s.per_n) {
        for (const auto& b : ns.buckets) {
            out += fmt::format("{},{},{},{:.5f},{:.5f},{:.8f},{}\n", ns.n, csv_field(b.label), b.count, b.frequency, b.std_error,
                               b.prediction, compact_bound(b.truncation_bound));
        }
    }
    return out;
}

std::string render_json(const EmpiricalSummary& s) {
    json per_n = json::array();
    for (const auto& ns : s.per_n) {
        json buckets = json::array();
        for (const auto& b : ns.buckets) buckets.push_back(to_json(b));
        per_n.push_back({{"n", ns.n},
                         {"trials", ns.trials},
                         {"buckets", buckets},
                         {"tv_distance", ns.tv_distance},
                         {"chi_square", ns.chi_square},
                         {"chi_square_cells", ns.chi_square_cells},
                         {"chi_square_p_value", ns.chi_square_p_value ? json(*ns.chi_square_p_value) : json(nullptr)},
                         {"partial_sum", ns.partial_sum}});
    }
    json j = {{"kind", "distribution"}, {"config", config_json(s.config)}, {"balance", to_json(s.balance)}, {"per_n", per_n}};
    return j.dump(2) + "\n";
}

EmpiricalSummary parse_summary_json(std::string_view text) {
    return parse_with(text, "summary", [](const json& j) {
        EmpiricalSummary s;
        s.config = parse_config(j.at("config").dump());
        s.balance = balance_from(j.at("balance"));
        for (const auto& e : j.at("per_n")) {
            NSummary ns;
            ns.n = e.at("n").get<int>();
            ns.trials = e.at("trials").get<std::uint64_t>();
            for (const auto& b : e.at("buckets")) ns.buckets.push_back(bucket_from(b));
            ns.tv_distance = e.at("tv_distance").get<double>();
            ns.chi_square = e.at("chi_square").get<double>();
            ns.chi_square_cells = e.at("chi_square_cells").get<int>();
            if (!e.at("chi_square_p_value").is_null()) ns.chi_square_p_value = e.at("chi_square_p_value").get<double>();
            ns.partial_sum = e.at("partial_sum").get<double>();
            s.per_n.push_back(std::move(ns));
        }
        return s;
    });
}

std::string render_svg(const EmpiricalSummary& s) {
    constexpr int kWidth = 900, kPanel = 280, kTop = 40, kLeft = 60, kBars = 12;
    const int height = kTop + static_cast<int>(s.per_n.size()) * kPanel + 20;
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"11\">\n",
        kWidth, height);
    out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\">Empirical frequency (bars) vs prediction (ticks), u = {}</text>\n",
                       kLeft, s.config.u);
    for (std::size_t panel = 0; panel < s.per_n.size(); ++panel) {
        const auto& ns = s.per_n[panel];
        std::vector<const Bucket*> shown;
        for (const auto& b : ns.buckets) {
            if (b.kind == BucketKind::type && static_cast<int>(shown.size()) < kBars) shown.push_back(&b);
        }
        for (const auto& b : ns.buckets) {
            if (b.kind != BucketKind::type) shown.push_back(&b);
        }
        double top = 0.05;
        for (const auto* b : shown) top = std::max({top, b->frequency, b->prediction});
        const int y0 = kTop + static_cast<int>(panel) * kPanel;
        const int plot_h = kPanel - 80;
        const int base = y0 + 20 + plot_h;
        const double slot = static_cast<double>(kWidth - kLeft - 20) / static_cast<double>(shown.size());
        out += fmt::format("<text x=\"{}\" y=\"{}\">n = {}, trials = {}, TV = {:.4f}</text>\n", kLeft, y0 + 12, ns.n, ns.trials,
                           ns.tv_distance);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", kLeft, base, kWidth - 20, base);
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3f}</text>\n", kLeft - 4, y0 + 24, top);
        for (std::size_t i = 0; i < shown.size(); ++i) {
            const auto& b = *shown[i];
            const double x = kLeft + slot * static_cast<double>(i);
            const double h = plot_h * b.frequency / top;
            const double ph = plot_h * b.prediction / top;
            out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"#4a7ab5\"/>\n", x + slot * 0.15,
                               base - h, slot * 0.7, h);
            out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n",
                               x + slot * 0.05, base - ph, x + slot * 0.95, base - ph);
            out += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x + slot / 2, base + 14,
                               xml_escape(b.label));
        }
    }
    return out + "</svg>\n";
}

std::string render_csv(const MomentSummary& s) {
    std::string out = "n,target,trials,estimate,stderr,prediction,indeterminate\n";
    for (const auto& r : s.rows) {
        out += fmt::format("{},{},{},{:.6f},{:.6f},{:.8f},{}\n", r.n, csv_field(r.target), r.trials, r.estimate, r.std_error,
                           r.prediction, r.indeterminate);
    }
    return out;
}

std::string render_json(const MomentSummary& s) {
    json rows = json::array();
    for (const auto& r : s.rows) {
        rows.push_back({{"n", r.n},
                        {"target", r.target},
                        {"trials", r.trials},
                        {"estimate", r.estimate},
                        {"stderr", r.std_error},
                        {"prediction", r.prediction},
                        {"indeterminate", r.indeterminate}});
    }
    json j = {{"kind", "moments"}, {"config", config_json(s.config)}, {"balance", to_json(s.balance)}, {"rows", rows}};
    return j.dump(2) + "\n";
}

MomentSummary parse_moment_json(std::string_view text) {
    return parse_with(text, "moment summary", [](const json& j) {
        MomentSummary s;
        s.config = parse_config(j.at("config").dump());
        s.balance = balance_from(j.at("balance"));
        for (const auto& r : j.at("rows")) {
            s.rows.push_back({r.at("n").get<int>(), r.at("target").get<std::string>(), r.at("trials").get<std::uint64_t>(),
                              r.at("estimate").get<double>(), r.at("stderr").get<double>(), r.at("prediction").get<double>(),
                              r.at("indeterminate").get<std::uint64_t>()});
        }
        return s;
    });
}

std::string render_csv(const GaloisReport& s) {
    std::string out = "n,bucket,count,frequency,prediction\n";
    for (const auto& r : s.rows) {
        out += fmt::format("{},conjugate-equal,{},{:.5f},\n", r.n, r.conjugate_equal, r.equal_fraction);
        out += fmt::format("{},indeterminate,{},{:.5f},\n", r.n, r.indeterminate,
                           static_cast<double>(r.indeterminate) / static_cast<double>(r.trials));
        for (const auto& b : r.asymmetric) {
            out += fmt::format("{},{},{},{:.5f},{:.8f}\n", r.n, csv_field(b.label), b.count, b.frequency, b.prediction);
        }
    }
    return out;
}

std::string render_json(const GaloisReport& s) {
    json rows = json::array();
    for (const auto& r : s.rows) {
        json asym = json::array();
        for (const auto& b : r.asymmetric) asym.push_back(to_json(b));
        rows.push_back({{"n", r.n},
                        {"trials", r.trials},
                        {"conjugate_equal", r.conjugate_equal},
                        {"equal_fraction", r.equal_fraction},
                        {"indeterminate", r.indeterminate},
                        {"asymmetric", asym},
                        {"asymmetric_frequency", r.asymmetric_frequency}});
    }
    json j = {{"kind", "galois"},
              {"config", config_json(s.config)},
              {"balance", to_json(s.balance)},
              {"prime", s.prime},
              {"conjugate", s.conjugate},
              {"invariant_support", s.invariant_support},
              {"predicted_asymmetric_mass", s.predicted_asymmetric_mass},
              {"rows", rows}};
    return j.dump(2) + "\n";
}

GaloisReport parse_galois_json(std::string_view text) {
    return parse_with(text, "Galois report", [](const json& j) {
        GaloisReport s;
        s.config = parse_config(j.at("config").dump());
        s.balance = balance_from(j.at("balance"));
        s.prime = j.at("prime").get<std::string>();
        s.conjugate = j.at("conjugate").get<std::string>();
        s.invariant_support = j.at("invariant_support").get<bool>();
        s.predicted_asymmetric_mass = j.at("predicted_asymmetric_mass").get<double>();
        for (const auto& r : j.at("rows")) {
            GaloisRow row;
            row.n = r.at("n").get<int>();
            row.trials = r.at("trials").get<std::uint64_t>();
            row.conjugate_equal = r.at("conjugate_equal").get<std::uint64_t>();
            row.equal_fraction = r.at("equal_fraction").get<double>();
            row.indeterminate = r.at("indeterminate").get<std::uint64_t>();
            for (const auto& b : r.at("asymmetric")) row.asymmetric.push_back(bucket_from(b));
            row.asymmetric_frequency = r.at("asymmetric_frequency").get<double>();
            s.rows.push_back(std::move(row));
        }
        return s;
    });
}

std::vector<std::filesystem::path> emit_report(const EmpiricalSummary& s, const std::filesystem::path& prefix,
                                               const std::vector<std::string>& formats) {
    return emit_formats(s, prefix, formats, true);
}

std::vector<std::filesystem::path> emit_report(const MomentSummary& s, const std::filesystem::path& prefix,
                                               const std::vector<std::string>& formats) {
    return emit_formats(s, prefix, formats, false);
}

std::vector<std::filesystem::path> emit_report(const GaloisReport& s, const std::filesystem::path& prefix,
                                               const std::vector<std::string>& formats) {
    return emit_formats(s, prefix, formats, false);
}

}  // namespace cokernel
