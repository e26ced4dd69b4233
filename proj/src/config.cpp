#include "fran/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "fran/errors.hpp"

namespace fran::harness {

namespace {

using cache::ContentCatalog;
using cache::Tier;

struct CatalogFields {
    double n, sigma_d, sigma_f, c_d, c_f;
};

CatalogFields fields_of(const ContentCatalog& c) {
    return {static_cast<double>(c.content_count()), c.zipf_exponent(Tier::D2D), c.zipf_exponent(Tier::Fap),
            static_cast<double>(c.cache_size(Tier::D2D)), static_cast<double>(c.cache_size(Tier::Fap))};
}

std::size_t as_count(double v, const char* what) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
        throw DomainError(std::string(what) + " must be a positive integer");
    }
    return static_cast<std::size_t>(v);
}

ContentCatalog build_catalog(const CatalogFields& f) {
    return ContentCatalog(as_count(f.n, "content_count"), f.sigma_d, f.sigma_f, as_count(f.c_d, "d2d_cache_size"),
                          as_count(f.c_f, "fap_cache_size"));
}

ParameterKey linear(std::string key, double NetworkParams::*field) {
    return {std::move(key), "network", [field](NetworkParams& p, double v) { p.*field = v; },
            [field](const NetworkParams& p) { return p.*field; }};
}

ParameterKey decibel(std::string key, double NetworkParams::*field) {
    return {std::move(key), "network", [field](NetworkParams& p, double v) { p.*field = db_to_linear(v); },
            [field](const NetworkParams& p) { return linear_to_db(p.*field); }};
}

ParameterKey catalog_key(std::string key, double CatalogFields::*field) {
    return {std::move(key), "catalog",
            [field](NetworkParams& p, double v) {
                CatalogFields f = fields_of(p.catalog);
                f.*field = v;
                p.catalog = build_catalog(f);
            },
            [field](const NetworkParams& p) { return fields_of(p.catalog).*field; }};
}

// Keys sharing a field: at most one may appear in a config.
std::string field_of(const std::string& key) {
    for (const char* suffix : {"_dbm", "_db", "_mw"}) {
        const std::string s = suffix;
        if (key.size() > s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0) {
            return key.substr(0, key.size() - s.size());
        }
    }
    return key;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    std::size_t line;
};

class Parser {
public:
    explicit Parser(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& key, std::size_t line, const std::string& msg) const {
        std::string where = origin_;
        if (line) where += ":" + std::to_string(line);
        throw ConfigError(where + ": " + (key.empty() ? "" : "key '" + key + "': ") + msg, key, line);
    }

    double number(const std::string& key, const Entry& e) const {
        double v = 0.0;
        const char* end = e.value.data() + e.value.size();
        auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(key, e.line, "expected a number, got '" + e.value + "'");
        return v;
    }

    std::uint64_t unsigned_integer(const std::string& key, const Entry& e) const {
        std::uint64_t v = 0;
        const char* end = e.value.data() + e.value.size();
        auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
        if (ec != std::errc() || ptr != end) fail(key, e.line, "expected a non-negative integer, got '" + e.value + "'");
        return v;
    }

    std::vector<std::string> list(const Entry& e) const {
        std::vector<std::string> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    std::vector<double> numbers(const std::string& key, const Entry& e) const {
        std::vector<double> out;
        for (const auto& item : list(e)) out.push_back(number(key, {item, e.line}));
        if (out.empty()) fail(key, e.line, "expected a comma-separated list of numbers");
        return out;
    }

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
};

sim::Mode parse_mode(const std::string& s, const Parser& parser, std::size_t line) {
    if (s == "d2d") return sim::Mode::D2D;
    if (s == "nearest_fap") return sim::Mode::NearestFap;
    if (s == "coordination") return sim::Mode::Coordination;
    parser.fail("modes", line, "unknown mode '" + s + "' (expected d2d, nearest_fap, coordination)");
}

}  // namespace

const std::vector<ParameterKey>& parameter_keys() {
    static const std::vector<ParameterKey> keys = [] {
        std::vector<ParameterKey> k;
        k.push_back(linear("fap_density_per_m2", &NetworkParams::fap_density));
        k.push_back(linear("user_density_per_m2", &NetworkParams::user_density));
        k.push_back(linear("d2d_support_probability", &NetworkParams::d2d_support_probability));
        k.push_back(decibel("d2d_power_dbm", &NetworkParams::d2d_power));
        k.push_back(linear("d2d_power_mw", &NetworkParams::d2d_power));
        k.push_back(decibel("fap_power_dbm", &NetworkParams::fap_power));
        k.push_back(linear("fap_power_mw", &NetworkParams::fap_power));
        k.push_back(linear("d2d_pathloss_exponent", &NetworkParams::d2d_pathloss_exponent));
        k.push_back(linear("fap_pathloss_exponent", &NetworkParams::fap_pathloss_exponent));
        k.push_back(decibel("d2d_sir_threshold_db", &NetworkParams::d2d_sir_threshold));
        k.push_back(linear("d2d_sir_threshold", &NetworkParams::d2d_sir_threshold));
        k.push_back(decibel("fap_sir_threshold_db", &NetworkParams::fap_sir_threshold));
        k.push_back(linear("fap_sir_threshold", &NetworkParams::fap_sir_threshold));
        k.push_back(linear("d2d_distance_threshold_m", &NetworkParams::d2d_distance_threshold));
        k.push_back(linear("cluster_radius_m", &NetworkParams::cluster_radius));
        k.push_back(linear("d2d_link_distance_m", &NetworkParams::d2d_link_distance));
        k.push_back(catalog_key("content_count", &CatalogFields::n));
        k.push_back(catalog_key("d2d_zipf_exponent", &CatalogFields::sigma_d));
        k.push_back(catalog_key("fap_zipf_exponent", &CatalogFields::sigma_f));
        k.push_back(catalog_key("d2d_cache_size", &CatalogFields::c_d));
        k.push_back(catalog_key("fap_cache_size", &CatalogFields::c_f));
        return k;
    }();
    return keys;
}

const ParameterKey* find_parameter(std::string_view key) {
    for (const auto& k : parameter_keys()) {
        if (k.key == key) return &k;
    }
    return nullptr;
}

void assign_parameter(NetworkParams& p, const std::string& key, double value) {
    const ParameterKey* k = find_parameter(key);
    if (!k) throw ConfigError("unknown parameter '" + key + "'", key);
    try {
        k->assign(p, value);
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError("parameter '" + key + "' = " + format_double(value) + ": " + e.what(), key);
    }
}

const std::vector<std::string>& required_keys() {
    static const std::vector<std::string> keys{"id", "swept_parameter", "sweep_values"};
    return keys;
}

ExperimentSpec parse_config_text(std::string_view text, const std::string& origin) {
    Parser parser(origin);
    static const std::map<std::string, std::vector<std::string>> section_keys{
        {"experiment",
         {"id", "swept_parameter", "sweep_values", "series_parameter", "series_values", "metric", "modes",
          "evaluators", "out_csv", "out_svg"}},
        {"simulation", {"trials", "seed", "window_radius_m", "placement", "threads"}},
    };

    std::map<std::string, Entry> entries;
    std::map<std::string, std::string> field_owner;  // network field -> key that set it
    std::string section;
    std::size_t line_no = 0;
    std::string_view rest = text;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view raw = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty() || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') parser.fail("", line_no, "malformed section header '" + line + "'");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "experiment" && section != "network" && section != "catalog" && section != "simulation") {
                parser.fail("", line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parser.fail("", line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section.empty()) parser.fail(key, line_no, "key outside any section");
        bool known = false;
        if (section == "network" || section == "catalog") {
            const ParameterKey* k = find_parameter(key);
            known = k && k->section == section;
            if (known) {
                const std::string field = field_of(key);
                auto [it, fresh] = field_owner.emplace(field, key);
                if (!fresh && it->second != key) parser.fail(key, line_no, "conflicts with '" + it->second + "'");
            }
        } else {
            const auto& allowed = section_keys.at(section);
            known = std::find(allowed.begin(), allowed.end(), key) != allowed.end();
        }
        if (!known) parser.fail(key, line_no, "unknown key in [" + section + "]");
        if (value.empty()) parser.fail(key, line_no, "empty value");
        if (!entries.emplace(key, Entry{value, line_no}).second) parser.fail(key, line_no, "duplicate key");
    }

    std::vector<std::string> missing;
    for (const auto& k : required_keys()) {
        if (!entries.count(k)) missing.push_back(k);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
        parser.fail(missing.front(), 0, "missing required keys: " + list);
    }

    ExperimentSpec spec;
    auto get = [&](const std::string& k) -> const Entry* {
        auto it = entries.find(k);
        return it == entries.end() ? nullptr : &it->second;
    };

    // network parameters, then the catalog in one step
    CatalogFields catalog = fields_of(spec.base.catalog);
    std::size_t catalog_line = 0;
    for (const auto& k : parameter_keys()) {
        const Entry* e = get(k.key);
        if (!e) continue;
        const double v = parser.number(k.key, *e);
        if (k.section == "catalog") {
            if (k.key == "content_count") catalog.n = v;
            else if (k.key == "d2d_zipf_exponent") catalog.sigma_d = v;
            else if (k.key == "fap_zipf_exponent") catalog.sigma_f = v;
            else if (k.key == "d2d_cache_size") catalog.c_d = v;
            else catalog.c_f = v;
            catalog_line = std::max(catalog_line, e->line);
            continue;
        }
        k.assign(spec.base, v);
        try {
            spec.base.validate();
        } catch (const DomainError& err) {
            parser.fail(k.key, e->line, err.what());
        }
    }
    try {
        spec.base.catalog = build_catalog(catalog);
    } catch (const DomainError& err) {
        parser.fail("", catalog_line, std::string("invalid catalog: ") + err.what());
    }

    spec.id = get("id")->value;
    spec.swept_parameter = get("swept_parameter")->value;
    if (!find_parameter(spec.swept_parameter)) {
        parser.fail("swept_parameter", get("swept_parameter")->line,
                    "'" + spec.swept_parameter + "' is not a parameter key");
    }
    spec.sweep_values = parser.numbers("sweep_values", *get("sweep_values"));
    if (const Entry* e = get("series_parameter")) {
        spec.series_parameter = e->value;
        if (!find_parameter(spec.series_parameter)) {
            parser.fail("series_parameter", e->line, "'" + spec.series_parameter + "' is not a parameter key");
        }
        const Entry* v = get("series_values");
        if (!v) parser.fail("series_values", e->line, "series_parameter needs series_values");
        spec.series_values = parser.numbers("series_values", *v);
    } else if (const Entry* v = get("series_values")) {
        parser.fail("series_values", v->line, "series_values needs series_parameter");
    }
    if (const Entry* e = get("metric")) {
        if (e->value == "rate") spec.metric = Metric::Rate;
        else if (e->value == "coverage") spec.metric = Metric::Coverage;
        else if (e->value == "mode_share") spec.metric = Metric::ModeShare;
        else parser.fail("metric", e->line, "expected rate, coverage or mode_share");
    }
    if (const Entry* e = get("modes")) {
        spec.modes.clear();
        for (const auto& m : parser.list(*e)) {
            const sim::Mode mode = parse_mode(m, parser, e->line);
            if (std::find(spec.modes.begin(), spec.modes.end(), mode) != spec.modes.end()) {
                parser.fail("modes", e->line, "mode '" + m + "' listed twice");
            }
            spec.modes.push_back(mode);
        }
    }
    if (const Entry* e = get("evaluators")) {
        spec.analytic = spec.monte_carlo = false;
        for (const auto& s : parser.list(*e)) {
            if (s == "analytic") spec.analytic = true;
            else if (s == "monte_carlo") spec.monte_carlo = true;
            else parser.fail("evaluators", e->line, "unknown evaluator '" + s + "' (expected analytic, monte_carlo)");
        }
    }
    if (const Entry* e = get("out_csv")) spec.out_csv = e->value;
    if (const Entry* e = get("out_svg")) spec.out_svg = e->value;
    if (const Entry* e = get("trials")) spec.trials = parser.unsigned_integer("trials", *e);
    if (const Entry* e = get("seed")) spec.seed = parser.unsigned_integer("seed", *e);
    if (const Entry* e = get("window_radius_m")) spec.simulation.window_radius = parser.number("window_radius_m", *e);
    if (const Entry* e = get("placement")) {
        if (e->value == "thinning") spec.simulation.placement = sim::Placement::IndependentThinning;
        else if (e->value == "identical") spec.simulation.placement = sim::Placement::IdenticalCache;
        else parser.fail("placement", e->line, "expected thinning or identical");
    }
    if (const Entry* e = get("threads")) {
        const auto t = parser.unsigned_integer("threads", *e);
        if (t > 4096) parser.fail("threads", e->line, "too many threads");
        spec.simulation.threads = static_cast<unsigned>(t);
    }

    try {
        spec.validate();
    } catch (const ConfigError& err) {
        const Entry* e = get(err.key());
        parser.fail(err.key(), e ? e->line : 0, err.what());
    }
    return spec;
}

ExperimentSpec parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading config file '" + path + "'");
    return parse_config_text(ss.str(), path);
}

std::string serialize_config(const ExperimentSpec& spec) {
    std::ostringstream out;
    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (double x : v) s += (s.empty() ? "" : ", ") + format_double(x);
        return s;
    };
    out << "[experiment]\n";
    out << "id = " << spec.id << "\n";
    out << "swept_parameter = " << spec.swept_parameter << "\n";
    out << "sweep_values = " << join(spec.sweep_values) << "\n";
    if (!spec.series_parameter.empty()) {
        out << "series_parameter = " << spec.series_parameter << "\n";
        out << "series_values = " << join(spec.series_values) << "\n";
    }
    out << "metric = " << to_string(spec.metric) << "\n";
    std::string modes;
    for (auto m : spec.modes) modes += (modes.empty() ? "" : ", ") + std::string(sim::to_string(m));
    out << "modes = " << modes << "\n";
    out << "evaluators = "
        << (spec.analytic && spec.monte_carlo ? "analytic, monte_carlo" : spec.analytic ? "analytic" : "monte_carlo")
        << "\n";
    if (!spec.out_csv.empty()) out << "out_csv = " << spec.out_csv << "\n";
    if (!spec.out_svg.empty()) out << "out_svg = " << spec.out_svg << "\n";

    // linear keys only, so values survive the round trip bit for bit
    for (const char* section : {"network", "catalog"}) {
        out << "\n[" << section << "]\n";
        for (const auto& k : parameter_keys()) {
            if (k.section != section || k.key.ends_with("_db") || k.key.ends_with("_dbm")) continue;
            out << k.key << " = " << format_double(k.read(spec.base)) << "\n";
        }
    }
    out << "\n[simulation]\n";
    if (spec.trials) out << "trials = " << spec.trials << "\n";
    out << "seed = " << spec.seed << "\n";
    out << "window_radius_m = " << format_double(spec.simulation.window_radius) << "\n";
    out << "placement = "
        << (spec.simulation.placement == sim::Placement::IdenticalCache ? "identical" : "thinning") << "\n";
    out << "threads = " << spec.simulation.threads << "\n";
    return out.str();
}

}  // namespace fran::harness
