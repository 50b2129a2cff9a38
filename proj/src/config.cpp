#include "netspect/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "netspect/dates.hpp"
#include "netspect/errors.hpp"

namespace netspect {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("config: bad boolean for " + key + ": '" + v + "'");
}

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    bool execution_only = false;
};

template <class T>
Field make_field(T RunConfig::* member, bool execution_only = false) {
    if constexpr (std::is_same_v<T, std::string>) {
        return {[member](RunConfig& c, const std::string& v) { c.*member = v; },
                [member](const RunConfig& c) { return c.*member; }, execution_only};
    } else if constexpr (std::is_same_v<T, bool>) {
        return {[member](RunConfig& c, const std::string& v) { c.*member = parse_bool(v, ""); },
                [member](const RunConfig& c) { return c.*member ? "true" : "false"; },
                execution_only};
    } else if constexpr (std::is_same_v<T, int>) {
        return {[member](RunConfig& c, const std::string& v) { c.*member = std::stoi(v); },
                [member](const RunConfig& c) { return std::to_string(c.*member); },
                execution_only};
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        return {[member](RunConfig& c, const std::string& v) { c.*member = std::stoull(v); },
                [member](const RunConfig& c) { return std::to_string(c.*member); },
                execution_only};
    } else {
        return {[member](RunConfig& c, const std::string& v) { c.*member = std::stod(v); },
                [member](const RunConfig& c) { return fmt_double(c.*member); }, execution_only};
    }
}

const std::map<std::string, Field>& field_table() {
    static const std::map<std::string, Field> table = {
        {"prices", make_field(&RunConfig::prices_path)},
        {"sectors", make_field(&RunConfig::sectors_path)},
        {"events", make_field(&RunConfig::events_path)},
        {"controls", make_field(&RunConfig::controls_path)},
        {"output_dir", make_field(&RunConfig::output_dir, true)},
        {"start_date", make_field(&RunConfig::start_date)},
        {"end_date", make_field(&RunConfig::end_date)},
        {"k", make_field(&RunConfig::k)},
        {"k_min", make_field(&RunConfig::k_min)},
        {"k_max", make_field(&RunConfig::k_max)},
        {"clean_policy", make_field(&RunConfig::clean_policy)},
        {"clean_bound", make_field(&RunConfig::clean_bound)},
        {"factor_tickers", make_field(&RunConfig::factor_tickers)},
        {"min_beta_obs", make_field(&RunConfig::min_beta_obs)},
        {"rolling_betas", make_field(&RunConfig::rolling_betas)},
        {"rolling_window", make_field(&RunConfig::rolling_window)},
        {"theta_intra", make_field(&RunConfig::theta_intra)},
        {"theta_inter", make_field(&RunConfig::theta_inter)},
        {"absolute_threshold", make_field(&RunConfig::absolute_threshold)},
        {"min_stock_obs", make_field(&RunConfig::min_stock_obs)},
        {"min_pair_obs", make_field(&RunConfig::min_pair_obs)},
        {"min_window_stocks", make_field(&RunConfig::min_window_stocks)},
        {"clique_min", make_field(&RunConfig::clique_min)},
        {"clique_max", make_field(&RunConfig::clique_max)},
        {"clique_cap", make_field(&RunConfig::clique_cap)},
        {"clique_budget", make_field(&RunConfig::clique_budget)},
        {"wall_clock_budget", make_field(&RunConfig::wall_clock_budget)},
        {"wall_clock_seconds", make_field(&RunConfig::wall_clock_seconds)},
        {"split_oversize", make_field(&RunConfig::split_oversize)},
        {"measure", make_field(&RunConfig::measure)},
        {"emit_graph_lambda2", make_field(&RunConfig::emit_graph_lambda2)},
        {"inference", make_field(&RunConfig::inference)},
        {"strict_exclusion", make_field(&RunConfig::strict_exclusion)},
        {"include_controls", make_field(&RunConfig::include_controls)},
        {"threads", make_field(&RunConfig::threads, true)},
        {"dump_windows", make_field(&RunConfig::dump_windows, true)},
        {"dump_spectra", make_field(&RunConfig::dump_spectra, true)},
        {"seed", make_field(&RunConfig::seed)},
        {"synth_stocks", make_field(&RunConfig::synth_stocks)},
        {"synth_sectors", make_field(&RunConfig::synth_sectors)},
        {"synth_days", make_field(&RunConfig::synth_days)},
        {"synth_events", make_field(&RunConfig::synth_events)},
        {"synth_event_spacing", make_field(&RunConfig::synth_event_spacing)},
        {"synth_rho_in", make_field(&RunConfig::synth_rho_in)},
        {"synth_rho_out", make_field(&RunConfig::synth_rho_out)},
        {"synth_delta", make_field(&RunConfig::synth_delta)},
        {"synth_break_horizon", make_field(&RunConfig::synth_break_horizon)},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    const auto in_k_range = [](int v) { return v >= 5 && v <= 20; };
    if (!in_k_range(k) || !in_k_range(k_min) || !in_k_range(k_max) || k_min > k_max)
        throw Error("config: horizons must satisfy 5 <= k <= 20");
    if (!(theta_intra > 0 && theta_intra <= theta_inter && theta_inter < 1))
        throw Error("config: need 0 < theta_intra <= theta_inter < 1");
    if (clean_policy != "winsorize" && clean_policy != "drop")
        throw Error("config: clean_policy must be winsorize|drop");
    if (!(clean_bound > 0)) throw Error("config: clean_bound must be > 0");
    if (measure != "hypergraph" && measure != "graph")
        throw Error("config: measure must be hypergraph|graph");
    if (inference != "classical" && inference != "robust")
        throw Error("config: inference must be classical|robust");
    if (clique_min < 2 || clique_max < clique_min)
        throw Error("config: bad clique size window");
    if (!start_date.empty() && !is_valid_date(start_date))
        throw Error("config: bad start_date");
    if (!end_date.empty() && !is_valid_date(end_date)) throw Error("config: bad end_date");
    if (synth_sectors < 1 || synth_stocks < synth_sectors)
        throw Error("config: bad synth dimensions");
}

PipelineConfig RunConfig::pipeline(int horizon) const {
    PipelineConfig p;
    p.k = horizon;
    p.theta_intra = theta_intra;
    p.theta_inter = theta_inter;
    p.absolute_threshold = absolute_threshold;
    p.min_stock_obs = min_stock_obs;
    p.min_pair_obs = min_pair_obs;
    p.min_window_stocks = min_window_stocks;
    p.cliques.min_size = clique_min;
    p.cliques.max_size = clique_max;
    p.cliques.max_cliques = clique_cap <= 0 ? 0 : static_cast<std::size_t>(clique_cap);
    p.cliques.step_budget = clique_budget;
    p.cliques.wall_clock = wall_clock_budget;
    p.cliques.wall_clock_seconds = wall_clock_seconds;
    p.cliques.split_oversize = split_oversize;
    p.measure = measure_enum();
    p.emit_graph_lambda2 = emit_graph_lambda2;
    p.dump_spectra = dump_spectra;
    p.threads = threads;
    return p;
}

ResidualizeOptions RunConfig::residualize_options() const {
    ResidualizeOptions o;
    o.min_beta_obs = min_beta_obs;
    o.rolling = rolling_betas;
    o.rolling_window = rolling_window;
    o.threads = threads;
    return o;
}

std::vector<std::string> RunConfig::factor_ticker_list() const {
    std::vector<std::string> out;
    std::stringstream ss(factor_tickers);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

CleanPolicy RunConfig::clean_policy_enum() const {
    return clean_policy == "drop" ? CleanPolicy::drop : CleanPolicy::winsorize;
}

Measure RunConfig::measure_enum() const {
    return measure == "graph" ? Measure::graph : Measure::hypergraph;
}

Inference RunConfig::inference_enum() const {
    return inference == "robust" ? Inference::hc1 : Inference::classical;
}

DesignOptions RunConfig::design_options() const {
    DesignOptions o;
    o.include_controls = include_controls;
    o.strict_exclusion = strict_exclusion;
    return o;
}

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = field_table();
    const auto it = table.find(key);
    if (it == table.end()) throw Error("config: unknown key '" + key + "'");
    try {
        it->second.set(cfg, value);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("config: bad value for " + key + ": '" + value + "'");
    }
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config: expected key = value at line " + std::to_string(lineno));
        set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw Error("override must be key=value: '" + ov + "'");
        set_config_key(cfg, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
}

std::string serialize_config(const RunConfig& cfg, bool include_execution) {
    std::string out;
    for (const auto& [key, field] : field_table()) {
        if (!include_execution && field.execution_only) continue;
        out += key + " = " + field.get(cfg) + "\n";
    }
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string s = serialize_config(cfg, false);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace netspect
