#include "hfentropy/config.hpp"

#include <fstream>
#include <algorithm>
#include <json.hpp>
#include <set>
#include <sstream>

#include "hfentropy/error.hpp"

namespace hfentropy::config {

namespace {

using nlohmann::json;
using pipeline::AssetSource;
using pipeline::RunConfig;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InputError(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw InputError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError("key '" + std::string(key) + "' in " + where + " has the wrong type");
    }
}

int parse_clock(const std::string& text) {
    int h = 0;
    int m = 0;
    char colon = 0;
    std::istringstream in(text);
    if (!(in >> h >> colon >> m) || colon != ':' || !in.eof() || h < 0 || h > 23 || m < 0 || m > 59) {
        throw InputError("expected HH:MM, got '" + text + "'");
    }
    return h * 60 + m;
}

std::string format_clock(int minute) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
    return buf;
}

ProcessSpec parse_process(const json& j) {
    const std::string where = "process";
    check_keys(j, {"type", "phi", "theta", "ar", "ma"}, where);
    std::string type;
    read(j, "type", type, where);
    if (type == "white-noise") return WhiteNoise{};
    if (type == "ar1") {
        Ar1 p;
        read(j, "phi", p.phi, where);
        return p;
    }
    if (type == "ma1") {
        Ma1 p;
        read(j, "theta", p.theta, where);
        return p;
    }
    if (type == "arma") {
        ArmaProcess p;
        read(j, "ar", p.ar, where);
        read(j, "ma", p.ma, where);
        return p;
    }
    throw InputError("unknown process type '" + type + "' (white-noise, ar1, ma1, arma)");
}

json process_to_json(const ProcessSpec& process) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WhiteNoise>) {
                return {{"type", "white-noise"}};
            } else if constexpr (std::is_same_v<T, Ar1>) {
                return {{"type", "ar1"}, {"phi", p.phi}};
            } else if constexpr (std::is_same_v<T, Ma1>) {
                return {{"type", "ma1"}, {"theta", p.theta}};
            } else {
                return {{"type", "arma"}, {"ar", p.ar}, {"ma", p.ma}};
            }
        },
        process);
}

ingest::SyntheticSpec synthetic_from_json(const json& j, std::size_t profile_slots) {
    const std::string where = "synthetic";
    check_keys(j, {"process", "innovation_sd", "pricing_error_sd", "volatility", "intraday_profile", "tick",
                   "initial_price", "seed"},
               where);
    ingest::SyntheticSpec spec;
    if (j.contains("process")) spec.process = parse_process(j.at("process"));
    read(j, "innovation_sd", spec.innovation_sd, where);
    read(j, "pricing_error_sd", spec.pricing_error_sd, where);
    read(j, "initial_price", spec.initial_price, where);
    read(j, "seed", spec.seed, where);
    if (j.contains("tick") && !j.at("tick").is_null()) {
        double tick = 0.0;
        read(j, "tick", tick, where);
        spec.tick = tick;
    }
    if (j.contains("volatility") && !j.at("volatility").is_null()) {
        const auto& v = j.at("volatility");
        check_keys(v, {"persistence", "vol_of_vol", "day_factors"}, "volatility");
        ingest::VolatilityRegime regime;
        read(v, "persistence", regime.persistence, "volatility");
        read(v, "vol_of_vol", regime.vol_of_vol, "volatility");
        read(v, "day_factors", regime.day_factors, "volatility");
        spec.volatility = regime;
    }
    if (j.contains("intraday_profile")) {
        const auto& p = j.at("intraday_profile");
        if (p.is_array()) {
            read(j, "intraday_profile", spec.intraday_profile, where);
        } else {
            check_keys(p, {"u_shape"}, "intraday_profile");
            double amplitude = 0.0;
            read(p, "u_shape", amplitude, "intraday_profile");
            spec.intraday_profile = ingest::u_shaped_profile(profile_slots, amplitude);
        }
    }
    return spec;
}

json synthetic_to_json(const ingest::SyntheticSpec& spec) {
    json j;
    j["process"] = process_to_json(spec.process);
    j["innovation_sd"] = spec.innovation_sd;
    j["pricing_error_sd"] = spec.pricing_error_sd;
    j["initial_price"] = spec.initial_price;
    j["seed"] = spec.seed;
    j["tick"] = spec.tick ? json(*spec.tick) : json(nullptr);
    if (spec.volatility) {
        j["volatility"] = {{"persistence", spec.volatility->persistence},
                           {"vol_of_vol", spec.volatility->vol_of_vol},
                           {"day_factors", spec.volatility->day_factors}};
    } else {
        j["volatility"] = nullptr;
    }
    j["intraday_profile"] = spec.intraday_profile;
    return j;
}

RunConfig from_json(const json& j, const std::filesystem::path& base_dir) {
    const std::string where = "configuration";
    check_keys(j,
               {"assets", "session", "frequency_minutes", "pipeline", "binary_orders", "ternary_orders", "estimator",
                "remove_outliers", "outliers", "split_threshold", "alpha_1min", "alpha_5min", "max_order_binary",
                "max_order_ternary", "mc_replicas", "master_seed", "output_dir", "workers", "dump_bic_grid",
                "export_symbols"},
               where);
    RunConfig c;
    if (j.contains("session")) {
        const auto& s = j.at("session");
        check_keys(s, {"open", "close"}, "session");
        std::string open = format_clock(c.session.open_minute);
        std::string close = format_clock(c.session.close_minute);
        read(s, "open", open, "session");
        read(s, "close", close, "session");
        c.session.open_minute = parse_clock(open);
        c.session.close_minute = parse_clock(close);
    }
    read(j, "frequency_minutes", c.frequency_minutes, where);
    if (j.contains("pipeline")) {
        std::string name;
        read(j, "pipeline", name, where);
        c.pipeline = pipeline::pipeline_from_string(name);
    }
    read(j, "binary_orders", c.binary_orders, where);
    read(j, "ternary_orders", c.ternary_orders, where);
    if (j.contains("estimator")) {
        std::string name;
        read(j, "estimator", name, where);
        c.estimator = entropy::estimator_from_string(name);
    }
    read(j, "remove_outliers", c.remove_outliers, where);
    if (j.contains("outliers")) {
        const auto& o = j.at("outliers");
        check_keys(o, {"k", "delta", "c", "gamma"}, "outliers");
        read(o, "k", c.outliers.k, "outliers");
        read(o, "delta", c.outliers.delta, "outliers");
        read(o, "c", c.outliers.c, "outliers");
        read(o, "gamma", c.outliers.gamma, "outliers");
    }
    read(j, "split_threshold", c.split_threshold, where);
    read(j, "alpha_1min", c.alpha_1min, where);
    read(j, "alpha_5min", c.alpha_5min, where);
    read(j, "max_order_binary", c.max_order_binary, where);
    read(j, "max_order_ternary", c.max_order_ternary, where);
    read(j, "mc_replicas", c.mc_replicas, where);
    read(j, "master_seed", c.master_seed, where);
    read(j, "workers", c.workers, where);
    read(j, "dump_bic_grid", c.dump_bic_grid, where);
    read(j, "export_symbols", c.export_symbols, where);
    if (j.contains("output_dir")) {
        std::string dir;
        read(j, "output_dir", dir, where);
        c.output_dir = dir;
    }
    if (j.contains("assets")) {
        const auto& assets = j.at("assets");
        if (!assets.is_array()) throw InputError("assets must be an array");
        for (const auto& a : assets) {
            check_keys(a, {"id", "csv", "synthetic", "n_days", "minutes_per_day"}, "asset");
            AssetSource src;
            read(a, "id", src.id, "asset");
            read(a, "n_days", src.n_days, "asset");
            read(a, "minutes_per_day", src.minutes_per_day, "asset");
            if (a.contains("csv")) {
                std::string path;
                read(a, "csv", path, "asset");
                std::filesystem::path p(path);
                if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
                src.csv = p;
                if (src.id.empty()) src.id = p.stem().string();
            }
            if (a.contains("synthetic")) {
                const auto slots = static_cast<std::size_t>(std::max(src.minutes_per_day - 1, 0));
                src.synthetic = synthetic_from_json(a.at("synthetic"), slots);
            }
            c.assets.push_back(std::move(src));
        }
    }
    return c;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto end = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(),
                                                                  text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
        throw ParseError("invalid JSON: " + std::string(e.what()), line);
    }
}

}  // namespace

RunConfig parse(const std::string& text, const std::filesystem::path& base_dir) {
    return from_json(parse_text(text), base_dir);
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.parent_path());
}

std::string to_json(const RunConfig& c) {
    json j;
    j["session"] = {{"open", format_clock(c.session.open_minute)}, {"close", format_clock(c.session.close_minute)}};
    j["frequency_minutes"] = c.frequency_minutes;
    j["pipeline"] = pipeline::to_string(c.pipeline);
    j["binary_orders"] = c.binary_orders;
    j["ternary_orders"] = c.ternary_orders;
    j["estimator"] = entropy::to_string(c.estimator);
    j["remove_outliers"] = c.remove_outliers;
    j["outliers"] = {{"k", c.outliers.k}, {"delta", c.outliers.delta}, {"c", c.outliers.c}, {"gamma", c.outliers.gamma}};
    j["split_threshold"] = c.split_threshold;
    j["alpha_1min"] = c.alpha_1min;
    j["alpha_5min"] = c.alpha_5min;
    j["max_order_binary"] = c.max_order_binary;
    j["max_order_ternary"] = c.max_order_ternary;
    j["mc_replicas"] = c.mc_replicas;
    j["master_seed"] = c.master_seed;
    j["output_dir"] = c.output_dir.generic_string();
    j["workers"] = c.workers;
    j["dump_bic_grid"] = c.dump_bic_grid;
    j["export_symbols"] = c.export_symbols;
    json assets = json::array();
    for (const auto& a : c.assets) {
        json e;
        e["id"] = a.id;
        e["n_days"] = a.n_days;
        e["minutes_per_day"] = a.minutes_per_day;
        if (a.csv) e["csv"] = a.csv->generic_string();
        if (a.synthetic) e["synthetic"] = synthetic_to_json(*a.synthetic);
        assets.push_back(std::move(e));
    }
    j["assets"] = std::move(assets);
    return j.dump(2);
}

ingest::SyntheticSpec parse_synthetic(const std::string& text) {
    return synthetic_from_json(parse_text(text), 390);
}

}  // namespace hfentropy::config
