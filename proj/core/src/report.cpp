#include "hfentropy/report.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hfentropy/config.hpp"
#include "hfentropy/error.hpp"
#include "hfentropy/random.hpp"

namespace hfentropy::report {

namespace {

using nlohmann::json;
using pipeline::AssetOutcome;
using pipeline::RunResults;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json band_json(const efficiency::McBand& b) {
    return {{"lower", b.lower}, {"upper", b.upper}, {"mean", b.mean}, {"std", b.std},
            {"replicas", b.replicas}, {"length", b.series_length}, {"process", describe(b.process)},
            {"seed", b.seed}};
}

json outcomes_json(const std::vector<pipeline::OrderOutcome>& outcomes) {
    json arr = json::array();
    for (const auto& o : outcomes) {
        arr.push_back({{"k", o.k}, {"h", o.h}, {"band", band_json(o.band)},
                       {"verdict", efficiency::to_string(o.verdict)}});
    }
    return arr;
}

json model_json(const arma::ArmaModel& m) {
    return {{"p", m.p}, {"q", m.q}, {"ar", m.ar}, {"ma", m.ma}, {"mean", m.mean},
            {"innovation_variance", m.innovation_variance}, {"log_likelihood", m.log_likelihood},
            {"bic", m.bic}, {"n", m.n}};
}

json asset_json(const AssetOutcome& a) {
    json j;
    j["asset_id"] = a.asset_id;
    j["ok"] = a.ok;
    if (!a.ok) j["error"] = a.error;
    j["warnings"] = a.warnings;
    j["audit"] = {{"dropped_out_of_session", a.audit.dropped_out_of_session},
                  {"outliers_removed", a.audit.outliers.size()},
                  {"splits_flagged", a.audit.split_times.size()},
                  {"median_price", a.audit.median_price},
                  {"n_prices", a.audit.n_prices}};
    if (a.binary) {
        const auto& b = *a.binary;
        json jb;
        jb["n_returns"] = b.n_returns;
        jb["n_symbols"] = b.n_symbols;
        jb["zeros_dropped"] = b.zeros_dropped;
        jb["n_down"] = b.n_down;
        jb["n_up"] = b.n_up;
        jb["binomial"] = {{"z", b.binomial.z}, {"p_value", b.binomial.p_value},
                          {"significant", b.binomial.significant},
                          {"normal_approximation", b.binomial.normal_approximation}};
        jb["returns"] = outcomes_json(b.returns);
        jb["model"] = model_json(b.model);
        jb["benchmark"] = b.benchmark ? json(describe(*b.benchmark)) : json(nullptr);
        json th = json::array();
        for (const auto& s : b.theoretical) {
            th.push_back({{"k", s.k}, {"h_theory", s.h_theory}, {"h_hat", s.h_hat}, {"sigma", s.sigma},
                          {"score", s.score}});
        }
        jb["theoretical_scores"] = th;
        jb["n_residual_symbols"] = b.n_residual_symbols;
        jb["residuals"] = outcomes_json(b.residuals);
        json rs = json::object();
        for (const auto& [k, s] : b.residual_scores) rs[std::to_string(k)] = s;
        jb["residual_scores"] = rs;
        j["binary"] = jb;
    }
    if (a.ternary) {
        const auto& t = *a.ternary;
        json jt;
        jt["degenerate"] = t.degenerate;
        jt["model"] = model_json(t.model);
        jt["warnings"] = t.warnings;
        json stages = json::array();
        for (const auto& s : t.stages) {
            json h = json::object();
            for (const auto& [k, v] : s.h) h[std::to_string(k)] = v;
            stages.push_back({{"stage", std::string(to_string(s.stage))}, {"n", s.n},
                              {"thresholds", {s.lower_threshold, s.upper_threshold}},
                              {"degenerate", s.degenerate}, {"h", h}});
        }
        jt["stages"] = stages;
        j["ternary"] = jt;
    }
    return j;
}

json ranking_json(const std::map<int, pipeline::Ranking>& rankings) {
    json out = json::object();
    for (const auto& [k, r] : rankings) {
        json arr = json::array();
        for (std::size_t i = 0; i < r.size(); ++i) {
            arr.push_back({{"rank", i + 1}, {"asset_id", r[i].first}, {"score", r[i].second}});
        }
        out[std::to_string(k)] = arr;
    }
    return out;
}

std::uint64_t config_hash(const pipeline::RunConfig& c) {
    const std::string text = config::to_json(c);
    return fnv1a(text.data(), text.size());
}

class Writer {
public:
    explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        out << content;
        if (!out) throw IoError("write failed for " + path.string());
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

const pipeline::OrderOutcome* find_order(const std::vector<pipeline::OrderOutcome>& v, int k) {
    for (const auto& o : v) {
        if (o.k == k) return &o;
    }
    return nullptr;
}

}  // namespace

std::string to_json(const RunResults& results) {
    json j;
    j["version"] = kVersion;
    j["config"] = json::parse(config::to_json(results.config));
    j["config_hash"] = hex64(config_hash(results.config));
    j["master_seed"] = results.config.master_seed;
    json assets = json::array();
    for (const auto& a : results.assets) assets.push_back(asset_json(a));
    j["assets"] = assets;
    j["failed_assets"] = results.failed_count();
    j["residual_rankings"] = ranking_json(results.residual_rankings);
    j["theoretical_rankings"] = ranking_json(results.theoretical_rankings);
    json dec = json::object();
    for (const auto& [k, d] : results.decompositions) {
        json per = json::array();
        for (const auto& s : d.per_asset) {
            per.push_back({{"asset_id", s.asset_id}, {"total_gain", s.total_gain}, {"intraday", s.intraday},
                           {"volatility", s.volatility}, {"microstructure", s.microstructure}});
        }
        dec[std::to_string(k)] = {{"intraday", d.intraday}, {"volatility", d.volatility},
                                  {"microstructure", d.microstructure}, {"per_asset", per},
                                  {"excluded", d.excluded}};
    }
    for (const auto& [k, e] : results.decomposition_errors) dec[std::to_string(k)] = {{"error", e}};
    j["decompositions"] = dec;
    return j.dump(2) + "\n";
}

std::vector<std::string> emit_reports(const RunResults& results, const std::filesystem::path& output_dir,
                                      bool allow_empty) {
    if (results.assets.empty() && !allow_empty) throw InputError("no assets to report");
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec || !std::filesystem::is_directory(output_dir)) {
        throw IoError("cannot create output directory " + output_dir.string());
    }
    Writer w(output_dir);
    const auto& cfg = results.config;
    const std::string estimator = entropy::to_string(cfg.estimator);

    w.write("report.json", to_json(results));

    std::ostringstream entropy_csv;
    std::ostringstream efficiency_csv;
    std::ostringstream binomial_csv;
    std::ostringstream theory_csv;
    std::ostringstream stages_csv;
    std::ostringstream fig2;
    std::ostringstream fig5;
    std::ostringstream fig8;
    std::ostringstream fig6;
    std::ostringstream audit_assets;
    std::ostringstream audit_outliers;
    std::ostringstream audit_splits;
    std::ostringstream bic;
    entropy_csv << "asset,series,alphabet,estimator,k,value,n_blocks\n";
    efficiency_csv << "asset,k,h,band_lower,band_upper,band_mean,band_std,verdict,h_res,res_band_lower,res_band_upper,"
                      "res_verdict,score_res,p,q\n";
    binomial_csv << "asset,n_down,n_up,z,p_value,significant\n";
    theory_csv << "asset,k,model,h_theory,h_hat,sigma,score\n";
    stages_csv << "asset,stage,n,lower_threshold,upper_threshold,degenerate,k,h\n";
    fig2 << "asset,k,h,band_lower,band_upper,band_mean\n";
    fig5 << "asset,k,h_returns,h_residuals\n";
    fig8 << "asset,k,raw,deseasonalized,standardized,residual\n";
    fig6 << "asset,k,median_price,score_res,shifted_score\n";
    audit_assets << "asset,ok,error,dropped_out_of_session,n_prices,outliers_removed,splits_flagged,warnings\n";
    audit_outliers << "asset,timestamp,price\n";
    audit_splits << "asset,timestamp,return\n";
    bic << "asset,pipeline,p,q,ok,bic,message\n";

    for (const auto& a : results.assets) {
        const std::string id = csv_field(a.asset_id);
        std::string warnings;
        for (const auto& s : a.warnings) warnings += (warnings.empty() ? "" : "; ") + s;
        audit_assets << id << ',' << (a.ok ? "true" : "false") << ',' << csv_field(a.error) << ','
                     << a.audit.dropped_out_of_session << ',' << a.audit.n_prices << ',' << a.audit.outliers.size()
                     << ',' << a.audit.split_times.size() << ',' << csv_field(warnings) << '\n';
        for (const auto& o : a.audit.outliers) {
            audit_outliers << id << ',' << format_timestamp(o.time) << ',' << num(o.price) << '\n';
        }
        for (std::size_t i = 0; i < a.audit.split_times.size(); ++i) {
            audit_splits << id << ',' << format_timestamp(a.audit.split_times[i]) << ','
                         << num(a.audit.split_values[i]) << '\n';
        }
        if (a.binary) {
            const auto& b = *a.binary;
            binomial_csv << id << ',' << b.n_down << ',' << b.n_up << ',' << num(b.binomial.z) << ','
                         << num(b.binomial.p_value) << ',' << (b.binomial.significant ? "true" : "false") << '\n';
            for (const auto& o : b.returns) {
                entropy_csv << id << ",returns,2," << estimator << ',' << o.k << ',' << num(o.h) << ','
                            << b.n_symbols / static_cast<std::size_t>(o.k) << '\n';
                fig2 << id << ',' << o.k << ',' << num(o.h) << ',' << num(o.band.lower) << ','
                     << num(o.band.upper) << ',' << num(o.band.mean) << '\n';
                const auto* r = find_order(b.residuals, o.k);
                efficiency_csv << id << ',' << o.k << ',' << num(o.h) << ',' << num(o.band.lower) << ','
                               << num(o.band.upper) << ',' << num(o.band.mean) << ',' << num(o.band.std) << ','
                               << efficiency::to_string(o.verdict) << ',';
                if (r) {
                    efficiency_csv << num(r->h) << ',' << num(r->band.lower) << ',' << num(r->band.upper) << ','
                                   << efficiency::to_string(r->verdict) << ',' << num(b.residual_scores.at(o.k));
                    fig5 << id << ',' << o.k << ',' << num(o.h) << ',' << num(r->h) << '\n';
                } else {
                    efficiency_csv << ",,,,";
                }
                efficiency_csv << ',' << b.model.p << ',' << b.model.q << '\n';
            }
            for (const auto& o : b.residuals) {
                entropy_csv << id << ",residuals,2," << estimator << ',' << o.k << ',' << num(o.h) << ','
                            << b.n_residual_symbols / static_cast<std::size_t>(o.k) << '\n';
            }
            for (const auto& [k, s] : b.residual_scores) {
                fig6 << id << ',' << k << ',' << num(a.audit.median_price) << ',' << num(s) << ',' << num(s + 5.0)
                     << '\n';
            }
            for (const auto& s : b.theoretical) {
                theory_csv << id << ',' << s.k << ',' << csv_field(describe(*b.benchmark)) << ',' << num(s.h_theory)
                           << ',' << num(s.h_hat) << ',' << num(s.sigma) << ',' << num(s.score) << '\n';
            }
            for (const auto& g : b.bic_grid) {
                bic << id << ",binary," << g.p << ',' << g.q << ',' << (g.ok ? "true" : "false") << ','
                    << num(g.bic) << ',' << csv_field(g.message) << '\n';
            }
        }
        if (a.ternary) {
            const auto& t = *a.ternary;
            for (const auto& s : t.stages) {
                for (const auto& [k, h] : s.h) {
                    stages_csv << id << ',' << to_string(s.stage) << ',' << s.n << ',' << num(s.lower_threshold)
                               << ',' << num(s.upper_threshold) << ',' << (s.degenerate ? "true" : "false") << ','
                               << k << ',' << num(h) << '\n';
                    entropy_csv << id << ',' << to_string(s.stage) << ",3," << estimator << ',' << k << ','
                                << num(h) << ',' << s.n / static_cast<std::size_t>(k) << '\n';
                }
            }
            if (!t.degenerate && t.stages.size() == 4) {
                for (const auto& [k, h] : t.stages[0].h) {
                    fig8 << id << ',' << k << ',' << num(h) << ',' << num(t.stages[1].h.at(k)) << ','
                         << num(t.stages[2].h.at(k)) << ',' << num(t.stages[3].h.at(k)) << '\n';
                }
            }
            for (const auto& g : t.bic_grid) {
                bic << id << ",ternary," << g.p << ',' << g.q << ',' << (g.ok ? "true" : "false") << ','
                    << num(g.bic) << ',' << csv_field(g.message) << '\n';
            }
        }
        if (cfg.export_symbols && a.binary) {
            w.write("symbols/" + a.asset_id + "_returns.txt", a.binary->digits_returns + "\n");
            w.write("symbols/" + a.asset_id + "_residuals.txt", a.binary->digits_residuals + "\n");
        }
    }

    std::ostringstream rankings;
    rankings << "kind,k,rank,asset,score\n";
    for (const auto& [kind, map] : {std::pair{"residual", &results.residual_rankings},
                                    std::pair{"theoretical", &results.theoretical_rankings}}) {
        for (const auto& [k, r] : *map) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                rankings << kind << ',' << k << ',' << i + 1 << ',' << csv_field(r[i].first) << ','
                         << num(r[i].second) << '\n';
            }
        }
    }

    std::ostringstream decomposition;
    decomposition << "k,asset,total_gain,intraday,volatility,microstructure\n";
    for (const auto& [k, d] : results.decompositions) {
        for (const auto& s : d.per_asset) {
            decomposition << k << ',' << csv_field(s.asset_id) << ',' << num(s.total_gain) << ',' << num(s.intraday)
                          << ',' << num(s.volatility) << ',' << num(s.microstructure) << '\n';
        }
        decomposition << k << ",average,," << num(d.intraday) << ',' << num(d.volatility) << ','
                      << num(d.microstructure) << '\n';
    }

    w.write("entropy_table.csv", entropy_csv.str());
    w.write("efficiency.csv", efficiency_csv.str());
    w.write("binomial.csv", binomial_csv.str());
    w.write("theoretical_scores.csv", theory_csv.str());
    w.write("rankings.csv", rankings.str());
    w.write("stage_entropies.csv", stages_csv.str());
    w.write("decomposition.csv", decomposition.str());
    w.write("plot_fig2_entropy_bands.csv", fig2.str());
    w.write("plot_fig5_returns_vs_residuals.csv", fig5.str());
    w.write("plot_fig6_score_vs_price.csv", fig6.str());
    w.write("plot_fig8_stage_profile.csv", fig8.str());
    w.write("audit_assets.csv", audit_assets.str());
    w.write("audit_outliers.csv", audit_outliers.str());
    w.write("audit_splits.csv", audit_splits.str());
    if (cfg.dump_bic_grid) w.write("bic_grid.csv", bic.str());

    json manifest;
    manifest["version"] = kVersion;
    manifest["master_seed"] = cfg.master_seed;
    manifest["config_hash"] = hex64(config_hash(cfg));
    manifest["files"] = w.files();
    manifest["assets"] = results.assets.size();
    manifest["failed_assets"] = results.failed_count();
    w.write("manifest.json", manifest.dump(2) + "\n");
    return w.files();
}

}  // namespace hfentropy::report
