#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hfentropy/config.hpp"
#include "hfentropy/efficiency.hpp"
#include "hfentropy/error.hpp"
#include "hfentropy/ingestion.hpp"
#include "hfentropy/pipeline.hpp"
#include "hfentropy/report.hpp"
#include "hfentropy/theory.hpp"

namespace {

using namespace hfentropy;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;
constexpr const char* kOutputEnv = "HFENTROPY_OUTPUT_DIR";

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

ProcessKind make_process(const std::string& name, double param) {
    if (name == "wn" || name == "white-noise") return WhiteNoise{};
    if (name == "ar1") return Ar1{param};
    if (name == "ma1") return Ma1{param};
    throw InputError("unknown process '" + name + "' (wn, ar1, ma1)");
}

// Writes to `path`, or stdout when it is empty or "-".
void emit_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

struct RunOptions {
    std::string config_path;
    std::vector<std::string> csv_files;
    std::string output_dir;
    std::string pipeline;
    std::string estimator;
    int frequency = 0;
    int replicas = 0;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    bool no_outliers = false;
    bool dump_bic_grid = false;
    bool export_symbols = false;
};

int cmd_run(const RunOptions& o) {
    pipeline::RunConfig cfg = o.config_path.empty() ? pipeline::RunConfig{} : config::load(o.config_path);
    const bool config_sets_dir = cfg.output_dir != pipeline::RunConfig{}.output_dir;
    for (const auto& f : o.csv_files) {
        pipeline::AssetSource src;
        src.csv = f;
        src.id = std::filesystem::path(f).stem().string();
        cfg.assets.push_back(src);
    }
    if (!o.output_dir.empty()) {
        cfg.output_dir = o.output_dir;
    } else if (const char* env = std::getenv(kOutputEnv); env && *env && !config_sets_dir) {
        cfg.output_dir = env;
    }
    if (!o.pipeline.empty()) cfg.pipeline = pipeline::pipeline_from_string(o.pipeline);
    if (!o.estimator.empty()) cfg.estimator = entropy::estimator_from_string(o.estimator);
    if (o.frequency > 0) cfg.frequency_minutes = o.frequency;
    if (o.replicas > 0) cfg.mc_replicas = o.replicas;
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.workers > 0) cfg.workers = o.workers;
    if (o.no_outliers) cfg.remove_outliers = false;
    if (o.dump_bic_grid) cfg.dump_bic_grid = true;
    if (o.export_symbols) cfg.export_symbols = true;

    const auto results = pipeline::run(cfg);
    const auto files = report::emit_reports(results, cfg.output_dir);
    for (const auto& a : results.assets) {
        if (!a.ok) std::cerr << "asset " << a.asset_id << " failed: " << a.error << '\n';
    }
    std::cerr << "wrote " << files.size() << " files to " << cfg.output_dir.string() << '\n';
    return results.failed_count() > 0 ? kExitPartial : kExitOk;
}

int cmd_theory_table(const std::string& process, double step, const std::string& output) {
    if (!(step > 0.0 && step < 1.0)) throw InputError("step must be in (0, 1)");
    std::string text = "process,parameter,H1,H2_over_2,H3_over_3,h2,h3\n";
    std::vector<std::string> kinds;
    if (process == "both" || process == "ar1") kinds.push_back("ar1");
    if (process == "both" || process == "ma1") kinds.push_back("ma1");
    if (kinds.empty()) throw InputError("process must be ar1, ma1 or both");
    const auto n = static_cast<int>(std::floor(0.999999 / step));
    for (const auto& kind : kinds) {
        for (int i = -n; i <= n; ++i) {
            const double p = i * step;
            const auto t = theory::theoretical_entropies(make_process(kind, p));
            text += kind + "," + num(p) + "," + num(t.H1) + "," + num(t.H2 / 2.0) + "," + num(t.H3 / 3.0) + "," +
                    num(t.h2) + "," + num(t.h3) + "\n";
        }
    }
    emit_text(output, text);
    return kExitOk;
}

struct SynthOptions {
    std::string spec_path;
    std::string process = "wn";
    double param = 0.0;
    std::size_t days = 20;
    int minutes = 391;
    std::uint64_t seed = 1;
    double innovation_sd = 1e-3;
    double pricing_error_sd = 0.0;
    double tick = 0.0;
    double u_shape = 0.0;
    double vol_of_vol = 0.0;
    double vol_persistence = 0.9;
    std::string asset_id = "SYNTH";
    std::string output;
};

int cmd_synth(const SynthOptions& o) {
    ingest::SyntheticSpec spec;
    if (!o.spec_path.empty()) {
        std::ifstream in(o.spec_path);
        if (!in) throw IoError("cannot open " + o.spec_path);
        std::stringstream buf;
        buf << in.rdbuf();
        spec = config::parse_synthetic(buf.str());
    } else {
        spec.process = to_spec(make_process(o.process, o.param));
        spec.innovation_sd = o.innovation_sd;
        spec.pricing_error_sd = o.pricing_error_sd;
        if (o.tick > 0.0) spec.tick = o.tick;
        if (o.u_shape != 0.0) spec.intraday_profile = ingest::u_shaped_profile(static_cast<std::size_t>(o.minutes - 1), o.u_shape);
        if (o.vol_of_vol > 0.0) spec.volatility = ingest::VolatilityRegime{o.vol_persistence, o.vol_of_vol, {}};
    }
    spec.seed = o.seed;
    if (!o.spec_path.empty() && !spec.intraday_profile.empty() &&
        spec.intraday_profile.size() != static_cast<std::size_t>(o.minutes - 1)) {
        throw InputError("the spec's intraday profile does not match --minutes");
    }
    const auto series = ingest::generate_synthetic(spec, o.days, o.minutes, o.asset_id);
    if (o.output.empty() || o.output == "-") {
        std::cout << "timestamp,price\n";
        for (const auto& obs : series.observations) std::cout << format_timestamp(obs.time) << ',' << num(obs.price) << '\n';
    } else {
        ingest::write_csv(series, o.output);
    }
    return kExitOk;
}

struct BandOptions {
    std::string process = "wn";
    double param = 0.0;
    std::size_t length = 100000;
    std::vector<int> orders{2, 3, 6, 10};
    int replicas = 1000;
    std::uint64_t seed = 20240101;
    std::string estimator = "grassberger";
    std::string output;
};

int cmd_bands(const BandOptions& o) {
    const auto bands = efficiency::mc_bands(make_process(o.process, o.param), o.length, o.orders, o.replicas, o.seed,
                                            entropy::estimator_from_string(o.estimator));
    std::string text = "process,length,k,replicas,seed,lower,upper,mean,std\n";
    for (const auto& b : bands) {
        text += describe(b.process) + "," + std::to_string(b.series_length) + "," + std::to_string(b.k) + "," +
                std::to_string(b.replicas) + "," + std::to_string(b.seed) + "," + num(b.lower) + "," + num(b.upper) +
                "," + num(b.mean) + "," + num(b.std) + "\n";
    }
    emit_text(o.output, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-based efficiency measurement for high-frequency return series"};
    app.set_version_flag("--version", std::string(report::kVersion));
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run the binary and/or ternary pipelines and write reports");
    run_cmd->add_option("-c,--config", run.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    run_cmd->add_option("csv", run.csv_files, "Additional timestamp,price CSV inputs")->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--output-dir", run.output_dir,
                        std::string("Output directory (default: $") + kOutputEnv + " or hfentropy-out)");
    run_cmd->add_option("--pipeline", run.pipeline, "binary, ternary or both")
        ->check(CLI::IsMember({"binary", "ternary", "both"}));
    run_cmd->add_option("--estimator", run.estimator, "naive or grassberger")
        ->check(CLI::IsMember({"naive", "grassberger"}));
    run_cmd->add_option("--frequency", run.frequency, "Sampling interval in minutes")->check(CLI::PositiveNumber);
    run_cmd->add_option("--replicas", run.replicas, "Monte Carlo replicas per band")->check(CLI::Range(100, 1000000));
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--workers", run.workers, "Worker threads across assets")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--no-outliers", run.no_outliers, "Skip the outlier filter");
    run_cmd->add_flag("--dump-bic-grid", run.dump_bic_grid, "Write every fitted (p,q) with its BIC");
    run_cmd->add_flag("--export-symbols", run.export_symbols, "Write binary symbol sequences as digit strings");

    std::string theory_process = "both";
    double theory_step = 0.01;
    std::string theory_output;
    auto* theory_cmd = app.add_subcommand("theory-table", "Closed-form entropies over a parameter grid");
    theory_cmd->add_option("--process", theory_process, "ar1, ma1 or both")
        ->check(CLI::IsMember({"ar1", "ma1", "both"}));
    theory_cmd->add_option("--step", theory_step, "Parameter grid step");
    theory_cmd->add_option("-o,--output", theory_output, "CSV file (default stdout)");

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic one-minute price series");
    synth_cmd->add_option("--spec", synth.spec_path, "JSON synthetic specification")->check(CLI::ExistingFile);
    synth_cmd->add_option("--process", synth.process, "wn, ar1 or ma1")->check(CLI::IsMember({"wn", "ar1", "ma1"}));
    synth_cmd->add_option("--param", synth.param, "phi or theta");
    synth_cmd->add_option("--days", synth.days, "Trading days");
    synth_cmd->add_option("--minutes", synth.minutes, "Prices per day");
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--innovation-sd", synth.innovation_sd, "Innovation standard deviation");
    synth_cmd->add_option("--pricing-error-sd", synth.pricing_error_sd, "Pricing error standard deviation");
    synth_cmd->add_option("--tick", synth.tick, "Price grid size (0 disables rounding)");
    synth_cmd->add_option("--u-shape", synth.u_shape, "Amplitude of a U-shaped intraday profile");
    synth_cmd->add_option("--vol-of-vol", synth.vol_of_vol, "Daily log-volatility dispersion (0 disables)");
    synth_cmd->add_option("--vol-persistence", synth.vol_persistence, "Daily log-volatility persistence");
    synth_cmd->add_option("--id", synth.asset_id, "Asset id");
    synth_cmd->add_option("-o,--output", synth.output, "CSV file (default stdout)");

    BandOptions band;
    auto* bands_cmd = app.add_subcommand("bands", "Precompute Monte Carlo entropy bands");
    bands_cmd->add_option("--process", band.process, "wn, ar1 or ma1")->check(CLI::IsMember({"wn", "ar1", "ma1"}));
    bands_cmd->add_option("--param", band.param, "phi or theta");
    bands_cmd->add_option("--length", band.length, "Symbols per replica");
    bands_cmd->add_option("--orders", band.orders, "Entropy orders")->delimiter(',');
    bands_cmd->add_option("--replicas", band.replicas, "Replicas")->check(CLI::Range(100, 1000000));
    bands_cmd->add_option("--seed", band.seed, "Seed");
    bands_cmd->add_option("--estimator", band.estimator, "naive or grassberger")
        ->check(CLI::IsMember({"naive", "grassberger"}));
    bands_cmd->add_option("-o,--output", band.output, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*theory_cmd) return cmd_theory_table(theory_process, theory_step, theory_output);
        if (*synth_cmd) return cmd_synth(synth);
        if (*bands_cmd) return cmd_bands(band);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFatal;
    }
    return kExitFatal;
}
