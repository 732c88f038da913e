// ccwsim command line: simulate / validate / anodi / bench.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccwsim/ccwsim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Config keys that have flag twins; flag values win over the file and the
// override is echoed so runs stay auditable.
struct FlagTwins {
    std::map<std::string, std::string> values;

    void attach(CLI::App* cmd) {
        add(cmd, "ti", "--ti", "training image grid file");
        add(cmd, "sg_size", "--sg-size", "simulation grid size, <h>x<w> or one square size");
        add(cmd, "template", "--template", "template size T");
        add(cmd, "overlap", "--overlap", "overlap width OV");
        add(cmd, "dwt_level", "--dwt-level", "DWT decomposition level J");
        add(cmd, "candidates", "--candidates", "candidate pool size K");
        add(cmd, "realizations", "--realizations", "number of realizations");
        add(cmd, "seed", "--seed", "master seed");
        add(cmd, "hard_data", "--hard-data", "hard data file");
        add(cmd, "scoring", "--scoring", "raw | normalized");
        add(cmd, "facies_mode", "--facies-mode", "indicator | raw-codes");
        add(cmd, "min_cut", "--min-cut", "on | off");
        add(cmd, "out_dir", "--out-dir", "output directory");
    }

  private:
    void add(CLI::App* cmd, std::string key, const std::string& flag, const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }
};

// Merges config file + flag twins into a validated ConfigFile.  Seed may come
// from system entropy only when absent everywhere and --entropy was passed.
ccwsim::ConfigFile build_config(const std::string& config_path, const FlagTwins& flags,
                                bool entropy) {
    auto kv = ccwsim::detail::read_key_values(config_path);

    static const char* required[] = {"ti",         "sg_size",    "template",
                                     "overlap",    "dwt_level",  "candidates",
                                     "realizations"};
    for (const char* key : required)
        if (!kv.contains(key) && !flags.values.contains(key))
            throw ccwsim::ConfigError(config_path + ": missing required key \"" +
                                      std::string(key) + "\"");

    const bool seed_given = kv.contains("seed") || flags.values.contains("seed");
    if (!seed_given && !entropy)
        throw ccwsim::ConfigError(config_path + ": missing required key \"seed\"");

    ccwsim::ConfigFile cfg;
    for (const auto& [key, value] : kv)
        ccwsim::apply_config_entry(cfg, key, value);
    for (const auto& [key, value] : flags.values) {
        const auto it = kv.find(key);
        if (it != kv.end() && it->second != value)
            std::cout << "override: " << key << " = " << value << " (config had " << it->second
                      << ")\n";
        else if (it == kv.end())
            std::cout << "override: " << key << " = " << value << "\n";
        ccwsim::apply_config_entry(cfg, key, value);
    }

    if (!seed_given) {
        std::random_device rd;
        cfg.sim.master_seed =
            (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
        std::cout << "entropy seed: " << cfg.sim.master_seed << "\n";
    }

    cfg.sim.validate();
    return cfg;
}

std::string resolve_out_dir(const std::optional<std::string>& configured) {
    if (configured && !configured->empty())
        return *configured;
    if (const char* env = std::getenv("CCWSIM_OUT_DIR"); env && *env)
        return env;
    return ".";
}

std::vector<fs::path> list_grid_files(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw ccwsim::IoError(dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".grid")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw ccwsim::EmptyInputError("no .grid files in " + dir);
    return files;
}

std::vector<ccwsim::CategoricalGrid> load_ensemble(const std::vector<fs::path>& files) {
    std::vector<ccwsim::CategoricalGrid> out;
    out.reserve(files.size());
    for (const fs::path& f : files)
        out.push_back(ccwsim::read_grid(f.string()));
    return out;
}

const char* scoring_name(ccwsim::ScoringMode m) {
    return m == ccwsim::ScoringMode::raw ? "raw" : "normalized";
}

const char* facies_mode_name(ccwsim::FaciesMode m) {
    return m == ccwsim::FaciesMode::indicator ? "indicator" : "raw-codes";
}

int run_simulate(const std::string& config_path, const FlagTwins& flags, bool entropy,
                 int workers) {
    ccwsim::ConfigFile cfg = build_config(config_path, flags, entropy);
    const ccwsim::CategoricalGrid ti = ccwsim::read_grid(cfg.ti_path);
    if (cfg.hard_data_path)
        cfg.sim.hard_data =
            ccwsim::read_hard_data(*cfg.hard_data_path, cfg.sim.sg_height, cfg.sim.sg_width);
    cfg.sim.validate_against(ti);

    const std::string out_dir = resolve_out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    const std::vector<ccwsim::SimResult> results =
        ccwsim::simulate_ensemble(ti, cfg.sim, workers);

    json manifest;
    manifest["subcommand"] = "simulate";
    json params;
    params["ti"] = cfg.ti_path;
    params["sg_height"] = cfg.sim.sg_height;
    params["sg_width"] = cfg.sim.sg_width;
    params["template"] = cfg.sim.template_size;
    params["overlap"] = cfg.sim.overlap;
    params["dwt_level"] = cfg.sim.dwt_level;
    params["candidates"] = cfg.sim.candidates;
    params["realizations"] = cfg.sim.n_realizations;
    params["seed"] = cfg.sim.master_seed;
    params["scoring"] = scoring_name(cfg.sim.scoring);
    params["facies_mode"] = facies_mode_name(cfg.sim.facies_mode);
    params["min_cut"] = cfg.sim.min_cut;
    params["hard_data"] = cfg.hard_data_path ? json(*cfg.hard_data_path) : json(nullptr);
    params["out_dir"] = out_dir;
    params["workers"] = workers;
    manifest["parameters"] = params;

    json reals = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const int r = static_cast<int>(i) + 1;
        const std::string stem = "real_" + std::to_string(r);
        ccwsim::write_grid(results[i].realization, out_dir + "/" + stem + ".grid");
        ccwsim::write_pgm(results[i].realization, out_dir + "/" + stem + ".pgm");

        const ccwsim::SimDiagnostics& d = results[i].diagnostics;
        json entry;
        entry["index"] = r;
        entry["file"] = stem + ".grid";
        entry["seed"] = d.seed;
        entry["wall_seconds"] = d.wall_seconds;
        entry["origin"] = ccwsim::corner_name(d.origin);
        entry["column_major"] = d.column_major;
        entry["hard_data_count"] = d.hard_data_count;
        entry["pre_overwrite_mismatches"] = d.pre_overwrite_mismatches;
        entry["pre_overwrite_mismatch_rate"] = d.pre_overwrite_mismatch_rate();
        reals.push_back(entry);
    }
    manifest["realizations"] = reals;

    std::ofstream mout(out_dir + "/manifest.json", std::ios::binary);
    if (!mout)
        throw ccwsim::IoError("cannot open " + out_dir + "/manifest.json for writing");
    mout << manifest.dump(2) << "\n";
    mout.flush();
    if (!mout)
        throw ccwsim::IoError("write failed for " + out_dir + "/manifest.json");

    std::cout << "wrote " << results.size() << " realizations to " << out_dir << "\n";
    return 0;
}

int run_validate(const std::string& dir, const std::string& ti_path,
                 const std::optional<std::string>& out_dir_flag, int facies, int max_lag,
                 bool both_directions) {
    const ccwsim::CategoricalGrid ti = ccwsim::read_grid(ti_path);
    const std::vector<ccwsim::CategoricalGrid> ensemble = load_ensemble(list_grid_files(dir));

    const int min_extent = std::min({ti.height(), ti.width(), ensemble.front().height(),
                                     ensemble.front().width()});
    if (max_lag >= min_extent) {
        max_lag = min_extent - 1;
        std::cout << "note: max_lag clamped to " << max_lag << "\n";
    }

    const std::string out_dir = resolve_out_dir(out_dir_flag);
    fs::create_directories(out_dir);

    using ccwsim::Direction;
    for (const Direction dir_axis : {Direction::east_west, Direction::north_south}) {
        const ccwsim::VariogramSeries ti_series =
            ccwsim::indicator_variogram(ti, facies, dir_axis, max_lag);
        std::vector<ccwsim::VariogramSeries> ens_series;
        ens_series.reserve(ensemble.size());
        for (const auto& g : ensemble)
            ens_series.push_back(ccwsim::indicator_variogram(g, facies, dir_axis, max_lag));
        const std::string name = dir_axis == Direction::east_west ? "variogram_ew.csv"
                                                                  : "variogram_ns.csv";
        ccwsim::write_variogram_csv(ti_series, ens_series, out_dir + "/" + name);
    }

    const auto connectivity_csv = [&](Direction dir_axis, const std::string& name) {
        const ccwsim::ConnectivitySeries ti_series =
            ccwsim::connectivity_function(ti, facies, dir_axis, max_lag);
        std::vector<ccwsim::ConnectivitySeries> ens_series;
        ens_series.reserve(ensemble.size());
        for (const auto& g : ensemble)
            ens_series.push_back(ccwsim::connectivity_function(g, facies, dir_axis, max_lag));
        ccwsim::write_connectivity_csv(ti_series, ens_series, out_dir + "/" + name);
    };
    connectivity_csv(Direction::east_west, "connectivity_ew.csv");
    if (both_directions)
        connectivity_csv(Direction::north_south, "connectivity_ns.csv");

    std::vector<std::map<int, double>> ens_props;
    ens_props.reserve(ensemble.size());
    for (const auto& g : ensemble)
        ens_props.push_back(ccwsim::facies_proportions(g));
    ccwsim::write_proportions_csv(ccwsim::facies_proportions(ti), ens_props,
                                  out_dir + "/proportions.csv");

    ccwsim::write_pgm(ccwsim::ensemble_average(ensemble, facies),
                      out_dir + "/ensemble_average.pgm");

    std::cout << "validation metrics for " << ensemble.size() << " realizations written to "
              << out_dir << "\n";
    return 0;
}

int run_anodi(const std::string& dir_a, const std::string& dir_b, const std::string& ti_path,
              const std::optional<std::string>& out_dir_flag, int levels, int window) {
    const ccwsim::CategoricalGrid ti = ccwsim::read_grid(ti_path);
    const std::vector<fs::path> files_a = list_grid_files(dir_a);
    const std::vector<fs::path> files_b = list_grid_files(dir_b);
    const std::vector<ccwsim::CategoricalGrid> ens_a = load_ensemble(files_a);
    const std::vector<ccwsim::CategoricalGrid> ens_b = load_ensemble(files_b);

    const ccwsim::AnodiResult result = ccwsim::anodi(ens_a, ens_b, ti, levels, window);

    const std::string out_dir = resolve_out_dir(out_dir_flag);
    fs::create_directories(out_dir);
    ccwsim::write_anodi_csv(result, out_dir + "/anodi.csv");

    // Full-resolution pattern histograms for all members + TI; sqrt(JS) is a
    // proper metric, so classical MDS applies.
    std::vector<ccwsim::PatternHistogram> hists;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < ens_a.size(); ++i) {
        hists.push_back(ccwsim::pattern_histogram(ens_a[i], window));
        labels.push_back("a:" + files_a[i].stem().string());
    }
    for (std::size_t i = 0; i < ens_b.size(); ++i) {
        hists.push_back(ccwsim::pattern_histogram(ens_b[i], window));
        labels.push_back("b:" + files_b[i].stem().string());
    }
    hists.push_back(ccwsim::pattern_histogram(ti, window));
    labels.push_back("ti");

    const std::size_t n = hists.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = std::sqrt(ccwsim::js_divergence(hists[i], hists[j]));

    ccwsim::write_mds_csv(labels, ccwsim::classical_mds(dist), out_dir + "/mds.csv");

    std::cout << "anodi aggregate r = " << result.aggregate << " (results in " << out_dir
              << ")\n";
    return 0;
}

int run_bench(const std::string& config_path, const FlagTwins& flags,
              const std::vector<int>& levels, std::vector<int> sg_sizes, int reps) {
    ccwsim::ConfigFile cfg = build_config(config_path, flags, /*entropy=*/false);
    const ccwsim::CategoricalGrid ti = ccwsim::read_grid(cfg.ti_path);
    if (levels.empty())
        throw ccwsim::ConfigError("bench: levels list is empty");
    if (reps < 1)
        throw ccwsim::ConfigError("bench: reps must be >= 1");
    if (sg_sizes.empty())
        sg_sizes = {cfg.sim.sg_height};

    const std::string out_dir = resolve_out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    std::vector<ccwsim::BenchRow> rows;
    std::uint64_t draw = 0;
    std::map<int, double> level1_mean;  // per sg size

    for (const int sg : sg_sizes) {
        for (const int level : levels) {
            ccwsim::SimConfig run = cfg.sim;
            run.sg_height = run.sg_width = sg;
            run.dwt_level = level;
            run.n_realizations = 1;
            run.validate_against(ti);

            std::vector<double> times;
            times.reserve(static_cast<std::size_t>(reps));
            for (int rep = 0; rep < reps; ++rep) {
                const std::uint64_t seed = ccwsim::mix64(cfg.sim.master_seed, ++draw);
                times.push_back(ccwsim::simulate_one(ti, run, seed).diagnostics.wall_seconds);
            }
            double mean = 0.0;
            for (const double t : times)
                mean += t;
            mean /= static_cast<double>(times.size());
            double var = 0.0;
            for (const double t : times)
                var += (t - mean) * (t - mean);
            const double stddev =
                times.size() > 1 ? std::sqrt(var / static_cast<double>(times.size() - 1)) : 0.0;

            if (level == 1)
                level1_mean[sg] = mean;
            ccwsim::BenchRow row;
            row.level = level;
            row.sg = sg;
            row.mean_s = mean;
            row.std_s = stddev;
            row.speedup_vs_level1 =
                level1_mean.contains(sg) && mean > 0.0 ? level1_mean[sg] / mean : 0.0;
            rows.push_back(row);
            std::cout << "bench: level " << level << ", sg " << sg << ": mean " << mean
                      << " s over " << reps << " reps\n";
        }
    }

    ccwsim::write_bench_csv(rows, out_dir + "/bench.csv");
    std::cout << "bench table written to " << out_dir << "/bench.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ccwsim: wavelet-space patch simulation and validation"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run an ensemble of realizations");
    std::string sim_config;
    sim_cmd->add_option("--config", sim_config, "config file (key = value lines)")
        ->required()
        ->check(CLI::ExistingFile);
    FlagTwins sim_flags;
    sim_flags.attach(sim_cmd);
    int workers = 1;
    sim_cmd->add_option("--workers", workers, "parallel realization workers")
        ->check(CLI::PositiveNumber);
    bool entropy = false;
    sim_cmd->add_flag("--entropy", entropy,
                      "allow seeding from system entropy when no seed is given");

    // validate
    auto* val_cmd = app.add_subcommand("validate", "compute ensemble validation metrics");
    std::string val_dir, val_ti;
    std::optional<std::string> val_out;
    int val_facies = 1;
    int val_max_lag = 64;
    bool val_both = false;
    val_cmd->add_option("--dir", val_dir, "realization directory")->required();
    val_cmd->add_option("--ti", val_ti, "training image grid file")->required();
    val_cmd->add_option("--out-dir", val_out, "output directory");
    val_cmd->add_option("--facies", val_facies, "facies code for indicator metrics");
    val_cmd->add_option("--max-lag", val_max_lag, "maximum lag")->check(CLI::PositiveNumber);
    val_cmd->add_flag("--both-directions", val_both, "also write N-S connectivity");

    // anodi
    auto* ano_cmd = app.add_subcommand("anodi", "compare two ensembles against a TI");
    std::string ano_a, ano_b, ano_ti;
    std::optional<std::string> ano_out;
    int ano_levels = 3;
    int ano_window = 4;
    ano_cmd->add_option("--dir-a", ano_a, "first realization directory")->required();
    ano_cmd->add_option("--dir-b", ano_b, "second realization directory")->required();
    ano_cmd->add_option("--ti", ano_ti, "training image grid file")->required();
    ano_cmd->add_option("--out-dir", ano_out, "output directory");
    ano_cmd->add_option("--levels", ano_levels, "pyramid levels")->check(CLI::PositiveNumber);
    ano_cmd->add_option("--window", ano_window, "pattern window size")
        ->check(CLI::PositiveNumber);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "time simulation across DWT levels");
    std::string bench_config;
    bench_cmd->add_option("--config", bench_config, "config file")
        ->required()
        ->check(CLI::ExistingFile);
    FlagTwins bench_flags;
    bench_flags.attach(bench_cmd);
    std::vector<int> bench_levels{1, 2, 3};
    std::vector<int> bench_sgs;
    int bench_reps = 3;
    bench_cmd->add_option("--levels", bench_levels, "DWT levels to time")
        ->delimiter(',');
    bench_cmd->add_option("--sg-sizes", bench_sgs, "square SG sizes to time")->delimiter(',');
    bench_cmd->add_option("--reps", bench_reps, "repetitions per cell")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed())
            return run_simulate(sim_config, sim_flags, entropy, workers);
        if (val_cmd->parsed())
            return run_validate(val_dir, val_ti, val_out, val_facies, val_max_lag, val_both);
        if (ano_cmd->parsed())
            return run_anodi(ano_a, ano_b, ano_ti, ano_out, ano_levels, ano_window);
        if (bench_cmd->parsed())
            return run_bench(bench_config, bench_flags, bench_levels, bench_sgs, bench_reps);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
