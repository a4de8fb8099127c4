#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dvs/baselines.hpp"
#include "dvs/compare.hpp"
#include "dvs/config.hpp"
#include "dvs/errors.hpp"
#include "dvs/manifest.hpp"
#include "dvs/metrics.hpp"
#include "dvs/series.hpp"
#include "dvs/training.hpp"
#include "dvs/visibility.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dvs::IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (fs::path(path).has_parent_path()) {
        fs::create_directories(fs::path(path).parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dvs::IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw dvs::IoError("failed writing '" + path + "'");
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) s += ' ';
        s += argv[i];
    }
    return s;
}

dvs::RunConfig load_run_config(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
                               bool drop_last_flag) {
    dvs::RunConfig cfg;
    if (!config_path.empty()) cfg = dvs::run_config_from_json(read_file(config_path));
    if (seed_flag) cfg.train.seed = *seed_flag;
    if (drop_last_flag) cfg.drop_last = true;
    return cfg;
}

dvs::RunManifest start_manifest(const std::string& command_line, std::uint64_t seed,
                                const std::string& config_json, const std::string& input_bytes) {
    dvs::RunManifest m;
    m.command_line = command_line;
    m.seed = seed;
    m.config_hash = dvs::fnv1a64_hex(config_json);
    m.input_digest = dvs::fnv1a64_hex(input_bytes);
    m.started_at = dvs::iso8601_utc_now();
    return m;
}

std::string predictions_csv(const std::vector<double>& actuals, const std::vector<double>& preds) {
    std::string out = "index,actual,predicted\n";
    char buf[96];
    for (std::size_t i = 0; i < preds.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, actuals[i], preds[i]);
        out += buf;
    }
    return out;
}

std::vector<double> window_targets(const dvs::WindowSet& ws) {
    std::vector<double> y;
    y.reserve(ws.size());
    for (const dvs::Window& w : ws.windows) y.push_back(w.target);
    return y;
}

dvs::WindowSet windows_for(const dvs::TimeSeries& series, const dvs::RunConfig& cfg) {
    dvs::WindowSet ws = dvs::make_windows(series, static_cast<std::size_t>(cfg.window_len));
    if (cfg.drop_last && !ws.windows.empty()) ws.windows.pop_back();
    return ws;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time series -> visibility network -> compressed series -> forecaster"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "override the config seed");
    bool drop_last_flag = false;
    app.add_flag("--drop-last", drop_last_flag,
                 "drop the final window (count n-w-1 instead of n-w)");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a deterministic trend+season+noise series");
    dvs::SynthSpec spec;
    spec.length = 295;
    spec.trend_slope = 20.0;
    spec.seasonal_amplitude = 150.0;
    spec.seasonal_period = 12.0;
    spec.noise_sigma = 30.0;
    spec.base_level = 4700.0;
    spec.seed = 7;
    std::string synth_out = "series.csv";
    synth->add_option("--length", spec.length, "number of points (>= 2)");
    synth->add_option("--slope", spec.trend_slope, "trend slope per step");
    synth->add_option("--amplitude", spec.seasonal_amplitude, "seasonal amplitude");
    synth->add_option("--period", spec.seasonal_period, "seasonal period in steps");
    synth->add_option("--sigma", spec.noise_sigma, "gaussian noise sigma");
    synth->add_option("--base", spec.base_level, "base level");
    synth->add_option("--out", synth_out, "output CSV path");

    // transform
    auto* transform = app.add_subcommand("transform", "export adjacency, enhanced matrix and zip series");
    std::string tr_series, tr_outdir = "transform_out", tr_format = "json", tr_abscissa = "index";
    bool tr_per_window = false;
    int tr_window = 30;
    transform->add_option("--series", tr_series, "input series CSV")->required();
    transform->add_option("--out", tr_outdir, "output directory");
    transform->add_option("--format", tr_format, "adjacency format: json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    transform->add_option("--abscissa", tr_abscissa, "node abscissa: index or time")
        ->check(CLI::IsMember({"index", "time"}));
    transform->add_flag("--per-window", tr_per_window, "transform each sliding window instead");
    transform->add_option("--window", tr_window, "window length for --per-window");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a forecaster on the chronological train split");
    std::string train_series, train_config, train_out = "model.json";
    std::string train_arch = "dvs-cnn";
    train_cmd->add_option("--series", train_series, "input series CSV")->required();
    train_cmd->add_option("--config", train_config, "run config JSON");
    train_cmd->add_option("--out", train_out, "model output path");
    train_cmd->add_option("--arch", train_arch, "network: dvs-cnn, cnn, dvs-ann or ann")
        ->check(CLI::IsMember({"dvs-cnn", "cnn", "dvs-ann", "ann"}));

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "predict every window of a series with a trained model");
    std::string pred_series, pred_model, pred_out = "predictions.csv";
    predict_cmd->add_option("--series", pred_series, "input series CSV")->required();
    predict_cmd->add_option("--model", pred_model, "trained model JSON")->required();
    predict_cmd->add_option("--out", pred_out, "predictions CSV path");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "evaluate methods on the shared test split");
    std::string cmp_series, cmp_config, cmp_outdir = "compare_out", cmp_methods = "dvs-cnn,cnn";
    std::string cmp_seeds;
    compare_cmd->add_option("--series", cmp_series, "input series CSV")->required();
    compare_cmd->add_option("--config", cmp_config, "run config JSON");
    compare_cmd->add_option("--methods", cmp_methods,
                            "comma list of dvs-cnn, cnn, dvs-ann, ann, sma, ses, linear, vg-walk");
    compare_cmd->add_option("--seeds", cmp_seeds, "comma list of training seeds (default: config seed)");
    compare_cmd->add_option("--out", cmp_outdir, "output directory");

    // global flags may follow the subcommand name
    for (CLI::App* sub : {synth, transform, train_cmd, predict_cmd, compare_cmd}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command_line = join_args(argc, argv);

    try {
        if (synth->parsed()) {
            if (seed_flag) spec.seed = *seed_flag;
            dvs::TimeSeries series = dvs::synth_series(spec);
            write_file(synth_out, dvs::series_to_csv(series));
            dvs::RunManifest manifest = start_manifest(command_line, spec.seed, "{}", "");
            manifest.finished_at = dvs::iso8601_utc_now();
            write_file(synth_out + ".manifest.json", manifest.to_json());
            std::cout << "wrote " << synth_out << " (" << series.size() << " points)\n";
        } else if (transform->parsed()) {
            const std::string bytes = read_file(tr_series);
            dvs::TimeSeries series = dvs::load_series(bytes);
            dvs::RunManifest manifest = start_manifest(command_line, seed_flag.value_or(0), "{}", bytes);
            const fs::path dir(tr_outdir);

            if (tr_per_window) {
                dvs::WindowSet ws = dvs::make_windows(series, static_cast<std::size_t>(tr_window));
                std::string csv = "window";
                for (int i = 0; i < tr_window; ++i) csv += ",z" + std::to_string(i);
                csv += '\n';
                char buf[40];
                for (std::size_t k = 0; k < ws.size(); ++k) {
                    csv += std::to_string(k);
                    dvs::ZipSeries z = dvs::dvs_transform(ws.windows[k].input);
                    for (double v : z.z) {
                        std::snprintf(buf, sizeof(buf), ",%.17g", v);
                        csv += buf;
                    }
                    csv += '\n';
                }
                write_file((dir / "zip_windows.csv").string(), csv);
                write_file((dir / "windows.json").string(), dvs::windowset_to_json(ws));
                std::cout << "wrote " << (dir / "zip_windows.csv").string() << " (" << ws.size()
                          << " windows)\n";
            } else {
                dvs::AdjacencyMatrix adj =
                    tr_abscissa == "time" ? dvs::visibility_adjacency(series.values, series.times)
                                          : dvs::visibility_adjacency(series.values);
                dvs::EnhancedMatrix evg = dvs::enhanced_matrix(adj, series.values);
                dvs::ZipSeries zip = dvs::dvs_compress(evg);
                if (tr_format == "json" || tr_format == "both") {
                    write_file((dir / "adjacency.json").string(), dvs::adjacency_to_json(adj));
                }
                if (tr_format == "csv" || tr_format == "both") {
                    write_file((dir / "adjacency.csv").string(), dvs::adjacency_to_csv(adj));
                }
                write_file((dir / "evg.csv").string(), dvs::evg_to_csv(evg));
                write_file((dir / "zip.csv").string(), dvs::zip_to_csv(zip));
                std::cout << "wrote adjacency/evg/zip under " << tr_outdir << "\n";
            }
            manifest.finished_at = dvs::iso8601_utc_now();
            write_file((dir / "manifest.json").string(), manifest.to_json());
        } else if (train_cmd->parsed()) {
            const std::string bytes = read_file(train_series);
            dvs::TimeSeries series = dvs::load_series(bytes);
            dvs::RunConfig cfg = load_run_config(train_config, seed_flag, drop_last_flag);
            dvs::RunManifest manifest =
                start_manifest(command_line, cfg.train.seed, dvs::run_config_to_json(cfg), bytes);

            auto [train_set, test_set] = dvs::split_train_test(windows_for(series, cfg), cfg.train_fraction);
            dvs::TrainConfig tcfg = cfg.train;
            tcfg.use_dvs = (train_arch == "dvs-cnn" || train_arch == "dvs-ann");
            dvs::LayerStack stack = (train_arch == "dvs-cnn") ? dvs::build_dvs_cnn(cfg.window_len)
                                    : (train_arch == "cnn")   ? dvs::build_ablation_cnn(cfg.window_len)
                                                              : dvs::build_ablation_ann(cfg.window_len);
            auto [model, report] = dvs::train(std::move(stack), train_set, tcfg);

            write_file(train_out, dvs::forecaster_to_json(model));
            write_file(train_out + ".report.json", dvs::train_report_to_json(report, train_out));
            manifest.finished_at = dvs::iso8601_utc_now();
            write_file(train_out + ".manifest.json", manifest.to_json());
            std::cout << "trained " << train_arch << " for " << report.config.iterations
                      << " iterations; final loss " << report.iteration_loss.back() << "\n";
        } else if (predict_cmd->parsed()) {
            const std::string bytes = read_file(pred_series);
            dvs::TimeSeries series = dvs::load_series(bytes);
            dvs::Forecaster model = dvs::forecaster_from_json(read_file(pred_model));
            dvs::RunManifest manifest = start_manifest(command_line, 0, "{}", bytes);

            dvs::WindowSet ws =
                dvs::make_windows(series, static_cast<std::size_t>(model.net.input_len()));
            std::vector<double> preds = dvs::predict(model, ws);
            write_file(pred_out, predictions_csv(window_targets(ws), preds));
            manifest.finished_at = dvs::iso8601_utc_now();
            write_file(pred_out + ".manifest.json", manifest.to_json());

            dvs::MetricReport report = dvs::evaluate_metrics(preds, window_targets(ws));
            std::cout << "wrote " << pred_out << "; rmse " << report.rmse << "\n";
        } else if (compare_cmd->parsed()) {
            const std::string bytes = read_file(cmp_series);
            dvs::TimeSeries series = dvs::load_series(bytes);
            dvs::RunConfig cfg = load_run_config(cmp_config, seed_flag, drop_last_flag);
            dvs::RunManifest manifest =
                start_manifest(command_line, cfg.train.seed, dvs::run_config_to_json(cfg), bytes);

            std::vector<dvs::Method> methods;
            for (std::size_t pos = 0; pos < cmp_methods.size();) {
                std::size_t comma = cmp_methods.find(',', pos);
                if (comma == std::string::npos) comma = cmp_methods.size();
                methods.push_back(dvs::method_from_name(cmp_methods.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            std::vector<std::uint64_t> seeds;
            if (cmp_seeds.empty()) {
                seeds.push_back(cfg.train.seed);
            } else {
                for (std::size_t pos = 0; pos < cmp_seeds.size();) {
                    std::size_t comma = cmp_seeds.find(',', pos);
                    if (comma == std::string::npos) comma = cmp_seeds.size();
                    seeds.push_back(std::stoull(cmp_seeds.substr(pos, comma - pos)));
                    pos = comma + 1;
                }
            }

            auto [train_set, test_set] = dvs::split_train_test(windows_for(series, cfg), cfg.train_fraction);
            dvs::CompareResult result =
                dvs::compare_methods(train_set, test_set, methods, cfg.train, seeds);

            const fs::path dir(cmp_outdir);
            write_file((dir / "comparison.json").string(), dvs::comparison_to_json(result));
            write_file((dir / "comparison.txt").string(), dvs::comparison_to_text(result));
            const std::vector<double> actuals = window_targets(test_set);
            for (const dvs::MethodSummary& summary : result.methods) {
                for (const dvs::MethodRun& run : summary.runs) {
                    const std::string name = "preds_" + dvs::method_name(summary.method) + "_seed" +
                                             std::to_string(run.seed) + ".csv";
                    write_file((dir / name).string(), predictions_csv(actuals, run.predictions));
                }
            }
            manifest.finished_at = dvs::iso8601_utc_now();
            write_file((dir / "manifest.json").string(), manifest.to_json());
            std::cout << dvs::comparison_to_text(result);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
