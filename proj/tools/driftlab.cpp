// driftlab - synthetic drift streams, drift detection, and prequential
// evaluation from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftlab/evaluation.hpp"
#include "driftlab/press.hpp"
#include "driftlab/stream_io.hpp"
#include "driftlab/streamgen.hpp"

namespace {

constexpr int kExitFlagError = 2;
constexpr int kExitIoError = 3;
constexpr int kExitParseError = 4;

std::uint64_t fallback_seed() {
    if (const char* env = std::getenv("DRIFTLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("DRIFTLAB_SEED is not a valid integer");
        }
    }
    return 0;
}

struct DetectorFlags {
    std::string detector = "seed";
    std::size_t block_size = 32;
    std::size_t max_blocks = 512;
    double delta = 0.05;
    double beta = 0.4;
    double theta = 0.5;
    double ks_alpha = 0.05;
    std::size_t buffer_size = 32;
    std::size_t reference_capacity = 100;
    std::size_t pattern_capacity = 100;
    std::size_t reservoir_capacity = 100;
    std::uint64_t seed = 0;
    bool seed_given = false;

    driftlab::ExperimentConfig to_config() const {
        driftlab::ExperimentConfig config;
        config.detector = detector == "press" ? driftlab::DetectorKind::Press
                                              : driftlab::DetectorKind::Seed;
        config.seed_config.block_size = block_size;
        config.seed_config.max_blocks = max_blocks;
        config.seed_config.delta = delta;
        config.beta = beta;
        config.volatility.buffer_size = buffer_size;
        config.volatility.reference_capacity = reference_capacity;
        config.volatility.threshold_theta = theta;
        config.network.ks_alpha = ks_alpha;
        config.network.pattern_capacity = pattern_capacity;
        config.network.reservoir_capacity = reservoir_capacity;
        config.detector_seed = seed_given ? seed : fallback_seed();
        return config;
    }
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& flags) {
    cmd->add_option("--detector", flags.detector, "Detector to run")
        ->check(CLI::IsMember({"seed", "press"}))
        ->capture_default_str();
    cmd->add_option("--block-size", flags.block_size, "Window block size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-blocks", flags.max_blocks, "Window block cap")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
        ->capture_default_str();
    cmd->add_option("--delta", flags.delta, "Detector confidence level")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    cmd->add_option("--beta", flags.beta, "Severity weight in c = 1 + beta*phi (press)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--theta", flags.theta, "Volatility relative mean-shift threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--ks-alpha", flags.ks_alpha, "Pattern-match KS significance level")
        ->check(CLI::IsMember(std::vector<double>{0.10, 0.05, 0.01}))
        ->capture_default_str();
    cmd->add_option("--buffer-size", flags.buffer_size, "Volatility recent buffer size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--reference-capacity", flags.reference_capacity,
                    "Volatility reference reservoir capacity")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--pattern-capacity", flags.pattern_capacity,
                    "Interval capacity per network pattern")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--reservoir-capacity", flags.reservoir_capacity,
                    "Per-edge severity reservoir capacity")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed,
                    "Detector randomness seed (falls back to DRIFTLAB_SEED)")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
}

driftlab::GeneratorSpec spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw driftlab::IoError("cannot open spec file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec file: ") + e.what());
    }
    try {
        driftlab::GeneratorSpec spec;
        spec.num_patterns = doc.at("num_patterns").get<std::size_t>();
        spec.pattern_interval_means = doc.at("interval_means").get<std::vector<double>>();
        spec.interval_jitter = doc.value("interval_jitter", 0.1);
        spec.transition_matrix =
            doc.at("transition_matrix").get<std::vector<std::vector<double>>>();
        for (const auto& entry : doc.at("severity")) {
            spec.severity_map[{entry.at("from").get<std::size_t>(),
                               entry.at("to").get<std::size_t>()}] =
                entry.at("magnitude").get<double>();
        }
        const auto kind = doc.value("kind", std::string("abrupt"));
        if (kind != "abrupt" && kind != "gradual")
            throw std::invalid_argument("spec file: kind must be 'abrupt' or 'gradual'");
        spec.drift_kind =
            kind == "gradual" ? driftlab::DriftKind::Gradual : driftlab::DriftKind::Abrupt;
        spec.ramp_length = doc.value("ramp_length", std::size_t{300});
        spec.noise_sd = doc.value("noise_sd", 1.0);
        spec.total_instances = doc.at("total_instances").get<std::size_t>();
        spec.seed = doc.value("seed", std::uint64_t{0});
        spec.drifts_per_pattern = doc.value("drifts_per_pattern", std::size_t{20});
        spec.initial_pattern = doc.value("initial_pattern", std::size_t{0});
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec file: ") + e.what());
    }
}

struct GenerateArgs {
    std::string preset;
    double scale = 0.1;
    std::string spec_json;
    std::string kind_override;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t instances_override = 0;
    double noise_override = -1.0;
    std::string out;
    std::string truth_out;
    std::string pattern_changes_out;
};

int cmd_generate(const GenerateArgs& args) {
    driftlab::GeneratorSpec spec;
    if (!args.spec_json.empty())
        spec = spec_from_json_file(args.spec_json);
    else
        spec = driftlab::paper_preset(args.preset, args.scale);

    if (args.seed_given)
        spec.seed = args.seed;
    else if (args.spec_json.empty())
        spec.seed = fallback_seed();
    if (!args.kind_override.empty())
        spec.drift_kind = args.kind_override == "gradual" ? driftlab::DriftKind::Gradual
                                                          : driftlab::DriftKind::Abrupt;
    if (args.instances_override > 0) spec.total_instances = args.instances_override;
    if (args.noise_override >= 0.0) spec.noise_sd = args.noise_override;

    const auto stream = driftlab::generate(spec);
    driftlab::write_values(args.out, stream.values);
    driftlab::write_truth(args.truth_out, stream.truth);
    if (!args.pattern_changes_out.empty())
        driftlab::write_pattern_changes(args.pattern_changes_out, stream.truth);

    std::cout << "generated " << stream.values.size() << " instances, "
              << stream.truth.drift_positions.size() << " drifts, "
              << stream.truth.pattern_change_positions.size() << " pattern changes\n";
    return 0;
}

struct DetectArgs {
    std::string in;
    std::string out;
    std::size_t aggregate = 100;
    std::string press_phase = "train";
    bool continue_learning = false;
    std::string network_in;
    std::string network_out;
    DetectorFlags flags;
};

int cmd_detect(const DetectArgs& args) {
    const auto raw = driftlab::read_values(args.in);
    const auto values = driftlab::aggregate_values(raw, args.aggregate);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.out.empty()) {
        file.open(args.out, std::ios::binary);
        if (!file) throw driftlab::IoError("cannot open output file: " + args.out);
        out = &file;
    }

    const auto config = args.flags.to_config();
    if (config.detector == driftlab::DetectorKind::Seed) {
        driftlab::SeedDetector detector(config.seed_config);
        for (double x : values) {
            if (const auto drift = detector.observe(x)) {
                const driftlab::PressEvent event{
                    drift->index,
                    driftlab::DriftPayload{drift->interval, drift->post_drift_mean}};
                *out << driftlab::event_to_json(event) << '\n';
            }
        }
    } else {
        driftlab::PressConfig press;
        press.seed = config.seed_config;
        press.volatility = config.volatility;
        press.network = config.network;
        press.beta = config.beta;
        press.phase = args.press_phase == "predict" ? driftlab::Phase::Predicting
                                                    : driftlab::Phase::Training;
        press.continue_learning = args.continue_learning;
        press.rng_seed = config.detector_seed;
        driftlab::PressDetector detector(press);
        if (!args.network_in.empty()) {
            std::ifstream net_in(args.network_in);
            if (!net_in)
                throw driftlab::IoError("cannot open network file: " + args.network_in);
            std::stringstream buffer;
            buffer << net_in.rdbuf();
            detector.import_network(buffer.str());
        }
        for (double x : values)
            for (const auto& event : detector.observe(x))
                *out << driftlab::event_to_json(event) << '\n';
        if (!args.network_out.empty()) {
            std::ofstream net_out(args.network_out, std::ios::binary);
            if (!net_out)
                throw driftlab::IoError("cannot open network file: " + args.network_out);
            net_out << detector.export_network() << '\n';
        }
    }
    if (out == &file && !file) throw driftlab::IoError("failed writing " + args.out);
    return 0;
}

struct EvaluateArgs {
    std::string values_path;
    std::string truth_path;
    double train_fraction = 0.0;
    std::string json_out;
    std::string csv_out;
    std::string log_out;
    DetectorFlags flags;
};

int cmd_evaluate(const EvaluateArgs& args) {
    const auto values = driftlab::read_values(args.values_path);
    const auto truth = driftlab::read_truth(args.truth_path);

    auto config = args.flags.to_config();
    config.train_fraction = args.train_fraction;

    const bool keep_events = !args.log_out.empty();
    const auto run = driftlab::run_detector_pass(config, values, keep_events);
    const auto split = static_cast<std::uint64_t>(config.train_fraction *
                                                  static_cast<double>(values.size()));
    const auto metrics =
        driftlab::score_detections(run.detections, truth, values.size(), split);

    if (keep_events) {
        std::ofstream log(args.log_out, std::ios::binary);
        if (!log) throw driftlab::IoError("cannot open log file: " + args.log_out);
        for (const auto& event : run.events)
            log << driftlab::event_to_json(event) << '\n';
    }

    const auto json = driftlab::metrics_to_json(metrics);
    if (args.json_out.empty()) {
        std::cout << json << '\n';
    } else {
        std::ofstream out(args.json_out, std::ios::binary);
        if (!out) throw driftlab::IoError("cannot open output file: " + args.json_out);
        out << json << '\n';
    }
    if (!args.csv_out.empty()) {
        std::ofstream out(args.csv_out, std::ios::binary);
        if (!out) throw driftlab::IoError("cannot open output file: " + args.csv_out);
        out << "detector,delta,beta,fp_rate,tp_rate,mean_delay,fp,tp,fn,true_drifts,instances\n"
            << args.flags.detector << ',' << driftlab::format_double(args.flags.delta) << ','
            << driftlab::format_double(args.flags.beta) << ','
            << driftlab::format_double(metrics.fp_rate) << ','
            << driftlab::format_double(metrics.tp_rate) << ','
            << driftlab::format_double(metrics.mean_delay) << ',' << metrics.fp << ','
            << metrics.tp << ',' << metrics.fn << ',' << metrics.true_drifts << ','
            << metrics.instances << '\n';
    }
    return 0;
}

struct SweepArgs {
    std::string preset = "abrupt10";
    double scale = 0.1;
    std::vector<double> deltas = {0.05, 0.10, 0.15, 0.20, 0.25};
    std::vector<double> betas = {0.4};
    int runs = 10;
    std::uint64_t base_seed = 1;
    bool base_seed_given = false;
    double train_fraction = 0.5;
    unsigned threads = 0;
    std::string json_out;
    std::string csv_out;
    DetectorFlags flags;
};

int cmd_sweep(const SweepArgs& args) {
    driftlab::SweepGrid grid;
    grid.preset = args.preset;
    grid.scale = args.scale;
    grid.deltas = args.deltas;
    grid.betas = args.betas;
    grid.runs = args.runs;
    grid.base_seed = args.base_seed_given ? args.base_seed : fallback_seed() + 1;
    grid.train_fraction = args.train_fraction;
    grid.parallelism = args.threads;

    const auto config = args.flags.to_config();
    grid.detector = config.detector;
    grid.seed_config = config.seed_config;
    grid.volatility = config.volatility;
    grid.network = config.network;

    const auto report = driftlab::sweep(grid);
    const auto json = driftlab::sweep_to_json(report);
    if (args.json_out.empty()) {
        std::cout << json << '\n';
    } else {
        std::ofstream out(args.json_out, std::ios::binary);
        if (!out) throw driftlab::IoError("cannot open output file: " + args.json_out);
        out << json << '\n';
    }
    if (!args.csv_out.empty()) {
        std::ofstream out(args.csv_out, std::ios::binary);
        if (!out) throw driftlab::IoError("cannot open output file: " + args.csv_out);
        out << driftlab::sweep_to_csv(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driftlab: synthetic drift streams, detectors, and evaluation"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic stream and ground truth");
    auto* preset_opt =
        generate->add_option("--preset", gen.preset, "Preset name (abrupt3/5/10, gradual3/5/10)");
    generate->add_option("--scale", gen.scale, "Fraction of the full 1M-instance run")
        ->check(CLI::Range(1e-6, 1.0))
        ->capture_default_str();
    auto* spec_opt =
        generate->add_option("--spec-json", gen.spec_json, "Full generator spec as JSON");
    generate->add_option("--kind", gen.kind_override, "Override drift kind")
        ->check(CLI::IsMember({"abrupt", "gradual"}));
    generate->add_option("--seed", gen.seed, "Stream seed (falls back to DRIFTLAB_SEED)")
        ->each([&gen](const std::string&) { gen.seed_given = true; });
    generate->add_option("--instances", gen.instances_override, "Override total instances");
    generate->add_option("--noise-sd", gen.noise_override, "Override noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    generate->add_option("--out", gen.out, "Values file (one value per line)")->required();
    generate->add_option("--truth-out", gen.truth_out, "Ground-truth CSV")->required();
    generate->add_option("--pattern-changes-out", gen.pattern_changes_out,
                         "Optional pattern-change positions CSV");
    preset_opt->excludes(spec_opt);

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Run a detector over a values file");
    detect->add_option("--in", det.in, "Values file (one value per line)")->required();
    detect->add_option("--out", det.out, "Event log (JSON lines; stdout when omitted)");
    detect
        ->add_option("--aggregate", det.aggregate,
                     "Pre-average non-overlapping windows of this many values "
                     "(use 1 for raw streams)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    detect->add_option("--press-phase", det.press_phase, "Phase for the press detector")
        ->check(CLI::IsMember({"train", "predict"}))
        ->capture_default_str();
    detect->add_flag("--continue-learning", det.continue_learning,
                     "Keep updating the network while predicting");
    detect->add_option("--network-in", det.network_in, "Network snapshot to load");
    detect->add_option("--network-out", det.network_out, "Write network snapshot after the run");
    add_detector_flags(detect, det.flags);

    EvaluateArgs eval;
    auto* evaluate = app.add_subcommand("evaluate", "Score a detector against ground truth");
    evaluate->add_option("--values", eval.values_path, "Values file")->required();
    evaluate->add_option("--truth", eval.truth_path, "Ground-truth CSV")->required();
    evaluate
        ->add_option("--train-fraction", eval.train_fraction,
                     "Leading fraction used for training and excluded from metrics")
        ->check(CLI::Range(0.0, 0.999))
        ->capture_default_str();
    evaluate->add_option("--json-out", eval.json_out, "Metrics JSON (stdout when omitted)");
    evaluate->add_option("--csv-out", eval.csv_out, "Metrics CSV row");
    evaluate->add_option("--log-out", eval.log_out, "Full event log (JSON lines)");
    add_detector_flags(evaluate, eval.flags);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid of seeded experiments on a preset");
    sweep_cmd->add_option("--preset", sw.preset, "Preset name")->capture_default_str();
    sweep_cmd->add_option("--scale", sw.scale, "Fraction of the full 1M-instance run")
        ->check(CLI::Range(1e-6, 1.0))
        ->capture_default_str();
    sweep_cmd->add_option("--deltas", sw.deltas, "Confidence grid")->delimiter(',');
    sweep_cmd->add_option("--betas", sw.betas, "Beta grid (press only)")->delimiter(',');
    sweep_cmd->add_option("--runs", sw.runs, "Seeded runs per cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd->add_option("--base-seed", sw.base_seed, "Seed of run 0 (run i uses base+i)")
        ->each([&sw](const std::string&) { sw.base_seed_given = true; });
    sweep_cmd
        ->add_option("--train-fraction", sw.train_fraction,
                     "Leading fraction used for training and excluded from metrics")
        ->check(CLI::Range(0.0, 0.999))
        ->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0 = hardware)");
    sweep_cmd->add_option("--json-out", sw.json_out, "Report JSON (stdout when omitted)");
    sweep_cmd->add_option("--csv-out", sw.csv_out, "Report CSV (one row per grid cell)");
    add_detector_flags(sweep_cmd, sw.flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFlagError;
    }

    try {
        if (generate->parsed()) {
            if (gen.preset.empty() && gen.spec_json.empty()) {
                std::cerr << "generate: either --preset or --spec-json is required\n";
                return kExitFlagError;
            }
            return cmd_generate(gen);
        }
        if (detect->parsed()) return cmd_detect(det);
        if (evaluate->parsed()) return cmd_evaluate(eval);
        if (sweep_cmd->parsed()) return cmd_sweep(sw);
    } catch (const driftlab::ParseError& e) {
        std::cerr << "parse error at line " << e.line << ": " << e.what() << '\n';
        return kExitParseError;
    } catch (const driftlab::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kExitFlagError;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kExitFlagError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
