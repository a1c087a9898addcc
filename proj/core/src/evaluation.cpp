#include "driftlab/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace driftlab {

namespace {

void require_strictly_increasing(std::span<const std::uint64_t> xs, const char* what) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1])
            throw std::invalid_argument(std::string(what) + " must be strictly increasing");
}

double mean_or_zero(std::span<const std::uint64_t> xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (auto x : xs) sum += static_cast<double>(x);
    return sum / static_cast<double>(xs.size());
}

std::pair<double, double> mean_sd(std::span<const double> xs) {
    if (xs.empty()) return {0.0, 0.0};
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

MatchResult match_detections(std::span<const std::uint64_t> truth,
                             std::span<const std::uint64_t> detections,
                             std::uint64_t stream_end) {
    require_strictly_increasing(truth, "truth positions");
    require_strictly_increasing(detections, "detection indices");

    MatchResult result;
    result.matched_truth.assign(detections.size(), -1);
    std::vector<bool> matched(truth.size(), false);

    for (std::size_t di = 0; di < detections.size(); ++di) {
        const std::uint64_t t = detections[di];
        // Latest true drift at or before t.
        const auto it = std::upper_bound(truth.begin(), truth.end(), t);
        if (it == truth.begin()) {
            ++result.fp;
            continue;
        }
        const std::size_t ti = static_cast<std::size_t>(it - truth.begin()) - 1;
        const std::uint64_t next = ti + 1 < truth.size() ? truth[ti + 1] : stream_end;
        if (!matched[ti] && (t < next || ti + 1 == truth.size())) {
            matched[ti] = true;
            ++result.tp;
            result.delays.push_back(t - truth[ti]);
            result.matched_truth[di] = static_cast<std::int64_t>(ti);
        } else {
            ++result.fp;
        }
    }
    for (bool m : matched)
        if (!m) ++result.fn;
    return result;
}

DetectorRun run_detector_pass(const ExperimentConfig& config, std::span<const double> values,
                              bool keep_events) {
    if (!(config.train_fraction >= 0.0 && config.train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in [0,1)");
    const auto switch_at = static_cast<std::uint64_t>(
        config.train_fraction * static_cast<double>(values.size()));

    DetectorRun run;
    if (config.detector == DetectorKind::Seed) {
        SeedDetector detector(config.seed_config);
        for (double x : values) {
            if (const auto drift = detector.observe(x)) {
                run.detections.push_back(drift->index);
                if (keep_events)
                    run.events.push_back(PressEvent{
                        drift->index, DriftPayload{drift->interval, drift->post_drift_mean}});
            }
        }
        return run;
    }

    PressConfig press;
    press.seed = config.seed_config;
    press.volatility = config.volatility;
    press.network = config.network;
    press.beta = config.beta;
    press.phase = switch_at > 0 ? Phase::Training : Phase::Predicting;
    press.rng_seed = config.detector_seed;
    PressDetector detector(press);
    for (double x : values) {
        if (switch_at > 0 && detector.instances_seen() == switch_at)
            detector.switch_phase(Phase::Predicting);
        for (auto& event : detector.observe(x)) {
            if (event.kind() == PressEvent::Kind::Drift) run.detections.push_back(event.index);
            if (keep_events) run.events.push_back(std::move(event));
        }
    }
    return run;
}

std::vector<std::uint64_t> collect_detections(const ExperimentConfig& config,
                                              std::span<const double> values) {
    return run_detector_pass(config, values).detections;
}

Metrics score_detections(std::span<const std::uint64_t> detections, const GroundTruth& truth,
                         std::uint64_t instances, std::uint64_t split) {
    std::vector<std::uint64_t> scored_truth;
    for (std::uint64_t d : truth.drift_positions)
        if (d >= split) scored_truth.push_back(d);
    std::vector<std::uint64_t> scored_detections;
    for (std::uint64_t t : detections)
        if (t > split) scored_detections.push_back(t);

    const auto match = match_detections(scored_truth, scored_detections, instances);

    Metrics m;
    m.fp = match.fp;
    m.tp = match.tp;
    m.fn = match.fn;
    m.true_drifts = scored_truth.size();
    m.instances = instances - split;
    m.no_true_drifts = scored_truth.empty();
    m.fp_rate = m.instances > 0 ? static_cast<double>(m.fp) / static_cast<double>(m.instances) : 0.0;
    m.tp_rate = m.no_true_drifts
                    ? 0.0
                    : static_cast<double>(m.tp) / static_cast<double>(m.true_drifts);
    m.mean_delay = mean_or_zero(match.delays);
    return m;
}

Metrics run_experiment(const ExperimentConfig& config, std::span<const double> values,
                       const GroundTruth& truth) {
    const std::uint64_t n = values.size();
    const auto split =
        static_cast<std::uint64_t>(config.train_fraction * static_cast<double>(n));
    const auto detections = run_detector_pass(config, values).detections;
    return score_detections(detections, truth, n, split);
}

SweepReport sweep(const SweepGrid& grid) {
    if (grid.deltas.empty() || grid.betas.empty() || grid.runs < 1)
        throw std::invalid_argument("sweep: grid must be non-empty with runs >= 1");

    struct Task {
        std::size_t cell;
        double delta;
        double beta;
        int run;
    };
    std::vector<Task> tasks;
    const std::size_t cells = grid.deltas.size() * grid.betas.size();
    for (std::size_t ci = 0; ci < cells; ++ci) {
        const double delta = grid.deltas[ci / grid.betas.size()];
        const double beta = grid.betas[ci % grid.betas.size()];
        for (int run = 0; run < grid.runs; ++run) tasks.push_back({ci, delta, beta, run});
    }

    std::vector<Metrics> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            GeneratorSpec spec = paper_preset(grid.preset, grid.scale);
            spec.seed = grid.base_seed + static_cast<std::uint64_t>(task.run);
            const auto stream = generate(spec);

            ExperimentConfig config;
            config.detector = grid.detector;
            config.seed_config = grid.seed_config;
            config.seed_config.delta = task.delta;
            config.volatility = grid.volatility;
            config.network = grid.network;
            config.beta = task.beta;
            config.train_fraction = grid.train_fraction;
            config.detector_seed = spec.seed;
            results[i] = run_experiment(config, stream.values, stream.truth);
        }
    };

    unsigned workers = grid.parallelism > 0 ? grid.parallelism
                                            : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SweepReport report;
    report.grid = grid;
    for (std::size_t ci = 0; ci < cells; ++ci) {
        std::vector<double> fp_rates, tp_rates, delays, fps, tps, fns;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].cell != ci) continue;
            fp_rates.push_back(results[i].fp_rate);
            tp_rates.push_back(results[i].tp_rate);
            delays.push_back(results[i].mean_delay);
            fps.push_back(static_cast<double>(results[i].fp));
            tps.push_back(static_cast<double>(results[i].tp));
            fns.push_back(static_cast<double>(results[i].fn));
        }
        SweepRow row;
        row.delta = grid.deltas[ci / grid.betas.size()];
        row.beta = grid.betas[ci % grid.betas.size()];
        row.runs = grid.runs;
        std::tie(row.fp_rate_mean, row.fp_rate_sd) = mean_sd(fp_rates);
        std::tie(row.tp_rate_mean, row.tp_rate_sd) = mean_sd(tp_rates);
        std::tie(row.delay_mean, row.delay_sd) = mean_sd(delays);
        row.fp_mean = mean_sd(fps).first;
        row.tp_mean = mean_sd(tps).first;
        row.fn_mean = mean_sd(fns).first;
        report.rows.push_back(row);
    }
    return report;
}

TercileReport severity_tercile_report(std::span<const std::uint64_t> truth,
                                      std::span<const double> magnitudes,
                                      std::span<const std::uint64_t> detections,
                                      std::uint64_t stream_end) {
    if (truth.size() != magnitudes.size())
        throw std::invalid_argument("tercile report: positions and magnitudes must align");
    if (truth.empty()) return {};

    const auto match = match_detections(truth, detections, stream_end);

    // Delay (when matched) and miss flag per true drift.
    std::vector<std::optional<std::uint64_t>> delay_of(truth.size());
    for (std::size_t di = 0; di < detections.size(); ++di) {
        const std::int64_t ti = match.matched_truth[di];
        if (ti >= 0) delay_of[static_cast<std::size_t>(ti)] = detections[di] - truth[ti];
    }

    // Equal-size rank terciles; magnitude ties resolve by stream order.
    std::vector<std::size_t> order(truth.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return magnitudes[a] < magnitudes[b];
    });

    TercileReport report;
    const auto account = [&](TercileStats& stats, std::size_t ti) {
        ++stats.drifts;
        if (delay_of[ti])
            stats.mean_delay += static_cast<double>(*delay_of[ti]);
        else
            ++stats.fn;
    };
    const std::size_t n = order.size();
    for (std::size_t rank = 0; rank < n; ++rank) {
        const std::size_t ti = order[rank];
        if (rank < n / 3)
            account(report.low, ti);
        else if (rank < 2 * n / 3)
            account(report.mid, ti);
        else
            account(report.high, ti);
    }
    for (TercileStats* stats : {&report.low, &report.mid, &report.high}) {
        const std::uint64_t detected = stats->drifts - stats->fn;
        stats->mean_delay = detected > 0 ? stats->mean_delay / static_cast<double>(detected) : 0.0;
        stats->fn_rate = stats->drifts > 0
                             ? static_cast<double>(stats->fn) / static_cast<double>(stats->drifts)
                             : 0.0;
    }
    return report;
}

namespace {

nlohmann::ordered_json metrics_json(const Metrics& m) {
    nlohmann::ordered_json doc;
    doc["fp_rate"] = m.fp_rate;
    doc["tp_rate"] = m.tp_rate;
    doc["mean_delay"] = m.mean_delay;
    doc["fp"] = m.fp;
    doc["tp"] = m.tp;
    doc["fn"] = m.fn;
    doc["true_drifts"] = m.true_drifts;
    doc["instances"] = m.instances;
    doc["no_true_drifts"] = m.no_true_drifts;
    return doc;
}

}  // namespace

std::string metrics_to_json(const Metrics& m) { return metrics_json(m).dump(2); }

std::string sweep_to_json(const SweepReport& report) {
    nlohmann::ordered_json doc;
    doc["preset"] = report.grid.preset;
    doc["scale"] = report.grid.scale;
    doc["detector"] = report.grid.detector == DetectorKind::Press ? "press" : "seed";
    doc["runs"] = report.grid.runs;
    doc["base_seed"] = report.grid.base_seed;
    doc["train_fraction"] = report.grid.train_fraction;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["delta"] = row.delta;
        r["beta"] = row.beta;
        r["runs"] = row.runs;
        r["fp_rate_mean"] = row.fp_rate_mean;
        r["fp_rate_sd"] = row.fp_rate_sd;
        r["tp_rate_mean"] = row.tp_rate_mean;
        r["tp_rate_sd"] = row.tp_rate_sd;
        r["delay_mean"] = row.delay_mean;
        r["delay_sd"] = row.delay_sd;
        r["fp_mean"] = row.fp_mean;
        r["tp_mean"] = row.tp_mean;
        r["fn_mean"] = row.fn_mean;
        rows.push_back(std::move(r));
    }
    return doc.dump(2);
}

std::string sweep_to_csv(const SweepReport& report) {
    std::string out =
        "preset,detector,delta,beta,runs,fp_rate_mean,fp_rate_sd,tp_rate_mean,tp_rate_sd,"
        "delay_mean,delay_sd,fp_mean,tp_mean,fn_mean\n";
    const std::string detector =
        report.grid.detector == DetectorKind::Press ? "press" : "seed";
    for (const auto& row : report.rows) {
        nlohmann::json fields = {row.delta,        row.beta,       row.runs,
                                 row.fp_rate_mean, row.fp_rate_sd, row.tp_rate_mean,
                                 row.tp_rate_sd,   row.delay_mean, row.delay_sd,
                                 row.fp_mean,      row.tp_mean,    row.fn_mean};
        out += report.grid.preset;
        out += ',';
        out += detector;
        for (const auto& f : fields) {
            out += ',';
            out += f.dump();
        }
        out += '\n';
    }
    return out;
}

}  // namespace driftlab
