#include "orbbuf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "orbbuf/errors.hpp"
#include "orbbuf/pgm.hpp"
#include "orbbuf/report.hpp"
#include "orbbuf/rng.hpp"
#include "orbbuf/stats.hpp"
#include "orbbuf/svg.hpp"
#include "orbbuf/synthetic.hpp"

namespace orbbuf {
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = item.find_last_not_of(" \t");
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

fs::path prepare_out_dir(const RunConfig& config, const std::string& command) {
  const fs::path dir = fs::path(config.out_dir) / config.run_id(command);
  fs::create_directories(dir);
  write_text_file((dir / "effective_config.txt").string(), config.canonical_text(command));
  return dir;
}

void dump_pattern_sidecar(const RunConfig& config, const fs::path& dir) {
  const auto pattern = BriefPattern::from_seed(config.pattern_seed);
  std::ostringstream out;
  out << "# descriptor test pairs: px py qx qy (seed " << config.pattern_seed << ")\n";
  for (const auto& p : pattern.pairs)
    out << p[0] << ' ' << p[1] << ' ' << p[2] << ' ' << p[3] << '\n';
  write_text_file((dir / "brief_pattern.txt").string(), out.str());
}

std::string events_to_csv(const SimResult& result) {
  std::ostringstream out;
  out << "event,frame,t_ms\n";
  for (const auto& r : result.received) out << "received," << r.id << ',' << fmt(r.t_ms) << '\n';
  for (const auto& d : result.dropped) out << "dropped," << d.id << ',' << fmt(d.t_ms) << '\n';
  for (const auto id : result.buffered_at_end) out << "buffered_at_end," << id << ",\n";
  for (const auto id : result.in_flight_at_end) out << "in_flight_at_end," << id << ",\n";
  return out.str();
}

std::string timings_to_csv(const SimResult& result) {
  std::ostringstream out;
  out << "arrival,enqueue_ms,updates\n";
  for (std::size_t i = 0; i < result.enqueue_times_ms.size(); ++i)
    out << i << ',' << fmt(result.enqueue_times_ms[i]) << ',' << result.updates_per_arrival[i]
        << '\n';
  return out.str();
}

std::string profile_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "pair,similarity\n";
  for (std::size_t i = 0; i < report.adjacent_similarities.size(); ++i)
    out << i << ',' << report.adjacent_similarities[i] << '\n';
  return out.str();
}

std::string histogram_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "id_gap,count\n";
  for (const auto& [gap, count] : report.distance_histogram) out << gap << ',' << count << '\n';
  return out.str();
}

void write_run_artifacts(const fs::path& dir, const std::string& stem, const SimResult& result,
                         const ExperimentReport& report) {
  write_text_file((dir / (stem + "_events.csv")).string(), events_to_csv(result));
  write_text_file((dir / (stem + "_report.csv")).string(), report_to_csv(report));
  write_text_file((dir / (stem + "_profile.csv")).string(), profile_to_csv(report));
  write_text_file((dir / (stem + "_histogram.csv")).string(), histogram_to_csv(report));
  write_text_file((dir / (stem + "_timings.csv")).string(), timings_to_csv(result));

  SvgSeries sims;
  sims.label = report.policy;
  sims.color = "steelblue";
  for (std::size_t i = 0; i < report.adjacent_similarities.size(); ++i) {
    sims.x.push_back(static_cast<double>(i));
    sims.y.push_back(static_cast<double>(report.adjacent_similarities[i]));
  }
  write_text_file((dir / (stem + "_profile.svg")).string(),
                  render_chart("Adjacent similarity of received frames", "received pair",
                               "similarity", {sims}));

  std::vector<double> gx, gh;
  for (const auto& [gap, count] : report.distance_histogram) {
    gx.push_back(static_cast<double>(gap));
    gh.push_back(static_cast<double>(count));
  }
  write_text_file((dir / (stem + "_histogram.svg")).string(),
                  render_histogram("Received id gaps", "id gap", "count", gx, gh));
}

SimResult run_once(const RunConfig& config, const FrameSequence& sequence, const LinkTrace& trace,
                   Policy policy) {
  SimOptions options;
  options.policy = policy;
  options.capacity_frames = config.capacity_frames();
  options.compression_ratio = config.ratio;
  options.feature_config = config.feature_config();
  options.seed = config.seed;
  return simulate(sequence, trace, options);
}

}  // namespace

FeatureConfig RunConfig::feature_config() const {
  FeatureConfig fc;
  fc.fast_threshold = fast_threshold;
  fc.max_keypoints = max_keypoints;
  fc.patch_radius = patch_radius;
  fc.match_max_hamming = match_max_hamming;
  fc.pattern_seed = pattern_seed;
  return fc;
}

std::size_t RunConfig::capacity_frames() const {
  if (capacity.empty()) throw UsageError("empty capacity");
  std::size_t idx = 0;
  double v = 0.0;
  try {
    v = std::stod(capacity, &idx);
  } catch (const std::exception&) {
    throw UsageError("bad capacity '" + capacity + "'");
  }
  if (idx == capacity.size() - 1 && capacity.back() == 's') {
    const double frames = std::ceil(v * fps);
    if (frames < 1.0) throw UsageError("capacity below one frame");
    return static_cast<std::size_t>(frames);
  }
  if (idx != capacity.size() || v < 1.0 || v != std::floor(v))
    throw UsageError("capacity must be a whole frame count or seconds with an 's' suffix");
  return static_cast<std::size_t>(v);
}

std::vector<std::uint64_t> RunConfig::seed_list() const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_csv_list(seeds)) out.push_back(std::stoull(item));
  if (out.empty()) throw UsageError("empty seed list");
  return out;
}

std::vector<std::size_t> RunConfig::capacity_list() const {
  std::vector<std::size_t> out;
  for (const auto& item : split_csv_list(capacities)) out.push_back(std::stoull(item));
  if (out.empty()) throw UsageError("empty capacity list");
  return out;
}

std::vector<Policy> RunConfig::policy_list() const {
  std::vector<Policy> out;
  for (const auto& item : split_csv_list(policies)) out.push_back(parse_policy(item));
  if (out.empty()) throw UsageError("empty policy list");
  return out;
}

// Only keys the named subcommand actually accepts, so the file can be fed
// back through --config to replay the run.
std::string RunConfig::canonical_text(const std::string& command) const {
  std::map<std::string, std::string> kv;
  kv["command"] = command;
  kv["seq-dir"] = seq_dir;
  kv["synth-width"] = std::to_string(synth_width);
  kv["synth-height"] = std::to_string(synth_height);
  kv["synth-frames"] = std::to_string(synth_frames);
  kv["synth-density"] = fmt(synth_density);
  kv["synth-shift"] = fmt(synth_shift);
  kv["synth-noise"] = fmt(synth_noise);
  kv["fps"] = fmt(fps);
  kv["seed"] = std::to_string(seed);
  if (command != "gen") {
    kv["fast-threshold"] = std::to_string(fast_threshold);
    kv["max-keypoints"] = std::to_string(max_keypoints);
    kv["patch-radius"] = std::to_string(patch_radius);
    kv["match-max-hamming"] = std::to_string(match_max_hamming);
    kv["pattern-seed"] = std::to_string(pattern_seed);
    kv["trace"] = trace_path;
    kv["const-bw"] = fmt(const_bw);
    kv["intr-frame"] = std::to_string(intr_frame);
    kv["intr-latency-ms"] = fmt(intr_latency_ms);
    kv["intr-duration-frames"] = std::to_string(intr_duration_frames);
    kv["ratio"] = fmt(ratio);
    kv["capacity"] = capacity;
  }
  if (command == "run") kv["policy"] = policy;
  if (command == "compare") kv["policies"] = policies;
  if (command == "study") {
    kv["kind"] = study_kind;
    kv["lo"] = std::to_string(study_lo);
    kv["hi"] = std::to_string(study_hi);
    kv["max-k"] = std::to_string(study_max_k);
    kv["threshold"] = fmt(study_threshold);
    kv["capacities"] = capacities;
    kv["policies"] = policies;
    kv["seeds"] = seeds;
  }

  std::ostringstream out;
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
  return out.str();
}

std::string RunConfig::run_id(const std::string& command) const {
  const std::string text = canonical_text(command);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text.data(), text.size())));
  return buf;
}

FrameSequence load_input_sequence(const RunConfig& config) {
  if (!config.seq_dir.empty()) return load_sequence(config.seq_dir, config.fps);
  SyntheticParams params;
  params.width = config.synth_width;
  params.height = config.synth_height;
  params.n_frames = config.synth_frames;
  params.dot_density = config.synth_density;
  params.shift_px_per_frame = config.synth_shift;
  params.noise_sigma = config.synth_noise;
  params.seed = config.seed;
  return gen_synthetic(params, config.fps);
}

LinkTrace build_trace(const RunConfig& config) {
  LinkTrace trace;
  if (!config.trace_path.empty()) {
    trace = load_trace(config.trace_path);
  } else if (config.const_bw > 0.0) {
    trace.points.push_back({0.0, config.const_bw});
  } else {
    throw UsageError("either --trace or a positive --const-bw is required");
  }
  if (config.intr_frame >= 0) {
    InterruptionSpec spec;
    spec.at_frame = static_cast<std::uint64_t>(config.intr_frame);
    spec.latency_ms = config.intr_latency_ms;
    spec.duration_frames = config.intr_duration_frames;
    trace = apply_interruption(trace, spec, config.fps);
  }
  return trace;
}

int cmd_gen(const RunConfig& config) {
  const FrameSequence sequence = load_input_sequence(config);
  fs::create_directories(config.out_dir);
  for (const auto& frame : sequence.frames) {
    char name[32];
    std::snprintf(name, sizeof name, "%06llu.pgm", static_cast<unsigned long long>(frame.id));
    write_pgm(frame, (fs::path(config.out_dir) / name).string());
  }
  std::ostringstream params;
  params << "width = " << config.synth_width << "\nheight = " << config.synth_height
         << "\nframes = " << config.synth_frames << "\ndensity = " << fmt(config.synth_density)
         << "\nshift = " << fmt(config.synth_shift) << "\nnoise = " << fmt(config.synth_noise)
         << "\nseed = " << config.seed << "\nfps = " << fmt(config.fps) << '\n';
  write_text_file((fs::path(config.out_dir) / "params.txt").string(), params.str());
  std::cout << "wrote " << sequence.frames.size() << " frames to " << config.out_dir << '\n';
  return 0;
}

int cmd_run(const RunConfig& config) {
  const FrameSequence sequence = load_input_sequence(config);
  const LinkTrace trace = build_trace(config);
  const Policy policy = parse_policy(config.policy);
  const fs::path dir = prepare_out_dir(config, "run");
  dump_pattern_sidecar(config, dir);

  const SimResult result = run_once(config, sequence, trace, policy);
  const ExperimentReport report =
      build_report(result, sequence, config.feature_config(), policy_name(policy));
  write_run_artifacts(dir, policy_name(policy), result, report);

  std::cout << "run " << dir.filename().string() << " policy=" << report.policy
            << " received=" << report.received_count << " dropped=" << report.dropped_count
            << " max_loss_run=" << report.max_loss_run << " min_similarity="
            << (report.min_similarity ? std::to_string(*report.min_similarity) : "na") << '\n';
  return 0;
}

int cmd_compare(const RunConfig& config) {
  if (config.policy_list().size() < 2) throw UsageError("compare needs at least two policies");
  const FrameSequence sequence = load_input_sequence(config);
  const LinkTrace trace = build_trace(config);
  const fs::path dir = prepare_out_dir(config, "compare");
  dump_pattern_sidecar(config, dir);

  std::ostringstream table;
  table << "policy,received,dropped,max_loss_run,min_similarity,log_product_similarity,"
           "zero_similarity_count,extractions\n";
  for (const Policy policy : config.policy_list()) {
    const SimResult result = run_once(config, sequence, trace, policy);
    const ExperimentReport report =
        build_report(result, sequence, config.feature_config(), policy_name(policy));
    write_run_artifacts(dir, policy_name(policy), result, report);
    table << report.policy << ',' << report.received_count << ',' << report.dropped_count << ','
          << report.max_loss_run << ','
          << (report.min_similarity ? std::to_string(*report.min_similarity) : "na") << ','
          << fmt(report.log_product_similarity) << ',' << report.zero_similarity_count << ','
          << report.extraction_count << '\n';
  }
  write_text_file((dir / "compare.csv").string(), table.str());
  std::cout << table.str();
  return 0;
}

int cmd_study(const RunConfig& config) {
  const fs::path dir = prepare_out_dir(config, "study-" + config.study_kind);

  if (config.study_kind == "distance") {
    const FrameSequence sequence = load_input_sequence(config);
    const auto rows =
        distance_similarity_study(sequence, config.study_lo, config.study_hi,
                                  config.feature_config());
    write_text_file((dir / "distance_study.csv").string(), distance_study_to_csv(rows));

    SvgSeries scatter;
    scatter.label = "pair";
    scatter.color = "steelblue";
    scatter.scatter = true;
    std::map<std::uint64_t, std::pair<double, std::uint64_t>> by_distance;
    for (const auto& row : rows) {
      scatter.x.push_back(static_cast<double>(row.distance));
      scatter.y.push_back(static_cast<double>(row.similarity));
      auto& acc = by_distance[row.distance];
      acc.first += row.similarity;
      acc.second += 1;
    }
    SvgSeries mean;
    mean.label = "mean";
    mean.color = "crimson";
    for (const auto& [d, acc] : by_distance) {
      mean.x.push_back(static_cast<double>(d));
      mean.y.push_back(acc.first / static_cast<double>(acc.second));
    }
    write_text_file((dir / "distance_study.svg").string(),
                    render_chart("Similarity against frame distance", "frame distance",
                                 "similarity", {scatter, mean}));
    std::cout << "distance study: " << rows.size() << " pairs, results in " << dir.string()
              << '\n';
    return 0;
  }

  if (config.study_kind == "loss") {
    const FrameSequence sequence = load_input_sequence(config);
    const auto rows = loss_tolerance_study(sequence, config.study_max_k, config.feature_config(),
                                           config.study_threshold);
    write_text_file((dir / "loss_tolerance.csv").string(), loss_tolerance_to_csv(rows));
    SvgSeries ks;
    ks.label = "min burst";
    ks.color = "steelblue";
    for (const auto& row : rows) {
      if (!row.min_k) continue;
      ks.x.push_back(static_cast<double>(row.start));
      ks.y.push_back(static_cast<double>(*row.min_k));
    }
    write_text_file((dir / "loss_tolerance.svg").string(),
                    render_chart("Loss burst tolerance by position", "first lost frame",
                                 "smallest breaching burst", {ks}));
    std::cout << "loss tolerance study: " << rows.size() << " starts, results in " << dir.string()
              << '\n';
    return 0;
  }

  if (config.study_kind == "buffer-size") {
    if (!config.seq_dir.empty())
      throw UsageError("buffer-size study generates its own sequences; drop --seq-dir");
    const LinkTrace trace = build_trace(config);
    SyntheticParams params;
    params.width = config.synth_width;
    params.height = config.synth_height;
    params.n_frames = config.synth_frames;
    params.dot_density = config.synth_density;
    params.shift_px_per_frame = config.synth_shift;
    params.noise_sigma = config.synth_noise;
    const auto cells = buffer_size_sweep(params, config.fps, trace, config.policy_list(),
                                         config.capacity_list(), config.seed_list(), config.ratio,
                                         config.feature_config(), config.jobs);
    write_text_file((dir / "buffer_size_sweep.csv").string(), sweep_to_csv(cells));

    // Median min-similarity across seeds, one line per policy.
    std::map<std::string, std::map<std::size_t, std::vector<double>>> grouped;
    for (const auto& cell : cells)
      if (cell.min_similarity)
        grouped[cell.policy][cell.capacity].push_back(static_cast<double>(*cell.min_similarity));
    const char* palette[] = {"steelblue", "crimson", "seagreen", "darkorange"};
    std::vector<SvgSeries> lines;
    std::size_t color = 0;
    for (auto& [policy, by_cap] : grouped) {
      SvgSeries line;
      line.label = policy;
      line.color = palette[color++ % 4];
      for (auto& [cap, values] : by_cap) {
        line.x.push_back(static_cast<double>(cap));
        line.y.push_back(median(values));
      }
      lines.push_back(std::move(line));
    }
    write_text_file((dir / "buffer_size_sweep.svg").string(),
                    render_chart("Median min-similarity against buffer capacity", "capacity",
                                 "median min-similarity", lines));
    std::cout << "buffer-size sweep: " << cells.size() << " cells, results in " << dir.string()
              << '\n';
    return 0;
  }

  throw UsageError("unknown study kind '" + config.study_kind +
                   "', expected distance | loss | buffer-size");
}

}  // namespace orbbuf
