#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <utility>

#include "CLI11.hpp"
#include "orbbuf/errors.hpp"

namespace orbbuf {

namespace {

std::string trimmed(const std::string& text) {
  const auto a = text.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = text.find_last_not_of(" \t");
  return text.substr(a, b - a + 1);
}

// Plain "key = value" lines; '#' starts a comment, blank lines are skipped.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trimmed(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty())
      throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    entries.push_back({key, value});
  }
  return entries;
}

// File values fill in options the command line left untouched, so flags
// override the file and the file overrides built-in defaults.
void apply_config_file(CLI::App* sub, const std::string& path) {
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config") throw UsageError("config files cannot name another config file");
    if (key == "command") continue;  // effective_config.txt records it; harmless on replay
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

void add_input_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seq-dir", c.seq_dir, "directory of .pgm frames (omit for synthetic input)");
  sub->add_option("--synth-width", c.synth_width)->check(CLI::PositiveNumber);
  sub->add_option("--synth-height", c.synth_height)->check(CLI::PositiveNumber);
  sub->add_option("--synth-frames", c.synth_frames)->check(CLI::PositiveNumber);
  sub->add_option("--synth-density", c.synth_density)->check(CLI::Range(0.0, 1.0));
  sub->add_option("--synth-shift", c.synth_shift);
  sub->add_option("--synth-noise", c.synth_noise)->check(CLI::NonNegativeNumber);
  sub->add_option("--fps", c.fps)->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed);
}

void add_feature_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--fast-threshold", c.fast_threshold);
  sub->add_option("--max-keypoints", c.max_keypoints);
  sub->add_option("--patch-radius", c.patch_radius);
  sub->add_option("--match-max-hamming", c.match_max_hamming);
  sub->add_option("--pattern-seed", c.pattern_seed);
}

void add_link_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--trace", c.trace_path, "bandwidth trace file of t_ms,bytes_per_second lines");
  sub->add_option("--const-bw", c.const_bw, "constant link bandwidth in bytes per second");
  sub->add_option("--intr-frame", c.intr_frame, "frame index at which the link drops out");
  sub->add_option("--intr-latency-ms", c.intr_latency_ms);
  sub->add_option("--intr-duration-frames", c.intr_duration_frames);
  sub->add_option("--ratio", c.ratio, "encoded bytes per pixel")->check(CLI::PositiveNumber);
  sub->add_option("--capacity", c.capacity, "buffer size in frames, or seconds with an s suffix");
}

CLI::App* add_subcommand(CLI::App& app, RunConfig& c, std::string& config_path,
                         const std::string& name, const std::string& help) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", config_path, "key = value file with the same keys as the flags");
  sub->add_option("--out", c.out_dir, "root directory for outputs");
  add_input_flags(sub, c);
  return sub;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  RunConfig config;
  std::string config_path;
  CLI::App app{"similarity-aware frame buffering over unstable links"};
  app.require_subcommand(1);

  CLI::App* gen = add_subcommand(app, config, config_path, "gen", "write a synthetic sequence as .pgm files");

  CLI::App* run = add_subcommand(app, config, config_path, "run", "simulate one policy over one link");
  add_feature_flags(run, config);
  add_link_flags(run, config);
  run->add_option("--policy", config.policy,
                  "drop-oldest | drop-youngest | random | orbbuf");

  CLI::App* compare =
      add_subcommand(app, config, config_path, "compare", "run several policies over the same input and link");
  add_feature_flags(compare, config);
  add_link_flags(compare, config);
  compare->add_option("--policies", config.policies, "comma separated policy list");

  CLI::App* study = add_subcommand(app, config, config_path, "study",
                                   "offline measurements: distance | loss | buffer-size");
  add_feature_flags(study, config);
  add_link_flags(study, config);
  study->add_option("--kind", config.study_kind, "distance | loss | buffer-size");
  study->add_option("--lo", config.study_lo, "first frame of the distance window");
  study->add_option("--hi", config.study_hi, "last frame of the distance window");
  study->add_option("--max-k", config.study_max_k, "largest loss burst to probe");
  study->add_option("--threshold", config.study_threshold,
                    "similarity floor; negative picks one from the sequence itself");
  study->add_option("--capacities", config.capacities, "comma separated capacity list");
  study->add_option("--policies", config.policies, "comma separated policy list");
  study->add_option("--seeds", config.seeds, "comma separated seed list");
  study->add_option("--jobs", config.jobs, "parallel sweep workers")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    CLI::App* active = nullptr;
    for (CLI::App* sub : {gen, run, compare, study})
      if (app.got_subcommand(sub)) active = sub;
    if (!config_path.empty()) apply_config_file(active, config_path);

    if (active == gen) return cmd_gen(config);
    if (active == run) return cmd_run(config);
    if (active == compare) return cmd_compare(config);
    if (active == study) return cmd_study(config);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace orbbuf
