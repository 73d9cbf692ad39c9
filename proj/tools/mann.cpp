/*
 * Copyright 2026 The MannLab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line entry point: train/eval/trace/suite/param-count/gen-data.
// Exit codes: 0 success, 2 configuration error, 3 training diverged.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "mann/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
  std::string preset;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "key=value config file (flags override it)");
    cmd->add_option("--preset", preset, "named profile: desk | full");
    static const std::pair<const char*, const char*> keys[] = {
        {"--model", "model"},
        {"--controller", "controller"},
        {"--task", "task"},
        {"--hidden", "hidden"},
        {"--mem-rows", "mem_rows"},
        {"--mem-cols", "mem_cols"},
        {"--read-heads", "read_heads"},
        {"--t-min", "t_min"},
        {"--t-max", "t_max"},
        {"--m-min", "m_min"},
        {"--m-max", "m_max"},
        {"--iterations", "iterations"},
        {"--val-interval", "val_interval"},
        {"--val-size", "val_size"},
        {"--test-size", "test_size"},
        {"--lr", "lr"},
        {"--momentum", "momentum"},
        {"--clip", "clip"},
        {"--rms-decay", "rms_decay"},
        {"--rms-damping", "rms_damping"},
        {"--seed", "seed"},
        {"--data-dir", "data_dir"},
        {"--jobs", "jobs"},
    };
    for (const auto& [flag, key] : keys)
      options[key] = cmd->add_option(flag, values[key], std::string("config key ") + key);
  }

  // defaults -> preset -> file -> explicit flags
  mann::ExperimentConfig build() const {
    mann::ExperimentConfig cfg;
    if (!preset.empty()) mann::apply_preset(cfg, preset);
    if (!config_file.empty()) mann::load_config_file(cfg, config_file);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) mann::set_config_field(cfg, key, values.at(key));
    return mann::finalize(cfg);
  }
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text, int num_seeds) {
  std::vector<std::uint64_t> seeds;
  if (!text.empty()) {
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ','))
      if (!token.empty()) seeds.push_back(std::stoull(token));
  } else {
    for (int i = 1; i <= num_seeds; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
  }
  if (seeds.empty()) throw mann::ConfigError("suite needs at least one seed");
  return seeds;
}

int cmd_train(const mann::ExperimentConfig& cfg, const std::string& metrics_path,
              const std::string& checkpoint_path, bool quiet) {
  mann::DataSource data(cfg);
  mann::Model model(mann::model_spec_from(cfg, data.vocab_size()));
  model.init_params(cfg.seed);
  std::cerr << "training " << mann::config_summary(cfg) << "\n";

  mann::TrainResult res = mann::train(model, data, cfg, quiet ? nullptr : &std::cerr);
  if (!metrics_path.empty()) mann::write_metrics_csv(metrics_path, res.metrics);
  mann::restore_snapshot(model.params(), res.best);
  if (!checkpoint_path.empty()) mann::save_checkpoint(model.params(), checkpoint_path);

  std::cout << "best_iteration=" << res.best_iteration << " best_val_loss=" << res.best_val_loss
            << (res.diverged ? " DIVERGED" : "") << "\n";
  return res.diverged ? kExitDiverged : kExitOk;
}

int cmd_eval(const mann::ExperimentConfig& cfg, const std::string& checkpoint_path,
             std::uint64_t eval_seed) {
  mann::DataSource data(cfg);
  mann::Model model(mann::model_spec_from(cfg, data.vocab_size()));
  mann::load_checkpoint(model.params(), checkpoint_path);

  if (mann::is_babi(cfg)) {
    mann::BabiEval eval = mann::evaluate_babi_error(model, data);
    for (const auto& [task_id, err] : eval.per_task)
      std::cout << "task " << task_id << ": " << err << "%\n";
    std::cout << "mean_error=" << eval.mean_error << "% over " << eval.questions
              << " questions\n";
  } else {
    const double err = mann::evaluate_bit_error(model, cfg, cfg.test_size, eval_seed);
    std::cout << "bit_error=" << err << "% over " << cfg.test_size << " samples\n";
  }
  return kExitOk;
}

int cmd_trace(const mann::ExperimentConfig& cfg, const std::string& checkpoint_path,
              const std::string& out_path, std::uint64_t sample_seed) {
  if (mann::is_babi(cfg)) throw mann::ConfigError("trace supports the toy tasks");
  mann::Model model(mann::model_spec_from(cfg));
  if (!checkpoint_path.empty())
    mann::load_checkpoint(model.params(), checkpoint_path);
  else
    model.init_params(cfg.seed);

  mann::Rng rng(mann::derive_seed(sample_seed, 0x7c));
  mann::TaskSample sample =
      mann::gen_toy(mann::toy_from_string(cfg.task), rng,
                    mann::ToyRange{cfg.t_min, cfg.t_max, cfg.m_min, cfg.m_max});

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open trace output: " + out_path);
    out = &file;
  }
  mann::dump_trace(model, sample, mann::loss_kind_for(cfg), mann::config_summary(cfg), *out);
  return kExitOk;
}

int cmd_suite(const mann::ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  std::cerr << "suite " << mann::config_summary(cfg) << " over " << seeds.size() << " seeds\n";
  mann::SuiteReport rep = mann::run_suite(cfg, seeds, &std::cout);
  for (const auto& row : rep.rows)
    if (!row.ok) std::cerr << "seed " << row.seed << " failed: " << row.error << "\n";
  return kExitOk;
}

int cmd_param_count(const mann::ExperimentConfig& cfg) {
  int vocab = 0;
  std::unique_ptr<mann::DataSource> data;
  if (mann::is_babi(cfg)) {
    data = std::make_unique<mann::DataSource>(cfg);
    vocab = data->vocab_size();
  }
  mann::Model model(mann::model_spec_from(cfg, vocab));
  const auto& store = model.params();
  std::cout << "controller: " << store.param_count("controller.") << "\n";
  std::cout << "heads:      " << store.param_count("heads.") << "\n";
  std::cout << "output:     " << store.param_count("output.") << "\n";
  std::cout << "total:      " << store.param_count() << "\n";
  return kExitOk;
}

int cmd_gen_data(const mann::ExperimentConfig& cfg, const std::string& out_path, long count,
                 long test_count, std::uint64_t seed) {
  if (out_path.empty()) throw mann::ConfigError("gen-data requires --out");
  if (mann::is_babi(cfg)) {
    mann::babi_write_synthetic(out_path, static_cast<int>(count), static_cast<int>(test_count),
                               seed);
    std::cout << "wrote synthetic six-task corpus under " << out_path << "/en-10k (" << count
              << " train / " << test_count << " test stories per task)\n";
  } else {
    mann::Rng rng(mann::derive_seed(seed, mann::kTrainStreamTag));
    const mann::ToyRange range{cfg.t_min, cfg.t_max, cfg.m_min, cfg.m_max};
    const mann::ToyTask task = mann::toy_from_string(cfg.task);
    std::vector<mann::TaskSample> samples;
    samples.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) samples.push_back(mann::gen_toy(task, rng, range));
    mann::write_toy_cache(out_path, samples);
    std::cout << "wrote " << count << " " << cfg.task << " samples to " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory-augmented neural network lab (NTM / DNC)"};
  app.require_subcommand(1);

  FlagSet train_flags, eval_flags, trace_flags, suite_flags, count_flags, gen_flags;

  auto* train_cmd = app.add_subcommand("train", "online training with periodic validation");
  train_flags.attach(train_cmd);
  std::string metrics_path, checkpoint_path;
  bool quiet = false;
  train_cmd->add_option("--metrics", metrics_path, "write the metrics CSV here");
  train_cmd->add_option("--checkpoint", checkpoint_path, "write the best checkpoint here");
  train_cmd->add_flag("--quiet", quiet, "suppress per-validation log lines");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on the test stream");
  eval_flags.attach(eval_cmd);
  std::string eval_checkpoint;
  std::uint64_t eval_seed = mann::kTestStreamSeed;
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint to evaluate")->required();
  eval_cmd->add_option("--eval-seed", eval_seed, "seed of the test sample stream");

  auto* trace_cmd = app.add_subcommand("trace", "dump a per-step trace of one episode");
  trace_flags.attach(trace_cmd);
  std::string trace_checkpoint, trace_out;
  std::uint64_t sample_seed = 1;
  trace_cmd->add_option("--checkpoint", trace_checkpoint,
                        "checkpoint to trace (default: fresh init)");
  trace_cmd->add_option("--out", trace_out, "output file (default: stdout)");
  trace_cmd->add_option("--sample-seed", sample_seed, "seed of the traced sample");

  auto* suite_cmd = app.add_subcommand("suite", "train+evaluate across seeds and aggregate");
  suite_flags.attach(suite_cmd);
  std::string seed_list;
  int num_seeds = 3;
  suite_cmd->add_option("--seeds", seed_list, "comma-separated seed list");
  suite_cmd->add_option("--num-seeds", num_seeds, "use seeds 1..K when --seeds is absent");

  auto* count_cmd = app.add_subcommand("param-count", "parameter counts per module group");
  count_flags.attach(count_cmd);

  auto* gen_cmd = app.add_subcommand("gen-data", "write a toy dataset cache or synthetic corpus");
  gen_flags.attach(gen_cmd);
  std::string gen_out;
  long gen_count = 1000, gen_test_count = 200;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("--out", gen_out, "output file (toy cache) or directory (babi)");
  gen_cmd->add_option("--count", gen_count, "samples, or train stories per task for babi");
  gen_cmd->add_option("--test-count", gen_test_count, "test stories per task (babi)");
  gen_cmd->add_option("--gen-seed", gen_seed, "generation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (train_cmd->parsed())
      return cmd_train(train_flags.build(), metrics_path, checkpoint_path, quiet);
    if (eval_cmd->parsed()) return cmd_eval(eval_flags.build(), eval_checkpoint, eval_seed);
    if (trace_cmd->parsed())
      return cmd_trace(trace_flags.build(), trace_checkpoint, trace_out, sample_seed);
    if (suite_cmd->parsed())
      return cmd_suite(suite_flags.build(), parse_seed_list(seed_list, num_seeds));
    if (count_cmd->parsed()) return cmd_param_count(count_flags.build());
    if (gen_cmd->parsed())
      return cmd_gen_data(gen_flags.build(), gen_out, gen_count, gen_test_count, gen_seed);
  } catch (const mann::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
