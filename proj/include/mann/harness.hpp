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

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mann/babi.hpp"
#include "mann/config.hpp"
#include "mann/model.hpp"
#include "mann/optimizer.hpp"
#include "mann/tasks.hpp"

namespace mann {

// Per-step losses are summed over the masked span of one episode: sigmoid
// cross-entropy per bit for the toy tasks, softmax cross-entropy over the
// vocabulary at answer positions for babi.
enum class LossKind { sigmoid_bce, softmax_ce };
LossKind loss_kind_for(const ExperimentConfig& cfg);

struct MetricsRecord {
  long iteration = 0;
  double train_loss = 0;     // running mean since the previous validation
  double val_loss = 0;       // mean per-sequence masked loss on the fixed set
  double val_bit_error = 0;  // percent (word error for babi)
  double seconds = 0;        // wall clock since training start
};

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& metrics);

// Serves training/validation/test data for one finalized config. Toy
// samples are generated on the fly; the validation and test streams use
// fixed seeds so every run sees the same held-out data. For babi the
// corpus is parsed once and split deterministically.
class DataSource {
 public:
  explicit DataSource(const ExperimentConfig& cfg);

  TaskSample next_train_sample();
  const std::vector<TaskSample>& validation_set() const { return validation_; }

  // babi only
  const BabiCorpus* train_corpus() const;
  int vocab_size() const;
  long test_story_count() const;
  TaskSample test_story(long index, int* task_id) const;

 private:
  ExperimentConfig cfg_;
  Rng train_rng_;
  ToyRange range_;
  ToyTask task_ = ToyTask::copy;
  bool babi_ = false;
  std::vector<TaskSample> validation_;
  // babi state
  BabiCorpus corpus_;
  BabiCorpus test_corpus_;
  std::vector<int> train_pool_;
};

// One per-step loss node appended to the episode graph.
Tensor step_loss_node(Tape& t, const Tensor& logits, const Tensor& target, LossKind kind);

// Unrolls the model over the sample and sums the masked per-step losses.
Tensor build_episode_loss(Tape& t, Model& model, const TaskSample& sample, LossKind kind);

// Forward-only episode on a private tape; collects per-step outputs.
struct ForwardEpisode {
  double loss = 0;
  std::vector<Tensor> logits;                   // one per step
  std::vector<std::vector<Tensor>> read_weights;  // [step][head]
  std::vector<Tensor> write_weights;            // one per step
};
ForwardEpisode forward_episode(Model& model, const TaskSample& sample, LossKind kind,
                               bool collect_weights = false);

// Error of one episode in percent over its masked span: wrong bits after
// 0.5-thresholding (sigmoid_bce) or wrong argmax words (softmax_ce).
double sample_error_percent(const ForwardEpisode& run, const TaskSample& sample, LossKind kind);

// Gradient clipping by global norm followed by one RMSProp update.
void apply_update(ParameterStore& params, const ExperimentConfig& cfg);

struct TrainResult {
  std::vector<MetricsRecord> metrics;
  Snapshot best;  // parameters+slots at the lowest validation loss
  double best_val_loss = 0;
  long best_iteration = 0;
  bool diverged = false;
  long diverged_at = -1;
};

// Online training (batch 1) with periodic validation and best-checkpoint
// tracking. On divergence (non-finite loss) the loop stops, the best
// snapshot so far is kept, and `diverged` is set.
TrainResult train(Model& model, DataSource& data, const ExperimentConfig& cfg,
                  std::ostream* log = nullptr);

// Mean over samples of (wrong bits / masked bits), in percent, after
// thresholding output probabilities at 0.5.
double evaluate_bit_error(Model& model, const ExperimentConfig& cfg, int test_size,
                          std::uint64_t seed);

struct BabiEval {
  std::vector<std::pair<int, double>> per_task;  // (task id, error %)
  double mean_error = 0;                          // unweighted over tasks
  long questions = 0;
};
BabiEval evaluate_babi_error(Model& model, const DataSource& data);

// One header line naming the config, then one line per time step with the
// input, output probabilities, target (output phase only) and the head
// weights, arrays as space-separated values with 6 significant digits.
void dump_trace(Model& model, const TaskSample& sample, LossKind kind,
                const std::string& config_line, std::ostream& out);

struct SuiteRow {
  std::uint64_t seed = 0;
  bool ok = false;
  bool diverged = false;
  double metric = 0;  // best-checkpoint test error (percent)
  long best_iteration = 0;
  std::string error;
};
struct SuiteReport {
  std::vector<SuiteRow> rows;
  double mean_metric = 0;  // over successful rows
  int solved = 0;          // rows at exactly 0.0 error
  int failed = 0;
};

// Trains and evaluates one run per seed (optionally in parallel via
// cfg.jobs); individual failures are recorded, not fatal.
SuiteReport run_suite(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds,
                      std::ostream* log = nullptr);

int argmax(const Tensor& t);

// Fixed stream tags so validation/test data are shared across run seeds.
inline constexpr std::uint64_t kTrainStreamTag = 0x7261;
inline constexpr std::uint64_t kValStreamSeed = 0x76616c5f6d616e6eULL;
inline constexpr std::uint64_t kTestStreamSeed = 0x746573745f6d616eULL;

}  // namespace mann
