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

#include "mann/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "mann/kernels.hpp"

namespace mann {

LossKind loss_kind_for(const ExperimentConfig& cfg) {
  return is_babi(cfg) ? LossKind::softmax_ce : LossKind::sigmoid_bce;
}

int argmax(const Tensor& t) {
  int best = 0;
  for (int i = 1; i < t.size(); ++i)
    if (t[i] > t[best]) best = i;
  return best;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& metrics) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open metrics file: " + path);
  out << "iteration,train_loss,val_loss,val_bit_error,seconds\n";
  char buf[256];
  for (const auto& m : metrics) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.3f\n", m.iteration, m.train_loss,
                  m.val_loss, m.val_bit_error, m.seconds);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// DataSource

DataSource::DataSource(const ExperimentConfig& cfg)
    : cfg_(cfg), train_rng_(derive_seed(cfg.seed, kTrainStreamTag)), babi_(is_babi(cfg)) {
  if (babi_) {
    if (cfg_.data_dir.empty())
      throw ConfigError("babi task requires data_dir (or MANN_DATA_DIR) pointing at the corpus");
    corpus_ = babi_parse(babi_task_files(cfg_.data_dir, "train"));
    test_corpus_ = babi_parse(babi_task_files(cfg_.data_dir, "test"), &corpus_);

    // Fixed held-out split of the training stories.
    std::vector<int> order(corpus_.stories.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(kValStreamSeed);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
      std::swap(order[i], order[split_rng.index(i + 1)]);
    const int val_n = std::min<int>(cfg_.val_size, static_cast<int>(order.size()) / 5);
    for (int i = 0; i < static_cast<int>(order.size()); ++i) {
      if (i < val_n)
        validation_.push_back(babi_encode(corpus_.stories[order[i]], corpus_.vocab_size()));
      else
        train_pool_.push_back(order[i]);
    }
  } else {
    task_ = toy_from_string(cfg_.task);
    range_ = ToyRange{cfg_.t_min, cfg_.t_max, cfg_.m_min, cfg_.m_max};
    Rng val_rng(derive_seed(kValStreamSeed, static_cast<std::uint64_t>(task_)));
    for (int i = 0; i < cfg_.val_size; ++i) validation_.push_back(gen_toy(task_, val_rng, range_));
  }
}

TaskSample DataSource::next_train_sample() {
  if (!babi_) return gen_toy(task_, train_rng_, range_);
  const int idx = train_pool_[train_rng_.index(static_cast<int>(train_pool_.size()))];
  return babi_encode(corpus_.stories[idx], corpus_.vocab_size());
}

const BabiCorpus* DataSource::train_corpus() const { return babi_ ? &corpus_ : nullptr; }

int DataSource::vocab_size() const { return babi_ ? corpus_.vocab_size() : 0; }

long DataSource::test_story_count() const {
  return babi_ ? static_cast<long>(test_corpus_.stories.size()) : 0;
}

TaskSample DataSource::test_story(long index, int* task_id) const {
  const BabiStory& story = test_corpus_.stories[index];
  if (task_id) *task_id = story.task_id;
  return babi_encode(story, corpus_.vocab_size());
}

// ---------------------------------------------------------------------------
// Loss construction

Tensor step_loss_node(Tape& t, const Tensor& logits, const Tensor& target, LossKind kind) {
  if (kind == LossKind::sigmoid_bce) {
    // sum_i softplus(z_i) - t_i * z_i
    Tensor bce = ops::sub(t, ops::softplus(t, logits), ops::hadamard(t, target, logits));
    return ops::sum(t, bce);
  }
  // softmax cross-entropy: logsumexp(z) - z[answer], max-shifted with the
  // shift entering as a constant (exact for any constant).
  const int answer = argmax(target);
  double m = logits[0];
  for (int i = 1; i < logits.size(); ++i) m = std::max(m, logits[i]);
  Tensor shifted = ops::sub(t, logits, Tensor::full(logits.rows(), 1, m));
  Tensor lse = ops::add(t, ops::log(t, ops::sum(t, ops::exp(t, shifted))), Tensor::full(1, 1, m));
  return ops::sub(t, lse, ops::slice_rows(t, logits, answer, 1));
}

Tensor build_episode_loss(Tape& t, Model& model, const TaskSample& sample, LossKind kind) {
  auto ep = model.begin_episode();
  Tensor loss;
  bool have_loss = false;
  Tensor last_logits;
  for (int step = 0; step < sample.horizon(); ++step) {
    Tensor logits = model.step(t, ep, sample.inputs[step]);
    last_logits = logits;
    if (!sample.mask[step]) continue;
    Tensor sl = step_loss_node(t, logits, sample.targets[step], kind);
    loss = have_loss ? ops::add(t, loss, sl) : sl;
    have_loss = true;
  }
  if (!have_loss)  // no masked step: a zero loss that still closes the graph
    loss = ops::scalar_mul(t, Tensor::zeros(1, 1), ops::sum(t, last_logits));
  return loss;
}

ForwardEpisode forward_episode(Model& model, const TaskSample& sample, LossKind kind,
                               bool collect_weights) {
  ForwardEpisode out;
  Tape t;
  auto ep = model.begin_episode();
  Tensor loss;
  bool have_loss = false;
  for (int step = 0; step < sample.horizon(); ++step) {
    Tensor logits = model.step(t, ep, sample.inputs[step]);
    out.logits.push_back(logits);
    if (collect_weights) {
      out.read_weights.push_back(ep.last_read_weights);
      out.write_weights.push_back(ep.last_write_weight);
    }
    if (!sample.mask[step]) continue;
    Tensor sl = step_loss_node(t, logits, sample.targets[step], kind);
    loss = have_loss ? ops::add(t, loss, sl) : sl;
    have_loss = true;
  }
  out.loss = have_loss ? loss[0] : 0.0;
  return out;
}

void apply_update(ParameterStore& params, const ExperimentConfig& cfg) {
  clip_global_norm(params, cfg.clip);
  RmspropConfig rms;
  rms.lr = cfg.lr;
  rms.momentum = cfg.momentum;
  rms.decay = cfg.rms_decay;
  rms.damping = cfg.rms_damping;
  rmsprop_step(params, rms);
}

// Per-sample error: toy bit error after 0.5-thresholding, babi word error.
double sample_error_percent(const ForwardEpisode& run, const TaskSample& sample, LossKind kind) {
  long wrong = 0, total = 0;
  for (int step = 0; step < sample.horizon(); ++step) {
    if (!sample.mask[step]) continue;
    const Tensor& z = run.logits[step];
    if (kind == LossKind::sigmoid_bce) {
      for (int b = 0; b < z.size(); ++b) {
        // sigmoid(z) >= 0.5  <=>  z >= 0
        const bool bit = z[b] >= 0.0;
        const bool want = sample.targets[step][b] >= 0.5;
        wrong += bit != want;
        ++total;
      }
    } else {
      wrong += argmax(z) != argmax(sample.targets[step]);
      ++total;
    }
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(wrong) / static_cast<double>(total);
}

namespace {

struct ValScore {
  double loss = 0;
  double error = 0;
};

ValScore validate(Model& model, const DataSource& data, LossKind kind) {
  ValScore score;
  const auto& set = data.validation_set();
  for (const auto& sample : set) {
    ForwardEpisode run = forward_episode(model, sample, kind);
    score.loss += run.loss;
    score.error += sample_error_percent(run, sample, kind);
  }
  const double n = static_cast<double>(set.size());
  if (n > 0) {
    score.loss /= n;
    score.error /= n;
  }
  return score;
}

}  // namespace

TrainResult train(Model& model, DataSource& data, const ExperimentConfig& cfg,
                  std::ostream* log) {
  const LossKind kind = loss_kind_for(cfg);
  TrainResult res;
  res.best = take_snapshot(model.params());
  res.best_val_loss = std::numeric_limits<double>::infinity();
  res.best_iteration = 0;

  const auto t0 = std::chrono::steady_clock::now();
  double running = 0;
  long running_n = 0;
  Tape tape;

  for (long iter = 1; iter <= cfg.iterations; ++iter) {
    TaskSample sample = data.next_train_sample();
    tape.clear();
    double loss_value = 0;
    try {
      Tensor loss = build_episode_loss(tape, model, sample, kind);
      loss_value = loss[0];
      tape.backward(loss);
    } catch (const NonFiniteError&) {
      res.diverged = true;
      res.diverged_at = iter;
      if (log) *log << "diverged at iteration " << iter << "\n";
      break;
    }
    apply_update(model.params(), cfg);
    running += loss_value;
    ++running_n;

    if (iter % cfg.val_interval == 0) {
      const ValScore val = validate(model, data, kind);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      MetricsRecord rec{iter, running_n ? running / running_n : 0.0, val.loss, val.error,
                        seconds};
      res.metrics.push_back(rec);
      if (val.loss < res.best_val_loss) {
        res.best_val_loss = val.loss;
        res.best_iteration = iter;
        res.best = take_snapshot(model.params());
      }
      if (log)
        *log << "iter " << iter << " train_loss " << rec.train_loss << " val_loss " << val.loss
             << " val_err% " << val.error << " best@" << res.best_iteration << "\n";
      running = 0;
      running_n = 0;
    }
  }
  return res;
}

double evaluate_bit_error(Model& model, const ExperimentConfig& cfg, int test_size,
                          std::uint64_t seed) {
  if (is_babi(cfg))
    throw std::invalid_argument("evaluate_bit_error applies to toy tasks; use evaluate_babi_error");
  const ToyTask task = toy_from_string(cfg.task);
  const ToyRange range{cfg.t_min, cfg.t_max, cfg.m_min, cfg.m_max};
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(task) + 101));
  double total = 0;
  for (int i = 0; i < test_size; ++i) {
    TaskSample sample = gen_toy(task, rng, range);
    ForwardEpisode run = forward_episode(model, sample, LossKind::sigmoid_bce);
    total += sample_error_percent(run, sample, LossKind::sigmoid_bce);
  }
  return test_size > 0 ? total / test_size : 0.0;
}

BabiEval evaluate_babi_error(Model& model, const DataSource& data) {
  BabiEval eval;
  std::map<int, std::pair<long, long>> per_task;  // task -> (wrong, total)
  for (long i = 0; i < data.test_story_count(); ++i) {
    int task_id = 0;
    TaskSample sample = data.test_story(i, &task_id);
    ForwardEpisode run = forward_episode(model, sample, LossKind::softmax_ce);
    for (int step = 0; step < sample.horizon(); ++step) {
      if (!sample.mask[step]) continue;
      auto& [wrong, total] = per_task[task_id];
      wrong += argmax(run.logits[step]) != argmax(sample.targets[step]);
      ++total;
      ++eval.questions;
    }
  }
  for (const auto& [task_id, counts] : per_task) {
    const double err = counts.second ? 100.0 * counts.first / counts.second : 0.0;
    eval.per_task.emplace_back(task_id, err);
    eval.mean_error += err;
  }
  if (!eval.per_task.empty()) eval.mean_error /= static_cast<double>(eval.per_task.size());
  return eval;
}

namespace {

void print_array(std::ostream& out, const Tensor& v) {
  char buf[32];
  for (int i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", v[i]);
    out << (i ? " " : "") << buf;
  }
}

}  // namespace

void dump_trace(Model& model, const TaskSample& sample, LossKind kind,
                const std::string& config_line, std::ostream& out) {
  ForwardEpisode run = forward_episode(model, sample, kind, /*collect_weights=*/true);
  out << "# " << config_line << "\n";
  for (int step = 0; step < sample.horizon(); ++step) {
    out << "step=" << step << " | input: ";
    print_array(out, sample.inputs[step]);
    out << " | output: ";
    // probabilities: per-bit sigmoid for toys, softmax over the vocabulary for babi
    Tensor probs(run.logits[step].rows(), 1);
    if (kind == LossKind::sigmoid_bce) {
      for (int i = 0; i < probs.size(); ++i)
        probs[i] = kernels::sigmoid_scalar(run.logits[step][i]);
    } else {
      kernels::softmax(probs.rows(), run.logits[step].data(), probs.data());
    }
    print_array(out, probs);
    if (sample.mask[step]) {
      out << " | target: ";
      print_array(out, sample.targets[step]);
    }
    for (size_t head = 0; head < run.read_weights[step].size(); ++head) {
      out << " | read" << head << ": ";
      print_array(out, run.read_weights[step][head]);
    }
    out << " | write: ";
    print_array(out, run.write_weights[step]);
    out << "\n";
  }
}

SuiteReport run_suite(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds,
                      std::ostream* log) {
  SuiteReport report;
  report.rows.resize(seeds.size());

  const bool parallel = base.jobs > 1 && seeds.size() > 1;
  const bool kernels_were_parallel = kernels::parallel_enabled();
  if (parallel) kernels::set_parallel(false);

  auto worker = [&](size_t row_idx) {
    SuiteRow& row = report.rows[row_idx];
    row.seed = seeds[row_idx];
    try {
      ExperimentConfig cfg = base;
      cfg.seed = seeds[row_idx];
      DataSource data(cfg);
      Model model(model_spec_from(cfg, data.vocab_size()));
      model.init_params(cfg.seed);
      TrainResult result = train(model, data, cfg, nullptr);
      row.diverged = result.diverged;
      row.best_iteration = result.best_iteration;
      restore_snapshot(model.params(), result.best);
      if (is_babi(cfg))
        row.metric = evaluate_babi_error(model, data).mean_error;
      else
        row.metric = evaluate_bit_error(model, cfg, cfg.test_size, kTestStreamSeed);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  if (parallel) {
    size_t next = 0;
    const int n_threads = std::min<int>(base.jobs, static_cast<int>(seeds.size()));
    std::vector<std::thread> threads;
    std::mutex mu;
    for (int i = 0; i < n_threads; ++i)
      threads.emplace_back([&] {
        while (true) {
          size_t idx;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= seeds.size()) return;
            idx = next++;
          }
          worker(idx);
        }
      });
    for (auto& th : threads) th.join();
  } else {
    for (size_t i = 0; i < seeds.size(); ++i) worker(i);
  }
  if (parallel) kernels::set_parallel(kernels_were_parallel);

  double total = 0;
  int ok_count = 0;
  for (const auto& row : report.rows) {
    if (!row.ok) {
      ++report.failed;
      continue;
    }
    total += row.metric;
    ++ok_count;
    if (row.metric == 0.0) ++report.solved;
    if (log)
      *log << "seed " << row.seed << ": error " << row.metric << "% (best@" << row.best_iteration
           << (row.diverged ? ", diverged" : "") << ")\n";
  }
  report.mean_metric = ok_count ? total / ok_count : 0.0;
  if (log)
    *log << "mean " << report.mean_metric << "% over " << ok_count << " runs, solved "
         << report.solved << ", failed " << report.failed << "\n";
  return report;
}

}  // namespace mann
