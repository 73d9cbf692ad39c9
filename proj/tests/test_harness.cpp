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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mann/harness.hpp"

using namespace mann;

namespace {

ExperimentConfig tiny_copy_config() {
  ExperimentConfig cfg;
  cfg.model = "ntm";
  cfg.controller = "lstm-pnr";
  cfg.task = "copy";
  cfg.hidden = 8;
  cfg.mem_rows = 8;
  cfg.mem_cols = 4;
  cfg.read_heads = 1;
  cfg.t_min = 1;
  cfg.t_max = 2;
  cfg.iterations = 40;
  cfg.val_interval = 20;
  cfg.val_size = 6;
  cfg.test_size = 8;
  cfg.seed = 3;
  return finalize(cfg);
}

// A one-step sample with the given target bits, plus a synthetic episode
// whose logits predict `predicted` bits (saturated either way).
ForwardEpisode fake_bit_run(const std::vector<int>& target, const std::vector<int>& predicted,
                            TaskSample& sample_out) {
  const int O = static_cast<int>(target.size());
  TaskSample s;
  s.input_dim = kToyInputDim;
  s.output_dim = O;
  s.inputs = {Tensor::zeros(kToyInputDim, 1)};
  Tensor tgt = Tensor::zeros(O, 1);
  for (int b = 0; b < O; ++b) tgt[b] = target[b];
  s.targets = {tgt};
  s.mask = {true};
  ForwardEpisode run;
  Tensor z = Tensor::zeros(O, 1);
  for (int b = 0; b < O; ++b) z[b] = predicted[b] ? 10.0 : -10.0;
  run.logits = {z};
  sample_out = s;
  return run;
}

}  // namespace

TEST_CASE("step losses match hand-computed values") {
  SUBCASE("sigmoid cross-entropy") {
    Tape t;
    Tensor z = t.input(Tensor::column({0.7, -1.3}));
    Tensor target = Tensor::column({1.0, 0.0});
    Tensor loss = step_loss_node(t, z, target, LossKind::sigmoid_bce);
    const double want = (std::log1p(std::exp(0.7)) - 0.7) + std::log1p(std::exp(-1.3));
    CHECK(loss[0] == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("softmax cross-entropy") {
    Tape t;
    Tensor z = t.input(Tensor::column({2.0, -1.0, 0.5}));
    Tensor target = Tensor::onehot(3, 2);
    Tensor loss = step_loss_node(t, z, target, LossKind::softmax_ce);
    const double lse = std::log(std::exp(2.0) + std::exp(-1.0) + std::exp(0.5));
    CHECK(loss[0] == doctest::Approx(lse - 0.5).epsilon(1e-12));
  }
}

TEST_CASE("bit error metric on crafted predictions") {
  TaskSample s;
  SUBCASE("perfect predictor scores 0") {
    auto run = fake_bit_run({1, 0, 1, 1, 0, 0, 1, 0}, {1, 0, 1, 1, 0, 0, 1, 0}, s);
    CHECK(sample_error_percent(run, s, LossKind::sigmoid_bce) == 0.0);
  }
  SUBCASE("all-bits-flipped predictor scores 100") {
    auto run = fake_bit_run({1, 0, 1, 1, 0, 0, 1, 0}, {0, 1, 0, 0, 1, 1, 0, 1}, s);
    CHECK(sample_error_percent(run, s, LossKind::sigmoid_bce) == 100.0);
  }
  SUBCASE("one wrong bit out of eight scores 12.5") {
    auto run = fake_bit_run({1, 0, 1, 1, 0, 0, 1, 0}, {1, 0, 1, 1, 0, 0, 1, 1}, s);
    CHECK(sample_error_percent(run, s, LossKind::sigmoid_bce) == doctest::Approx(12.5));
  }
}

TEST_CASE("word error of a uniform-random predictor approaches 100(1-1/V)") {
  const int V = 20;
  const long questions = 10000;
  Rng rng(8);
  long wrong_total = 0;
  for (long q = 0; q < questions; ++q) {
    TaskSample s;
    s.input_dim = V;
    s.output_dim = V;
    s.inputs = {Tensor::zeros(V, 1)};
    s.targets = {Tensor::onehot(V, rng.index(V))};
    s.mask = {true};
    ForwardEpisode run;
    Tensor z = Tensor::zeros(V, 1);
    z[rng.index(V)] = 5.0;  // uniform-random argmax
    run.logits = {z};
    wrong_total += sample_error_percent(run, s, LossKind::softmax_ce) > 0 ? 1 : 0;
  }
  const double err = 100.0 * wrong_total / questions;
  const double expect = 100.0 * (1.0 - 1.0 / V);
  const double sigma = 100.0 * std::sqrt((1.0 - 1.0 / V) * (1.0 / V) / questions);
  CHECK(std::fabs(err - expect) <= 3.0 * sigma);
}

TEST_CASE("zero iterations return the initialization checkpoint and no metrics") {
  ExperimentConfig cfg = tiny_copy_config();
  cfg.iterations = 0;
  DataSource data(cfg);
  Model model(model_spec_from(cfg));
  model.init_params(cfg.seed);
  Snapshot init = take_snapshot(model.params());

  TrainResult res = train(model, data, cfg);
  CHECK(res.metrics.empty());
  CHECK_FALSE(res.diverged);
  REQUIRE(res.best.value.size() == init.value.size());
  for (size_t i = 0; i < init.value.size(); ++i) CHECK(res.best.value[i] == init.value[i]);
}

TEST_CASE("clip threshold is honored inside the update path") {
  ExperimentConfig cfg = tiny_copy_config();
  ParameterStore store;
  auto& p = store.add("p", 2, 1);
  p.value[0] = 1.0;
  p.value[1] = 2.0;
  p.grad[0] = 6.0;
  p.grad[1] = 8.0;  // norm 10, threshold 5 -> [3, 4]

  apply_update(store, cfg);

  // independent oracle: clipped gradient through the update formula
  auto expected = [&](double g, double theta) {
    const double n = 0.05 * g * g;
    const double m = 0.05 * g;
    const double d = -cfg.lr * g / std::sqrt(n - m * m + cfg.rms_damping);
    return theta + d;
  };
  CHECK(p.value[0] == doctest::Approx(expected(3.0, 1.0)).epsilon(1e-12));
  CHECK(p.value[1] == doctest::Approx(expected(4.0, 2.0)).epsilon(1e-12));
  CHECK(p.grad[0] == 0.0);
}

TEST_CASE("identical config and seed give bit-identical metrics") {
  ExperimentConfig cfg = tiny_copy_config();
  auto run_once = [&] {
    DataSource data(cfg);
    Model model(model_spec_from(cfg));
    model.init_params(cfg.seed);
    return train(model, data, cfg);
  };
  TrainResult a = run_once();
  TrainResult b = run_once();
  REQUIRE(a.metrics.size() == b.metrics.size());
  REQUIRE(!a.metrics.empty());
  for (size_t i = 0; i < a.metrics.size(); ++i) {
    CHECK(a.metrics[i].iteration == b.metrics[i].iteration);
    CHECK(a.metrics[i].train_loss == b.metrics[i].train_loss);
    CHECK(a.metrics[i].val_loss == b.metrics[i].val_loss);
    CHECK(a.metrics[i].val_bit_error == b.metrics[i].val_bit_error);
  }
  CHECK(a.best_iteration == b.best_iteration);
}

TEST_CASE("best checkpoint has the lowest validation loss of the run") {
  ExperimentConfig cfg = tiny_copy_config();
  cfg.iterations = 100;
  cfg.val_interval = 20;
  DataSource data(cfg);
  Model model(model_spec_from(cfg));
  model.init_params(cfg.seed);
  TrainResult res = train(model, data, cfg);
  REQUIRE(!res.metrics.empty());
  double lowest = res.metrics[0].val_loss;
  for (const auto& m : res.metrics) lowest = std::min(lowest, m.val_loss);
  CHECK(res.best_val_loss == doctest::Approx(lowest));
}

TEST_CASE("checkpoint save/load reproduces forward outputs bit-exactly on a probe") {
  ExperimentConfig cfg = tiny_copy_config();
  DataSource data(cfg);
  Model model(model_spec_from(cfg));
  model.init_params(cfg.seed);
  train(model, data, cfg);

  const std::string path = "harness_ckpt_test.bin";
  save_checkpoint(model.params(), path);

  Model reloaded(model_spec_from(cfg));
  load_checkpoint(reloaded.params(), path);

  Rng probe_rng(4242);
  ToyRange range{cfg.t_min, cfg.t_max, cfg.m_min, cfg.m_max};
  for (int i = 0; i < 16; ++i) {
    TaskSample s = gen_toy(ToyTask::copy, probe_rng, range);
    ForwardEpisode ra = forward_episode(model, s, LossKind::sigmoid_bce);
    ForwardEpisode rb = forward_episode(reloaded, s, LossKind::sigmoid_bce);
    REQUIRE(ra.logits.size() == rb.logits.size());
    for (size_t k = 0; k < ra.logits.size(); ++k) CHECK(ra.logits[k] == rb.logits[k]);
  }
  std::remove(path.c_str());
}

TEST_CASE("trace output: one header plus one record per step, valid weights") {
  ExperimentConfig cfg = tiny_copy_config();
  Model model(model_spec_from(cfg));
  model.init_params(1);
  Rng rng(5);
  TaskSample s = gen_toy(ToyTask::copy, rng, {3, 3, 1, 1});

  std::ostringstream out;
  dump_trace(model, s, LossKind::sigmoid_bce, config_summary(cfg), out);

  std::istringstream in(out.str());
  std::string line;
  int lines = 0, records = 0;
  while (std::getline(in, line)) {
    ++lines;
    if (lines == 1) {
      CHECK(line.rfind("# ", 0) == 0);
      CHECK(line.find("model=ntm") != std::string::npos);
      continue;
    }
    ++records;
    CHECK(line.find("| input: ") != std::string::npos);
    CHECK(line.find("| output: ") != std::string::npos);
    CHECK(line.find("| read0: ") != std::string::npos);

    // write weights parse back as a sub-stochastic vector
    const auto pos = line.find("| write: ");
    REQUIRE(pos != std::string::npos);
    // values went through %.6g, so allow for text rounding
    std::istringstream ws(line.substr(pos + 9));
    double v, total = 0;
    int n = 0;
    while (ws >> v) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-6);
      total += v;
      ++n;
    }
    CHECK(n == cfg.mem_rows);
    CHECK(total <= 1.0 + 1e-4);
  }
  CHECK(records == s.horizon());
}

TEST_CASE("suite runner aggregates per-seed results") {
  ExperimentConfig cfg = tiny_copy_config();
  cfg.iterations = 20;
  cfg.val_interval = 10;
  cfg.val_size = 4;
  cfg.test_size = 4;

  SUBCASE("one seed reports that seed's metric") {
    SuiteReport rep = run_suite(cfg, {7});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].ok);
    CHECK(rep.mean_metric == rep.rows[0].metric);
    CHECK((rep.solved == 0 || rep.solved == 1));
  }

  SUBCASE("parallel and sequential execution agree") {
    SuiteReport seq = run_suite(cfg, {1, 2});
    ExperimentConfig par_cfg = cfg;
    par_cfg.jobs = 2;
    SuiteReport par = run_suite(par_cfg, {1, 2});
    REQUIRE(seq.rows.size() == par.rows.size());
    for (size_t i = 0; i < seq.rows.size(); ++i) {
      CHECK(seq.rows[i].metric == par.rows[i].metric);
      CHECK(seq.rows[i].best_iteration == par.rows[i].best_iteration);
    }
    CHECK(seq.mean_metric == par.mean_metric);
    // mean against a hand sum
    CHECK(seq.mean_metric ==
          doctest::Approx((seq.rows[0].metric + seq.rows[1].metric) / 2.0));
  }
}

TEST_CASE("metrics CSV has the documented header and row count") {
  std::vector<MetricsRecord> metrics{{1000, 1.5, 2.5, 50.0, 1.25}, {2000, 1.0, 2.0, 40.0, 2.5}};
  const std::string path = "metrics_test.csv";
  write_metrics_csv(path, metrics);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "iteration,train_loss,val_loss,val_bit_error,seconds");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
  std::remove(path.c_str());
}

TEST_CASE("babi evaluation aggregates per task over a synthetic corpus") {
  const std::string dir = "harness_babi_tmp";
  babi_write_synthetic(dir, 30, 6, 99);

  ExperimentConfig cfg;
  cfg.model = "dnc";
  cfg.controller = "lstm-pnr";
  cfg.task = "babi";
  cfg.hidden = 8;
  cfg.mem_rows = 8;
  cfg.mem_cols = 4;
  cfg.read_heads = 2;
  cfg.iterations = 0;
  cfg.val_size = 10;
  cfg.data_dir = dir;
  cfg = finalize(cfg);

  DataSource data(cfg);
  Model model(model_spec_from(cfg, data.vocab_size()));
  model.init_params(1);

  BabiEval eval = evaluate_babi_error(model, data);
  CHECK(eval.per_task.size() == 6);
  CHECK(eval.questions > 0);
  double mean = 0;
  for (const auto& [task_id, err] : eval.per_task) {
    CHECK(err >= 0.0);
    CHECK(err <= 100.0);
    mean += err;
  }
  CHECK(eval.mean_error == doctest::Approx(mean / 6.0));

  std::filesystem::remove_all(dir);
}

TEST_CASE("babi without a data directory is a config error") {
  ExperimentConfig cfg;
  cfg.task = "babi";
  cfg.iterations = 0;
#ifdef _WIN32
#else
  unsetenv("MANN_DATA_DIR");
#endif
  cfg = finalize(cfg);
  CHECK_THROWS_AS(DataSource{cfg}, ConfigError);
}
