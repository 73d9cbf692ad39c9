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

#include "mann/parameters.hpp"

#include "mann/binio.hpp"
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mann {

namespace {

constexpr char kMagic[] = "MANNCKPT1";
constexpr size_t kMagicLen = sizeof(kMagic) - 1;

void put_entry(std::ostream& out, const std::string& name, const Tensor& t) {
  binio::put_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  binio::put_u32(out, static_cast<std::uint32_t>(t.rows()));
  binio::put_u32(out, static_cast<std::uint32_t>(t.cols()));
  for (int i = 0; i < t.size(); ++i) binio::put_f64(out, t[i]);
}

}  // namespace

Parameter& ParameterStore::add(const std::string& name, int rows, int cols) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
  index_.emplace(name, static_cast<int>(params_.size()));
  params_.emplace_back(name, rows, cols);
  return params_.back();
}

Parameter* ParameterStore::find(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &params_[it->second];
}

const Parameter* ParameterStore::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &params_[it->second];
}

long ParameterStore::param_count(std::string_view prefix) const {
  long total = 0;
  for (const auto& p : params_)
    if (std::string_view(p.name).substr(0, prefix.size()) == prefix) total += p.size();
  return total;
}

void ParameterStore::init(Rng& rng) {
  for (auto& p : params_) {
    if (p.value.cols() == 1) {
      p.value.fill(0.0);  // bias
      continue;
    }
    const double s = std::sqrt(6.0 / (p.value.cols() + p.value.rows()));
    for (int i = 0; i < p.value.size(); ++i) p.value[i] = rng.uniform(-s, s);
  }
}

void ParameterStore::zero_grads() {
  for (auto& p : params_) p.grad.fill(0.0);
}

void save_checkpoint(const ParameterStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(kMagic, static_cast<std::streamsize>(kMagicLen));
  for (const auto& p : store.all()) {
    put_entry(out, p.name, p.value);
    put_entry(out, p.name + ".rms_n", p.rms_n);
    put_entry(out, p.name + ".rms_m", p.rms_m);
    put_entry(out, p.name + ".momentum", p.delta);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

void load_checkpoint(ParameterStore& store, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[kMagicLen];
  in.read(magic, static_cast<std::streamsize>(kMagicLen));
  if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw std::runtime_error("not a MANNCKPT1 checkpoint: " + path);

  while (true) {
    in.peek();
    if (in.eof()) break;
    const std::uint32_t name_len = binio::get_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw std::runtime_error("checkpoint: truncated name");
    const int rows = static_cast<int>(binio::get_u32(in));
    const int cols = static_cast<int>(binio::get_u32(in));

    std::string base = name;
    Tensor* dst = nullptr;
    if (auto pos = name.rfind('.'); pos != std::string::npos) {
      const std::string suffix = name.substr(pos);
      if (suffix == ".rms_n" || suffix == ".rms_m" || suffix == ".momentum") base = name.substr(0, pos);
      if (Parameter* p = store.find(base)) {
        if (suffix == ".rms_n")
          dst = &p->rms_n;
        else if (suffix == ".rms_m")
          dst = &p->rms_m;
        else if (suffix == ".momentum")
          dst = &p->delta;
      }
    }
    if (!dst) {
      Parameter* p = store.find(name);
      if (!p) throw std::runtime_error("checkpoint entry for unknown parameter: " + name);
      dst = &p->value;
    }
    if (dst->rows() != rows || dst->cols() != cols)
      throw std::runtime_error("checkpoint shape mismatch for " + name + ": file " +
                               std::to_string(rows) + "x" + std::to_string(cols) + ", model " +
                               dst->shape_str());
    for (int i = 0; i < dst->size(); ++i) (*dst)[i] = binio::get_f64(in);
  }
}

Snapshot take_snapshot(const ParameterStore& store) {
  Snapshot s;
  for (const auto& p : store.all()) {
    s.value.push_back(p.value);
    s.rms_n.push_back(p.rms_n);
    s.rms_m.push_back(p.rms_m);
    s.delta.push_back(p.delta);
  }
  return s;
}

void restore_snapshot(ParameterStore& store, const Snapshot& snap) {
  auto& params = store.all();
  if (snap.value.size() != params.size())
    throw std::invalid_argument("snapshot does not match parameter store");
  for (size_t i = 0; i < params.size(); ++i) {
    params[i].value = snap.value[i];
    params[i].rms_n = snap.rms_n[i];
    params[i].rms_m = snap.rms_m[i];
    params[i].delta = snap.delta[i];
  }
}

}  // namespace mann
