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

#include <string>
#include <unordered_map>
#include <vector>

#include "mann/tasks.hpp"

namespace mann {

// The six jointly-trained question-answering tasks.
inline const std::vector<int> kBabiTasks = {1, 4, 9, 10, 11, 14};

// One story: lowercased tokens with '.' and '?' split out, plus the answer
// word index and task id at each question position ('?' token).
struct BabiQuestion {
  int position = 0;  // index of the '?' token within the story
  int answer = 0;    // vocabulary index of the answer word
};

struct BabiStory {
  std::vector<int> tokens;
  std::vector<BabiQuestion> questions;
  int task_id = 0;
};

struct BabiCorpus {
  std::vector<std::string> vocab;                  // deterministic order
  std::unordered_map<std::string, int> vocab_index;
  std::vector<BabiStory> stories;

  int vocab_size() const { return static_cast<int>(vocab.size()); }
  long question_count() const;
  int find_word(const std::string& word) const;  // -1 when absent
};

// Parses files in the distributed text format: "ID token ... ." statements
// and "ID question ?\tanswer\tsupport" questions; an ID reset to 1 starts a
// new story. Malformed lines are rejected with their file and line number.
// When fixed_vocab is non-null every token (and answer) must already be
// known; otherwise the vocabulary is built in first-appearance order.
BabiCorpus babi_parse(const std::vector<std::pair<int, std::string>>& task_files,
                      const BabiCorpus* fixed_vocab = nullptr);

// Locates "qa<ID>_*_<split>.txt" under dir or dir/en-10k for the six tasks.
std::vector<std::pair<int, std::string>> babi_task_files(const std::string& dir,
                                                         const std::string& split);

// One-hot word per step over the vocabulary; at each '?' position the
// target is the answer word's one-hot and the mask is true.
TaskSample babi_encode(const BabiStory& story, int vocab_size);

// Writes a synthetic six-task corpus in the same directory layout and line
// format as the distributed dataset (dir/en-10k/qa*_train.txt + _test.txt).
// Stands in when the real corpus is not available.
void babi_write_synthetic(const std::string& dir, int train_stories_per_task,
                          int test_stories_per_task, std::uint64_t seed);

}  // namespace mann
