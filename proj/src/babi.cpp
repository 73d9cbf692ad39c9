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

#include "mann/babi.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mann {

namespace fs = std::filesystem;

long BabiCorpus::question_count() const {
  long n = 0;
  for (const auto& s : stories) n += static_cast<long>(s.questions.size());
  return n;
}

int BabiCorpus::find_word(const std::string& word) const {
  auto it = vocab_index.find(word);
  return it == vocab_index.end() ? -1 : it->second;
}

namespace {

std::string lowercased(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Lowercase and split whitespace; trailing '.' and '?' become tokens.
std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    word = lowercased(word);
    if (word.size() > 1 && (word.back() == '.' || word.back() == '?')) {
      const char punct = word.back();
      word.pop_back();
      tokens.push_back(word);
      tokens.push_back(std::string(1, punct));
    } else {
      tokens.push_back(word);
    }
  }
  return tokens;
}

[[noreturn]] void malformed(const std::string& path, int line_no, const std::string& why) {
  throw std::runtime_error("malformed bAbI line " + path + ":" + std::to_string(line_no) + ": " +
                           why);
}

}  // namespace

BabiCorpus babi_parse(const std::vector<std::pair<int, std::string>>& task_files,
                      const BabiCorpus* fixed_vocab) {
  BabiCorpus corpus;
  if (fixed_vocab) {
    corpus.vocab = fixed_vocab->vocab;
    corpus.vocab_index = fixed_vocab->vocab_index;
  }

  auto intern = [&](const std::string& word, const std::string& path, int line_no,
                    bool is_answer) -> int {
    auto it = corpus.vocab_index.find(word);
    if (it != corpus.vocab_index.end()) return it->second;
    if (fixed_vocab) {
      if (is_answer) malformed(path, line_no, "unknown answer word '" + word + "'");
      malformed(path, line_no, "word '" + word + "' not in the training vocabulary");
    }
    const int id = static_cast<int>(corpus.vocab.size());
    corpus.vocab.push_back(word);
    corpus.vocab_index.emplace(word, id);
    return id;
  };

  for (const auto& [task_id, path] : task_files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bAbI file: " + path);
    std::string line;
    int line_no = 0;
    bool have_story = false;
    BabiStory story;

    auto flush = [&] {
      if (have_story) {
        if (story.tokens.empty()) malformed(path, line_no, "empty story");
        corpus.stories.push_back(std::move(story));
      }
      story = BabiStory{};
      story.task_id = task_id;
      have_story = true;
    };

    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::size_t pos = 0;
      while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos == 0 || pos >= line.size() || line[pos] != ' ')
        malformed(path, line_no, "expected 'ID text'");
      const int id = std::stoi(line.substr(0, pos));
      const std::string rest = line.substr(pos + 1);
      if (id == 1) flush();
      if (!have_story) malformed(path, line_no, "story does not start at ID 1");

      const auto tab = rest.find('\t');
      if (tab == std::string::npos) {
        for (const auto& tok : tokenize(rest))
          story.tokens.push_back(intern(tok, path, line_no, false));
      } else {
        const std::string question_text = rest.substr(0, tab);
        std::string answer_part = rest.substr(tab + 1);
        const auto tab2 = answer_part.find('\t');
        if (tab2 != std::string::npos) answer_part = answer_part.substr(0, tab2);
        if (answer_part.empty()) malformed(path, line_no, "question without an answer");

        const auto tokens = tokenize(question_text);
        if (tokens.empty() || tokens.back() != "?")
          malformed(path, line_no, "question does not end with '?'");
        for (const auto& tok : tokens) story.tokens.push_back(intern(tok, path, line_no, false));

        BabiQuestion q;
        q.position = static_cast<int>(story.tokens.size()) - 1;
        q.answer = intern(lowercased(answer_part), path, line_no, true);
        story.questions.push_back(q);
      }
    }
    if (have_story && !story.tokens.empty()) corpus.stories.push_back(std::move(story));
  }
  return corpus;
}

std::vector<std::pair<int, std::string>> babi_task_files(const std::string& dir,
                                                         const std::string& split) {
  fs::path root(dir);
  if (fs::exists(root / "en-10k")) root /= "en-10k";
  if (!fs::exists(root))
    throw std::runtime_error("bAbI directory not found: " + dir);

  std::vector<std::pair<int, std::string>> files;
  for (int task_id : kBabiTasks) {
    const std::string prefix = "qa" + std::to_string(task_id) + "_";
    const std::string suffix = "_" + split + ".txt";
    std::vector<std::string> matches;
    for (const auto& entry : fs::directory_iterator(root)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind(prefix, 0) == 0 && name.size() > suffix.size() &&
          name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
        matches.push_back(entry.path().string());
    }
    if (matches.empty())
      throw std::runtime_error("no " + prefix + "*" + suffix + " under " + root.string());
    std::sort(matches.begin(), matches.end());
    files.emplace_back(task_id, matches.front());
  }
  return files;
}

TaskSample babi_encode(const BabiStory& story, int vocab_size) {
  TaskSample s;
  s.input_dim = vocab_size;
  s.output_dim = vocab_size;
  const int len = static_cast<int>(story.tokens.size());
  s.inputs.reserve(len);
  s.targets.assign(len, Tensor::zeros(vocab_size, 1));
  s.mask.assign(len, false);
  for (int tok : story.tokens) s.inputs.push_back(Tensor::onehot(vocab_size, tok));
  for (const auto& q : story.questions) {
    s.mask[q.position] = true;
    s.targets[q.position] = Tensor::onehot(vocab_size, q.answer);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Synthetic corpus in the distributed format, used when the real dataset is
// not on disk. Same line structure, same directory layout.

namespace {

const char* kPeople[] = {"Mary", "John", "Daniel", "Sandra", "Julie", "Fred", "Bill", "Emily"};
const char* kPlaces[] = {"bathroom", "kitchen",  "garden", "office", "hallway",
                         "bedroom",  "school",   "cinema", "park"};
const char* kVerbs[] = {"moved", "went", "journeyed", "travelled"};
const char* kDirections[] = {"north", "south", "east", "west"};

struct StoryWriter {
  std::ostream& out;
  int line_id = 1;
  void fact(const std::string& text) { out << line_id++ << " " << text << "\n"; }
  int fact_line(const std::string& text) {
    const int id = line_id;
    fact(text);
    return id;
  }
  void question(const std::string& text, const std::string& answer, int support) {
    out << line_id++ << " " << text << "\t" << answer << "\t" << support << "\n";
  }
};

void write_qa1(std::ostream& out, Rng& rng) {
  StoryWriter w{out};
  const int n_people = 2 + rng.index(2);
  std::vector<int> person(n_people), where(n_people, -1), support(n_people, 0);
  for (int i = 0; i < n_people; ++i) person[i] = rng.index(8);
  const int rounds = 2 + rng.index(3);
  for (int round = 0; round < rounds; ++round) {
    for (int i = 0; i < n_people; ++i) {
      where[i] = rng.index(9);
      support[i] = w.fact_line(std::string(kPeople[person[i]]) + " " + kVerbs[rng.index(4)] +
                               " to the " + kPlaces[where[i]] + ".");
    }
    const int ask = rng.index(n_people);
    w.question(std::string("Where is ") + kPeople[person[ask]] + "?", kPlaces[where[ask]],
               support[ask]);
  }
}

void write_qa4(std::ostream& out, Rng& rng) {
  StoryWriter w{out};
  int a = rng.index(9), b = rng.index(9);
  while (b == a) b = rng.index(9);
  const char* dir = kDirections[rng.index(4)];
  const int s = w.fact_line(std::string("The ") + kPlaces[a] + " is " + dir + " of the " +
                            kPlaces[b] + ".");
  if (rng.bit())
    w.question(std::string("What is ") + dir + " of the " + kPlaces[b] + "?", kPlaces[a], s);
  else
    w.question(std::string("What is the ") + kPlaces[a] + " " + dir + " of?", kPlaces[b], s);
}

void write_qa9(std::ostream& out, Rng& rng) {
  StoryWriter w{out};
  const int n = 2 + rng.index(2);
  std::vector<int> person(n), where(n), support(n);
  std::vector<bool> negated(n);
  for (int i = 0; i < n; ++i) {
    person[i] = rng.index(8);
    where[i] = rng.index(9);
    negated[i] = rng.bit();
    support[i] = w.fact_line(std::string(kPeople[person[i]]) +
                             (negated[i] ? " is no longer in the " : " is in the ") +
                             kPlaces[where[i]] + ".");
  }
  const int ask = rng.index(n);
  w.question(std::string("Is ") + kPeople[person[ask]] + " in the " + kPlaces[where[ask]] + "?",
             negated[ask] ? "no" : "yes", support[ask]);
}

void write_qa10(std::ostream& out, Rng& rng) {
  StoryWriter w{out};
  const int person = rng.index(8);
  int a = rng.index(9), b = rng.index(9);
  while (b == a) b = rng.index(9);
  const bool indefinite = rng.bit();
  int s;
  if (indefinite)
    s = w.fact_line(std::string(kPeople[person]) + " is either in the " + kPlaces[a] +
                    " or the " + kPlaces[b] + ".");
  else
    s = w.fact_line(std::string(kPeople[person]) + " is in the " + kPlaces[a] + ".");
  // ask about a, b, or an unrelated place
  int asked = a;
  const int coin = rng.index(3);
  if (coin == 1) asked = b;
  if (coin == 2) {
    asked = rng.index(9);
    while (asked == a || asked == b) asked = rng.index(9);
  }
  std::string answer;
  if (indefinite)
    answer = (asked == a || asked == b) ? "maybe" : "no";
  else
    answer = asked == a ? "yes" : "no";
  w.question(std::string("Is ") + kPeople[person] + " in the " + kPlaces[asked] + "?", answer, s);
}

void write_qa11(std::ostream& out, Rng& rng) {
  StoryWriter w{out};
  const int person = rng.index(8);
  const bool female = person == 0 || person == 3 || person == 4 || person == 7;
  const char* pronoun = female ? "she" : "he";
  const int a = rng.index(9);
  int b = rng.index(9);
  while (b == a) b = rng.index(9);
  w.fact(std::string(kPeople[person]) + " " + kVerbs[rng.index(4)] + " to the " + kPlaces[a] +
         ".");
  const int s = w.fact_line(std::string("Afterwards ") + pronoun + " " + kVerbs[rng.index(4)] +
                            " to the " + kPlaces[b] + ".");
  w.question(std::string("Where is ") + kPeople[person] + "?", kPlaces[b], s);
}

void write_qa14(std::ostream& out, Rng& rng) {
  StoryWriter w{out};
  const int person = rng.index(8);
  int a = rng.index(9), b = rng.index(9);
  while (b == a) b = rng.index(9);
  const int s1 = w.fact_line(std::string("Yesterday ") + kPeople[person] + " went to the " +
                             kPlaces[a] + ".");
  w.fact(std::string("This morning ") + kPeople[person] + " went to the " + kPlaces[b] + ".");
  w.question(std::string("Where was ") + kPeople[person] + " before the " + kPlaces[b] + "?",
             kPlaces[a], s1);
}

void write_task_file(const std::string& path, int task_id, int stories, Rng& rng) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write synthetic corpus file: " + path);
  for (int i = 0; i < stories; ++i) {
    switch (task_id) {
      case 1: write_qa1(out, rng); break;
      case 4: write_qa4(out, rng); break;
      case 9: write_qa9(out, rng); break;
      case 10: write_qa10(out, rng); break;
      case 11: write_qa11(out, rng); break;
      case 14: write_qa14(out, rng); break;
      default: throw std::invalid_argument("no synthetic template for task " + std::to_string(task_id));
    }
  }
}

const char* task_slug(int task_id) {
  switch (task_id) {
    case 1: return "single-supporting-fact";
    case 4: return "two-arg-relations";
    case 9: return "simple-negation";
    case 10: return "indefinite-knowledge";
    case 11: return "basic-coreference";
    case 14: return "time-reasoning";
  }
  return "unknown";
}

}  // namespace

void babi_write_synthetic(const std::string& dir, int train_stories_per_task,
                          int test_stories_per_task, std::uint64_t seed) {
  const fs::path root = fs::path(dir) / "en-10k";
  fs::create_directories(root);
  for (int task_id : kBabiTasks) {
    const std::string base = "qa" + std::to_string(task_id) + "_" + task_slug(task_id);
    Rng train_rng(derive_seed(seed, 1000 + task_id));
    Rng test_rng(derive_seed(seed, 2000 + task_id));
    write_task_file((root / (base + "_train.txt")).string(), task_id, train_stories_per_task,
                    train_rng);
    write_task_file((root / (base + "_test.txt")).string(), task_id, test_stories_per_task,
                    test_rng);
  }
}

}  // namespace mann
