// MiniWiki: question answering over the bundled fictional-encyclopedia
// corpus with three actions: search an article by exact title, look up the
// next sentence containing a keyword, and finish with an answer that is
// compared to the gold answer after normalization.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hicrl/envs/env.hpp"
#include "hicrl/envs/miniwiki_corpus.hpp"

namespace hicrl {

// Lowercase, punctuation to spaces, whitespace collapsed, leading article
// (a/an/the) dropped. Exact-match convention for the finish answer.
inline std::string miniwiki_normalize(std::string_view answer) {
  std::string spaced;
  for (char c : answer) {
    unsigned char u = static_cast<unsigned char>(c);
    spaced += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : ' ';
  }
  std::vector<std::string> words = tokenize_words(spaced);
  std::size_t begin = 0;
  if (!words.empty() && (words[0] == "a" || words[0] == "an" || words[0] == "the")) begin = 1;
  std::string out;
  for (std::size_t i = begin; i < words.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    current += text[i];
    if (text[i] == '.' && (i + 1 == text.size() || text[i + 1] == ' ')) {
      out.push_back(trim(current));
      current.clear();
    }
  }
  if (!trim_view(current).empty()) out.push_back(trim(current));
  return out;
}

class MiniWiki : public Environment {
 public:
  explicit MiniWiki(std::uint64_t seed) {
    if (seed >= kWikiScenarioCount) {
      throw BadSeed("miniwiki seeds range over 0.." + std::to_string(kWikiScenarioCount - 1) +
                    ", got " + std::to_string(seed));
    }
    generate(seed);
  }

  const Scenario& scenario() const override { return scenario_; }

  std::string reset() override {
    generate(scenario_.seed);
    was_reset_ = true;
    done_ = false;
    return "Answer the question using search[<entity>], lookup[<keyword>], and "
           "finish[<answer>].\nQuestion: " +
           scenario_.task_text;
  }

  StepResult step(const std::string& action) override {
    require_live();
    StepResult result;
    const std::string a = trim(action);

    if (starts_with_ci(a, "search[") && a.back() == ']') {
      result.observation = do_search(trim(a.substr(7, a.size() - 8)));
    } else if (starts_with_ci(a, "lookup[") && a.back() == ']') {
      result.observation = do_lookup(trim(a.substr(7, a.size() - 8)));
    } else if (starts_with_ci(a, "finish[") && a.back() == ']') {
      done_ = true;
      result.done = true;
      std::string answer = a.substr(7, a.size() - 8);
      result.reward =
          miniwiki_normalize(answer) == miniwiki_normalize(question().answer) ? 1.0 : 0.0;
      result.observation = "Episode finished.";
    } else {
      result.observation = std::string(kNothingHappens);
    }
    return result;
  }

  std::vector<std::string> oracle_script() const override {
    std::vector<std::string> out;
    for (const char* a : question().oracle) out.emplace_back(a);
    return out;
  }

  json world_spec() const override {
    // Packs carry a digest instead of all 60 articles; the corpus itself is
    // compiled in and versioned with the code.
    std::string all;
    for (const WikiArticle& art : wiki_articles()) {
      all += art.title;
      all += '\n';
      all += art.text;
      all += '\n';
    }
    return json{{"articles", wiki_articles().size()}, {"corpus_digest", hex_digest(all)}};
  }

  std::string state_digest() const override {
    return hex_digest(std::to_string(current_) + "|" + keyword_ + "|" + std::to_string(cursor_) +
                      "|" + (done_ ? "1" : "0"));
  }

 private:
  const WikiQuestion& question() const { return wiki_questions()[scenario_.seed]; }

  void generate(std::uint64_t seed) {
    scenario_.env_id = std::string(kMiniWikiId);
    scenario_.seed = seed;
    scenario_.id = scenario_id(kMiniWikiId, seed);
    scenario_.task_type = "qa";
    scenario_.task_text = wiki_questions()[seed].question;
    scenario_.gold = json{{"answer", wiki_questions()[seed].answer}};
    current_ = -1;
    keyword_.clear();
    cursor_ = 0;
  }

  std::string do_search(const std::string& entity) {
    const std::vector<WikiArticle>& articles = wiki_articles();
    const std::string wanted = to_lower(entity);
    for (std::size_t i = 0; i < articles.size(); ++i) {
      if (to_lower(articles[i].title) == wanted) {
        current_ = static_cast<int>(i);
        keyword_.clear();
        cursor_ = 0;
        return articles[i].text;
      }
    }
    // No exact title: suggest the three closest titles by word overlap.
    std::vector<std::string> q = tokenize_words(entity);
    std::vector<std::pair<int, std::size_t>> scored;
    for (std::size_t i = 0; i < articles.size(); ++i) {
      std::vector<std::string> t = tokenize_words(articles[i].title);
      int score = 0;
      for (const std::string& w : q) {
        if (std::find(t.begin(), t.end(), w) != t.end()) ++score;
      }
      scored.emplace_back(score, i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    std::string out = "Could not find " + entity + ". Similar: [";
    for (std::size_t i = 0; i < 3 && i < scored.size(); ++i) {
      if (i > 0) out += ", ";
      out += articles[scored[i].second].title;
    }
    return out + "].";
  }

  std::string do_lookup(const std::string& keyword) {
    if (current_ < 0) return std::string(kNothingHappens);
    const std::string needle = to_lower(keyword);
    if (needle.empty()) return std::string(kNothingHappens);
    if (needle != keyword_) {
      keyword_ = needle;
      cursor_ = 0;
    }
    std::vector<std::string> matched;
    for (const std::string& s : split_sentences(wiki_articles()[current_].text)) {
      if (to_lower(s).find(needle) != std::string::npos) matched.push_back(s);
    }
    if (cursor_ >= matched.size()) {
      cursor_ = 0;  // cycle: the next lookup starts over from the first match
      return "No more results.";
    }
    std::string out = "(Result " + std::to_string(cursor_ + 1) + " / " +
                      std::to_string(matched.size()) + ") " + matched[cursor_];
    ++cursor_;
    return out;
  }

  Scenario scenario_;
  int current_ = -1;  // index into wiki_articles(), -1 before any search
  std::string keyword_;
  std::size_t cursor_ = 0;
};

}  // namespace hicrl
