// MiniShop: a deterministic shopping environment. One fixed 50-item catalog
// is shared by every seed; the seed only picks the shopping goal. The agent
// searches by keyword, opens an item page, selects options, and buys; the
// purchase is scored by the fraction of goal constraints it satisfies.
#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hicrl/envs/env.hpp"

namespace hicrl {

struct ShopItem {
  std::string id;     // "B0001"
  std::string title;  // "waterproof denim jacket"
  std::string category;
  std::vector<std::string> attrs;                         // exactly 3
  std::vector<std::pair<std::string, std::vector<std::string>>> options;  // group -> values
  int price_cents = 0;

  bool offers(const std::string& group, const std::string& value) const {
    for (const auto& [g, values] : options) {
      if (g == group) return std::find(values.begin(), values.end(), value) != values.end();
    }
    return false;
  }
  bool has_attr(const std::string& attr) const {
    return std::find(attrs.begin(), attrs.end(), attr) != attrs.end();
  }
};

inline std::string format_price(int cents) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%d.%02d", cents / 100, cents % 100);
  return buf;
}

// The catalog is a pure function of a fixed internal seed, so every scenario
// shops the same store and few-shot examples can reference real items.
inline const std::vector<ShopItem>& shop_catalog() {
  static const std::vector<ShopItem> kCatalog = [] {
    struct Family {
      const char* category;
      std::vector<const char*> nouns;
      std::vector<const char*> attrs;
    };
    static const std::vector<Family> kFamilies = {
        {"clothing",
         {"jacket", "hoodie", "t-shirt", "raincoat"},
         {"denim", "cotton", "wool", "waterproof", "lightweight", "vintage", "slim-fit",
          "breathable"}},
        {"footwear",
         {"sneakers", "boots", "sandals", "loafers"},
         {"leather", "running", "waterproof", "non-slip", "cushioned", "high-top", "suede",
          "trail"}},
        {"electronics",
         {"headphones", "speaker", "keyboard", "power bank"},
         {"wireless", "bluetooth", "noise-cancelling", "rechargeable", "compact", "backlit",
          "portable", "fast-charging"}},
        {"kitchen",
         {"coffee maker", "blender", "kettle", "toaster"},
         {"stainless", "programmable", "compact", "cordless", "glass", "quiet", "retro",
          "energy-saving"}},
        {"furniture",
         {"desk chair", "bookshelf", "floor lamp", "side table"},
         {"ergonomic", "adjustable", "wooden", "foldable", "modern", "compact", "oak",
          "upholstered"}},
        {"grocery",
         {"coffee beans", "green tea", "dark chocolate", "granola"},
         {"organic", "fair-trade", "sugar-free", "gluten-free", "decaf", "whole-grain",
          "roasted", "unsweetened"}},
    };
    static const std::vector<std::pair<std::string, std::vector<std::string>>> kGroups = {
        {"size", {"small", "medium", "large", "x-large"}},
        {"color", {"black", "white", "navy", "red", "green", "brown"}},
        {"pack", {"1-pack", "2-pack", "4-pack"}},
    };

    SplitMix64 rng(fnv1a64("minishop-catalog"));
    std::vector<ShopItem> catalog;
    for (int i = 0; i < 50; ++i) {
      const Family& fam = kFamilies[i % kFamilies.size()];
      ShopItem item;
      char id[8];
      std::snprintf(id, sizeof(id), "B0%03d", i + 1);
      item.id = id;
      item.category = fam.category;
      while (item.attrs.size() < 3) {
        const char* a = fam.attrs[rng.below(fam.attrs.size())];
        if (!item.has_attr(a)) item.attrs.emplace_back(a);
      }
      item.title = item.attrs[0] + " " + item.attrs[1] + " " + fam.nouns[rng.below(fam.nouns.size())];
      std::size_t n_groups = 1 + rng.below(3);
      for (std::size_t g = 0; g < kGroups.size() && item.options.size() < n_groups; ++g) {
        // Keep groups in fixed order; skip some at random when fewer are wanted.
        if (kGroups.size() - g > n_groups - item.options.size() && rng.chance(40)) continue;
        const auto& [group, values] = kGroups[g];
        std::vector<std::string> offered;
        std::size_t want = 2 + rng.below(values.size() - 1);
        for (const std::string& v : values) {
          if (offered.size() < want && rng.chance(70)) offered.push_back(v);
        }
        while (offered.size() < 2) {
          const std::string& v = values[rng.below(values.size())];
          if (std::find(offered.begin(), offered.end(), v) == offered.end()) offered.push_back(v);
        }
        item.options.emplace_back(group, std::move(offered));
      }
      item.price_cents = 500 + static_cast<int>(rng.below(14501));
      catalog.push_back(std::move(item));
    }
    return catalog;
  }();
  return kCatalog;
}

struct ShopGold {
  std::string category;
  std::vector<std::string> attrs;  // 2 required attributes
  std::string option_group;
  std::string option_value;
  int price_cap_cents = 0;

  // One point per constraint: category, each attribute, the option, the cap.
  double score(const ShopItem& item, const std::map<std::string, std::string>& selected) const {
    int total = 3 + static_cast<int>(attrs.size());
    int hit = 0;
    if (item.category == category) ++hit;
    for (const std::string& a : attrs) {
      if (item.has_attr(a)) ++hit;
    }
    auto it = selected.find(option_group);
    if (it != selected.end() && it->second == option_value) ++hit;
    if (item.price_cents <= price_cap_cents) ++hit;
    return static_cast<double>(hit) / total;
  }

  bool satisfied_by(const ShopItem& item) const {
    if (item.category != category || item.price_cents > price_cap_cents) return false;
    for (const std::string& a : attrs) {
      if (!item.has_attr(a)) return false;
    }
    return item.offers(option_group, option_value);
  }
};

class MiniShop : public Environment {
 public:
  explicit MiniShop(std::uint64_t seed) { generate(seed); }

  const Scenario& scenario() const override { return scenario_; }

  std::string reset() override {
    generate(scenario_.seed);
    was_reset_ = true;
    done_ = false;
    return "Welcome to MiniShop. Find and buy the product described below.\nInstruction: " +
           scenario_.task_text + "\n" + search_page();
  }

  StepResult step(const std::string& action) override {
    require_live();
    const std::string a = normalize_action(action);
    StepResult result;
    result.observation = apply(a, result);
    return result;
  }

  std::vector<std::string> oracle_script() const override {
    const ShopItem& t = shop_catalog()[target_index_];
    return {"search[" + t.title + " " + t.category + " " + gold_.option_value + "]",
            "click[" + t.id + "]", "click[" + gold_.option_value + "]", "click[Buy Now]"};
  }

  json world_spec() const override {
    json items = json::array();
    for (const ShopItem& it : shop_catalog()) {
      json options = json::object();
      for (const auto& [group, values] : it.options) options[group] = values;
      items.push_back({{"id", it.id},
                       {"title", it.title},
                       {"category", it.category},
                       {"attrs", it.attrs},
                       {"options", options},
                       {"price", format_price(it.price_cents)}});
    }
    return json{{"catalog", items}};
  }

  std::string state_digest() const override {
    std::string s = std::to_string(static_cast<int>(phase_)) + "|" + query_ + "|" +
                    std::to_string(page_) + "|" + (done_ ? "1" : "0") + "|";
    for (std::size_t i : results_) s += shop_catalog()[i].id + ",";
    if (phase_ == Phase::Item) s += "|" + shop_catalog()[current_].id;
    for (const auto& [g, v] : selected_) s += "|" + g + "=" + v;
    return hex_digest(s);
  }

  const ShopGold& gold() const { return gold_; }

 private:
  enum class Phase { Search, Results, Item };

  void generate(std::uint64_t seed) {
    const std::vector<ShopItem>& catalog = shop_catalog();
    SplitMix64 rng(seed ^ fnv1a64("minishop-gold"));
    target_index_ = rng.below(catalog.size());
    const ShopItem& t = catalog[target_index_];

    gold_.category = t.category;
    std::size_t skip = rng.below(3);  // require the other two of the three attrs
    gold_.attrs.clear();
    for (std::size_t i = 0; i < t.attrs.size(); ++i) {
      if (i != skip) gold_.attrs.push_back(t.attrs[i]);
    }
    const auto& [group, values] = t.options[rng.below(t.options.size())];
    gold_.option_group = group;
    gold_.option_value = values[rng.below(values.size())];
    gold_.price_cap_cents = (t.price_cents / 100 + 1 + static_cast<int>(rng.below(20))) * 100;

    scenario_.env_id = std::string(kMiniShopId);
    scenario_.seed = seed;
    scenario_.id = scenario_id(kMiniShopId, seed);
    scenario_.task_type = "shop";
    scenario_.task_text = "i am looking for a " + gold_.attrs[0] + " " + gold_.attrs[1] + " " +
                          noun_of(t.title) + " in the " + gold_.category + " category, with " +
                          gold_.option_group + " " + gold_.option_value +
                          ", and price lower than " + format_price(gold_.price_cap_cents) +
                          " dollars.";
    scenario_.gold = json{{"category", gold_.category},
                          {"attrs", gold_.attrs},
                          {"option_group", gold_.option_group},
                          {"option_value", gold_.option_value},
                          {"price_cap", format_price(gold_.price_cap_cents)}};

    phase_ = Phase::Search;
    query_.clear();
    results_.clear();
    page_ = 0;
    current_ = 0;
    selected_.clear();
  }

  // The part of the title after the two leading attributes.
  static std::string noun_of(const std::string& title) {
    std::size_t first = title.find(' ');
    std::size_t second = title.find(' ', first + 1);
    return title.substr(second + 1);
  }

  std::string search_page() const {
    return "You are on the search page. Available actions: search[<query>].";
  }

  std::string results_page() const {
    std::size_t pages = (results_.size() + 4) / 5;
    std::string out = "Results for \"" + query_ + "\" (page " + std::to_string(page_ + 1) +
                      " of " + std::to_string(pages) + "):";
    for (std::size_t i = page_ * 5; i < std::min(results_.size(), (page_ + 1) * 5); ++i) {
      const ShopItem& it = shop_catalog()[results_[i]];
      out += "\n[" + it.id + "] " + it.title + " - $" + format_price(it.price_cents);
    }
    out += "\nAvailable actions: click[<item id>], click[Next >], click[Back to Search].";
    return out;
  }

  std::string item_page() const {
    const ShopItem& it = shop_catalog()[current_];
    std::string out = "[" + it.id + "] " + it.title;
    out += "\ncategory: " + it.category;
    out += "\nprice: $" + format_price(it.price_cents);
    out += "\nattributes: ";
    for (std::size_t i = 0; i < it.attrs.size(); ++i) out += (i ? ", " : "") + it.attrs[i];
    for (const auto& [group, values] : it.options) {
      out += "\n" + group + ": ";
      for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + values[i];
    }
    out += "\nAvailable actions: click[<option value>], click[Buy Now], click[Back to Search].";
    return out;
  }

  std::string apply(const std::string& a, StepResult& result) {
    auto nothing = [] { return std::string(kNothingHappens); };
    if (a.size() < 3 || a.back() != ']') return nothing();

    if (a.rfind("search[", 0) == 0) {
      if (phase_ != Phase::Search) return nothing();
      query_ = a.substr(7, a.size() - 8);
      run_search();
      if (results_.empty()) {
        return "No results found for \"" + query_ + "\". " + search_page();
      }
      phase_ = Phase::Results;
      page_ = 0;
      return results_page();
    }
    if (a.rfind("click[", 0) != 0) return nothing();
    const std::string what = a.substr(6, a.size() - 7);

    if (what == "buy now") {
      if (phase_ != Phase::Item) return nothing();
      done_ = true;
      result.done = true;
      result.reward = gold_.score(shop_catalog()[current_], selected_);
      return "Thank you for your purchase!";
    }
    if (what == "back to search") {
      if (phase_ == Phase::Search) return nothing();
      phase_ = Phase::Search;
      return "You are back on the search page. Available actions: search[<query>].";
    }
    if (what == "next >") {
      if (phase_ != Phase::Results || (page_ + 1) * 5 >= results_.size()) return nothing();
      ++page_;
      return results_page();
    }
    if (phase_ == Phase::Results) {
      for (std::size_t idx : results_) {
        if (to_lower(shop_catalog()[idx].id) == what) {
          phase_ = Phase::Item;
          current_ = idx;
          selected_.clear();
          return item_page();
        }
      }
      return nothing();
    }
    if (phase_ == Phase::Item) {
      for (const auto& [group, values] : shop_catalog()[current_].options) {
        if (std::find(values.begin(), values.end(), what) != values.end()) {
          selected_[group] = what;
          return "You select '" + what + "'.";
        }
      }
      return nothing();
    }
    return nothing();
  }

  void run_search() {
    const std::vector<ShopItem>& catalog = shop_catalog();
    std::vector<std::string> q = tokenize_words(query_);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());

    std::vector<std::pair<int, std::size_t>> scored;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const ShopItem& it = catalog[i];
      std::set<std::string> hay;
      for (const std::string& w : tokenize_words(it.title)) hay.insert(w);
      for (const std::string& w : tokenize_words(it.category)) hay.insert(w);
      for (const std::string& a : it.attrs) {
        for (const std::string& w : tokenize_words(a)) hay.insert(w);
      }
      for (const auto& [group, values] : it.options) {
        for (const std::string& v : values) {
          for (const std::string& w : tokenize_words(v)) hay.insert(w);
        }
      }
      int score = 0;
      for (const std::string& w : q) score += hay.count(w) ? 1 : 0;
      if (score > 0) scored.emplace_back(score, i);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& l, const auto& r) {
      if (l.first != r.first) return l.first > r.first;
      return catalog[l.second].id < catalog[r.second].id;
    });
    results_.clear();
    for (std::size_t i = 0; i < std::min<std::size_t>(scored.size(), 15); ++i) {
      results_.push_back(scored[i].second);
    }
  }

  Scenario scenario_;
  ShopGold gold_;
  std::size_t target_index_ = 0;
  Phase phase_ = Phase::Search;
  std::string query_;
  std::vector<std::size_t> results_;
  std::size_t page_ = 0;
  std::size_t current_ = 0;
  std::map<std::string, std::string> selected_;
};

}  // namespace hicrl
