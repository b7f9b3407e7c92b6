#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hyperqf {

// Outcome of one checked law. A failing verdict carries the first offending tuple
// (element or basis indices, in the order the law quantifies them) and the name of
// the clause that broke.
struct Verdict {
  std::string name;
  bool holds = true;
  std::string clause;
  std::vector<int> witness;

  void fail(std::string failed_clause, std::vector<int> w) {
    if (!holds) return;
    holds = false;
    clause = std::move(failed_clause);
    witness = std::move(w);
  }

  explicit operator bool() const { return holds; }
};

class VerdictList {
 public:
  Verdict& add(std::string name) {
    items_.push_back(Verdict{std::move(name), true, {}, {}});
    return items_.back();
  }

  void push(Verdict v) { items_.push_back(std::move(v)); }

  const Verdict& get(const std::string& name) const {
    for (const auto& v : items_) {
      if (v.name == name) return v;
    }
    throw std::out_of_range("no verdict named " + name);
  }

  bool has(const std::string& name) const {
    for (const auto& v : items_) {
      if (v.name == name) return true;
    }
    return false;
  }

  bool all_hold() const {
    for (const auto& v : items_) {
      if (!v.holds) return false;
    }
    return true;
  }

  const std::deque<Verdict>& items() const { return items_; }

 private:
  std::deque<Verdict> items_;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hyperqf
