#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pql {

// Multiset of place ids. Absent keys count as zero.
class Marking {
 public:
  Marking() = default;
  Marking(std::initializer_list<std::string> places);

  unsigned operator[](const std::string& place) const;
  void add(const std::string& place, unsigned n = 1);

  Marking operator+(const Marking& other) const;  // multiset union
  Marking operator-(const Marking& other) const;  // truncated difference
  std::size_t size() const;                       // cardinality
  bool empty() const { return counts_.empty(); }
  bool covers(const Marking& other) const;

  const std::map<std::string, unsigned>& counts() const { return counts_; }
  std::string str() const;

  bool operator==(const Marking&) const = default;
  auto operator<=>(const Marking&) const = default;

 private:
  std::map<std::string, unsigned> counts_;
};

// Dense token vector indexed by place position.
using Tokens = std::vector<std::uint32_t>;

struct TokensHash {
  std::size_t operator()(const Tokens& t) const noexcept;
};

// Labeled place/transition net with an initial marking. Immutable once built;
// places and transitions are kept sorted by id so indices are deterministic.
class NetSystem {
 public:
  NetSystem() = default;

  const std::vector<std::string>& places() const { return places_; }
  const std::vector<std::string>& transitions() const { return transitions_; }
  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }

  std::optional<std::size_t> find_place(std::string_view id) const;
  std::optional<std::size_t> find_transition(std::string_view id) const;
  std::size_t place_index(std::string_view id) const;       // throws ModelError
  std::size_t transition_index(std::string_view id) const;  // throws ModelError
  bool has_node(std::string_view id) const;

  const std::string& label(std::size_t t) const { return labels_[t]; }
  const std::string& label(std::string_view t) const { return labels_[transition_index(t)]; }
  bool silent(std::size_t t) const { return labels_[t].empty(); }

  // Arcs are unweighted, so presets and postsets are plain sorted index lists.
  const std::vector<std::size_t>& preset(std::size_t t) const { return pre_[t]; }
  const std::vector<std::size_t>& postset(std::size_t t) const { return post_[t]; }
  const std::vector<std::size_t>& producers(std::size_t p) const { return producers_[p]; }
  const std::vector<std::size_t>& consumers(std::size_t p) const { return consumers_[p]; }

  const Marking& initial_marking() const { return initial_; }
  std::vector<std::pair<std::string, std::string>> arcs() const;
  std::set<std::string> observable_labels() const;
  std::vector<std::size_t> transitions_labelled(const std::set<std::string>& labels) const;

  Tokens dense(const Marking& m) const;
  Marking sparse(const Tokens& t) const;
  bool enabled(const Tokens& m, std::size_t t) const;
  void fire(Tokens& m, std::size_t t) const;

  // True iff the flow relation contains a directed cycle.
  bool cyclic() const;

 private:
  friend class NetBuilder;

  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> pre_, post_, producers_, consumers_;
  std::unordered_map<std::string, std::size_t> place_ids_, transition_ids_;
  Marking initial_;
};

class NetBuilder {
 public:
  NetBuilder() = default;
  explicit NetBuilder(const NetSystem& system);

  NetBuilder& place(const std::string& id, unsigned tokens = 0);
  NetBuilder& transition(const std::string& id, const std::string& label = {});
  NetBuilder& arc(const std::string& from, const std::string& to);
  NetBuilder& remove_arc(const std::string& from, const std::string& to);
  NetBuilder& tokens(const std::string& place, unsigned n);
  NetBuilder& label(const std::string& transition, const std::string& label);

  bool has_node(const std::string& id) const;
  // Returns `base` or `base#k` for the smallest k making the id unused.
  std::string fresh_id(const std::string& base) const;

  NetSystem build() const;  // throws ModelError on invariant violation

 private:
  std::map<std::string, unsigned> places_;
  std::map<std::string, std::string> transitions_;
  std::set<std::pair<std::string, std::string>> arcs_;
};

// A sequence of transition ids.
using Execution = std::vector<std::string>;

bool enabled(const NetSystem& system, const Marking& m, const std::string& t);
Marking fire(const NetSystem& system, const Marking& m, const std::string& t);

struct WorkflowCheck {
  bool ok = false;
  std::string source;
  std::string sink;
  std::string violation;
};

WorkflowCheck is_workflow(const NetSystem& system);

// Sink of a workflow-shaped net: the unique place without consumers.
std::optional<std::size_t> sink_place(const NetSystem& system);

std::vector<std::string> label_execution(const NetSystem& system, const Execution& e);

}  // namespace pql
