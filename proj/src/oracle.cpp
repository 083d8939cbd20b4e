#include "sgdq/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace sgdq {
namespace {

struct Slot {
  bool variable = false;
  std::uint32_t value = 0;  // variable index or term id
};

struct Pat {
  Slot s;
  std::uint32_t p = 0;
  bool p_known = true;
  Slot o;
};

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t{a} << 32) | b;
}

class Evaluator {
 public:
  Evaluator(const Dataset& d, const Query& q, std::uint64_t max_steps)
      : max_steps_(max_steps) {
    for (const Triple& t : d.triples) {
      std::uint32_t s = intern(t.s), p = intern(t.p), o = intern(t.o);
      by_p_[p].push_back({s, o});
      by_ps_[pair_key(p, s)].push_back(o);
      by_po_[pair_key(p, o)].push_back(s);
    }
    std::map<std::string, std::uint32_t> vars;
    auto slot = [&](const QueryTerm& t) {
      Slot sl;
      if (is_variable(t)) {
        sl.variable = true;
        auto [it, inserted] = vars.emplace(variable_name(t), vars.size());
        sl.value = it->second;
      } else {
        auto it = ids_.find(std::get<Term>(t));
        sl.value = it == ids_.end() ? UINT32_MAX : it->second;
      }
      return sl;
    };
    for (const TriplePattern& tp : q.patterns) {
      Pat pat;
      pat.s = slot(tp.s);
      auto it = ids_.find(tp.p);
      pat.p_known = it != ids_.end();
      pat.p = pat.p_known ? it->second : 0;
      pat.o = slot(tp.o);
      patterns_.push_back(pat);
    }
    var_count_ = vars.size();
    for (const std::string& v : q.projection()) {
      auto it = vars.find(v);
      projection_.push_back(it == vars.end() ? UINT32_MAX : it->second);
    }
  }

  OracleResult run(std::vector<std::string> schema) {
    OracleResult result;
    result.schema = std::move(schema);
    for (const Pat& p : patterns_) {
      if (!p.p_known) return result;
      if (!p.s.variable && p.s.value == UINT32_MAX) return result;
      if (!p.o.variable && p.o.value == UINT32_MAX) return result;
    }
    binding_.assign(var_count_, UINT32_MAX);
    done_.assign(patterns_.size(), false);
    search(0, result);
    return result;
  }

 private:
  std::uint32_t intern(const Term& t) {
    auto [it, inserted] = ids_.emplace(t, static_cast<std::uint32_t>(terms_.size()));
    if (inserted) terms_.push_back(t);
    return it->second;
  }

  std::uint32_t value(const Slot& s) const {
    return s.variable ? binding_[s.value] : s.value;
  }

  std::size_t candidates(const Pat& p) const {
    std::uint32_t s = value(p.s), o = value(p.o);
    if (s != UINT32_MAX) {
      auto it = by_ps_.find(pair_key(p.p, s));
      return it == by_ps_.end() ? 0 : it->second.size();
    }
    if (o != UINT32_MAX) {
      auto it = by_po_.find(pair_key(p.p, o));
      return it == by_po_.end() ? 0 : it->second.size();
    }
    auto it = by_p_.find(p.p);
    return it == by_p_.end() ? 0 : it->second.size();
  }

  void step() {
    if (max_steps_ != 0 && ++steps_ > max_steps_) {
      throw OracleBudgetExceeded("oracle step budget exceeded");
    }
  }

  // Binds `slot` to `v`; returns false on conflict. `bound` records new
  // bindings for undo.
  bool bind(const Slot& slot, std::uint32_t v, std::vector<std::uint32_t>& bound) {
    if (!slot.variable) return slot.value == v;
    std::uint32_t& b = binding_[slot.value];
    if (b == UINT32_MAX) {
      b = v;
      bound.push_back(slot.value);
      return true;
    }
    return b == v;
  }

  void search(std::size_t depth, OracleResult& result) {
    if (depth == patterns_.size()) {
      std::vector<Term> row;
      for (std::uint32_t v : projection_) {
        row.push_back(v == UINT32_MAX ? Term{} : terms_[binding_[v]]);
      }
      result.rows.insert(std::move(row));
      return;
    }
    std::size_t pick = SIZE_MAX, best = SIZE_MAX;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (done_[i]) continue;
      std::size_t c = candidates(patterns_[i]);
      if (c < best) {
        best = c;
        pick = i;
      }
    }
    const Pat& p = patterns_[pick];
    done_[pick] = true;
    std::uint32_t s = value(p.s), o = value(p.o);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> matches;
    if (s != UINT32_MAX) {
      auto it = by_ps_.find(pair_key(p.p, s));
      if (it != by_ps_.end()) {
        for (std::uint32_t x : it->second) matches.push_back({s, x});
      }
    } else if (o != UINT32_MAX) {
      auto it = by_po_.find(pair_key(p.p, o));
      if (it != by_po_.end()) {
        for (std::uint32_t x : it->second) matches.push_back({x, o});
      }
    } else {
      auto it = by_p_.find(p.p);
      if (it != by_p_.end()) matches = it->second;
    }
    std::vector<std::uint32_t> bound;
    for (const auto& [ms, mo] : matches) {
      step();
      bound.clear();
      if (bind(p.s, ms, bound) && bind(p.o, mo, bound)) search(depth + 1, result);
      for (std::uint32_t v : bound) binding_[v] = UINT32_MAX;
    }
    done_[pick] = false;
  }

  std::uint64_t max_steps_;
  std::uint64_t steps_ = 0;
  std::unordered_map<Term, std::uint32_t> ids_;
  std::vector<Term> terms_;
  std::unordered_map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_p_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_ps_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_po_;
  std::vector<Pat> patterns_;
  std::size_t var_count_ = 0;
  std::vector<std::uint32_t> projection_;
  std::vector<std::uint32_t> binding_;
  std::vector<bool> done_;
};

}  // namespace

OracleResult oracle_eval(const Dataset& dataset, const Query& query,
                         std::uint64_t max_steps) {
  return Evaluator(dataset, query, max_steps).run(query.projection());
}

}  // namespace sgdq
