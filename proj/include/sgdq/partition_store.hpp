#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sgdq/binding_table.hpp"
#include "sgdq/bitvector.hpp"
#include "sgdq/dictionary.hpp"
#include "sgdq/partitioner.hpp"
#include "sgdq/rl_graph.hpp"
#include "sgdq/subquery.hpp"

namespace sgdq {

struct IdTriple {
  VertexId s = 0;
  PredicateId p = 0;
  VertexId o = 0;
  friend auto operator<=>(const IdTriple&, const IdTriple&) = default;
};

enum class Ordering : std::uint8_t { SPO, SOP, PSO, POS, OSP, OPS };
inline constexpr std::array<Ordering, 6> kAllOrderings = {
    Ordering::SPO, Ordering::SOP, Ordering::PSO,
    Ordering::POS, Ordering::OSP, Ordering::OPS};
const char* ordering_name(Ordering ordering);

// A triple with its components permuted into index order.
struct Key3 {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
  friend auto operator<=>(const Key3&, const Key3&) = default;
};

Key3 permute(Ordering ordering, const IdTriple& t);
IdTriple unpermute(Ordering ordering, const Key3& k);

// Six sorted permutations of one triple set.
class PermutationIndexSet {
 public:
  PermutationIndexSet() = default;
  // Sorts and deduplicates.
  explicit PermutationIndexSet(std::vector<IdTriple> triples);
  // Takes already sorted arrays (as loaded from disk). Throws
  // StoreCorruptError if they are unsorted or disagree in size.
  static PermutationIndexSet from_arrays(std::array<std::vector<Key3>, 6> arrays);

  std::size_t size() const { return indexes_[0].size(); }
  const std::vector<Key3>& index(Ordering ordering) const {
    return indexes_[static_cast<int>(ordering)];
  }
  // Entries whose leading components equal `prefix` (0 to 3 values).
  std::span<const Key3> scan(Ordering ordering,
                             std::span<const std::uint32_t> prefix) const;

 private:
  std::array<std::vector<Key3>, 6> indexes_;
};

// One expanded partition as a self-contained triple store.
class PartitionStore {
 public:
  PartitionStore() = default;
  PartitionStore(std::uint32_t id, VertexRange original_range,
                 BitVector p_vector, PermutationIndexSet indexes,
                 std::uint32_t predicate_count);

  std::uint32_t id() const { return id_; }
  VertexRange original_range() const { return range_; }
  const BitVector& p_vector() const { return p_vector_; }
  bool contains_vertex(VertexId v) const { return p_dense_.test(v - 1); }
  const PermutationIndexSet& indexes() const { return indexes_; }
  std::size_t size() const { return indexes_.size(); }

  std::uint64_t frequency(PredicateId p) const {
    return p < frequency_.size() ? frequency_[p] : 0;
  }
  const std::vector<std::uint64_t>& frequencies() const { return frequency_; }
  // Distinct predicates, ascending.
  std::vector<PredicateId> labels() const;

 private:
  std::uint32_t id_ = 0;
  VertexRange range_;
  BitVector p_vector_;
  DenseBits p_dense_;
  PermutationIndexSet indexes_;
  std::vector<std::uint64_t> frequency_;
};

// `graph` is the renumbered RL-graph the partition's edge indices refer to.
PartitionStore build_partition_store(const ExpandedPartition& partition,
                                     const RlGraph& graph,
                                     std::uint32_t predicate_count);

// Duplicate-avoidance filter applied by Op_sp.
enum class VerifyMode : std::uint8_t {
  None,
  SubjectInRange,  // TypeI last position: subject inside original_range
  Quorum,          // TypeII last position: >= k-1 variables inside the range
  Anchor,          // one designated query vertex inside the range
};

struct VerifySpec {
  VerifyMode mode = VerifyMode::None;
  std::uint32_t anchor = 0;  // query vertex index for VerifyMode::Anchor
};

// Output schema: the sub-query's variable vertices, ascending. Rows are
// unique.
BindingTable op_sp(const SubQuery& sq, const PartitionStore& part,
                   const FilterContext& ctx, const VerifySpec& verify);

BindingTable op_sp_type1(const SubQuery& sq, const PartitionStore& part,
                         const FilterContext& ctx, bool is_last);
BindingTable op_sp_type2(const SubQuery& sq, const PartitionStore& part,
                         const FilterContext& ctx, bool is_last);

// Candidate estimate of one pattern: min of the partition's predicate
// frequency and the set-bit counts of its endpoint masks.
std::uint64_t pattern_estimate(const RPattern& pattern,
                               const PartitionStore& part,
                               const FilterContext& ctx);

// Pattern positions of `sq` in ascending estimate order (stable).
std::vector<std::size_t> plan_type2(const SubQuery& sq,
                                    const PartitionStore& part,
                                    const FilterContext& ctx);

// Executes the join plan in `order` and reports the number of intermediate
// rows produced (used for plan-quality measurements).
BindingTable execute_type2_plan(const SubQuery& sq, const PartitionStore& part,
                                const FilterContext& ctx,
                                std::span<const std::size_t> order,
                                const VerifySpec& verify,
                                std::uint64_t* intermediate_rows = nullptr);

}  // namespace sgdq
