#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sgdq/dictionary.hpp"

namespace sgdq {

// Rows of VertexIDs over a schema of query vertex indices. Zero-width tables
// are allowed: one row means "true", no rows means "false".
class BindingTable {
 public:
  static constexpr std::uint32_t kNotSorted = UINT32_MAX;

  BindingTable() = default;
  explicit BindingTable(std::vector<std::uint32_t> schema)
      : schema_(std::move(schema)) {}
  static BindingTable unit() {
    BindingTable t;
    t.rows_ = 1;
    return t;
  }

  const std::vector<std::uint32_t>& schema() const { return schema_; }
  std::size_t width() const { return schema_.size(); }
  std::size_t rows() const { return rows_; }
  bool empty() const { return rows_ == 0; }

  std::span<const VertexId> row(std::size_t i) const {
    return {data_.data() + i * width(), width()};
  }
  VertexId at(std::size_t row, std::size_t col) const {
    return data_[row * width() + col];
  }
  void add_row(std::span<const VertexId> values) {
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }
  void reserve(std::size_t rows) { data_.reserve(rows * width()); }

  std::optional<std::size_t> column_of(std::uint32_t vertex) const;

  // Query vertex the rows are sorted on, or kNotSorted.
  std::uint32_t sorted_on() const { return sorted_on_; }
  void set_sorted_on(std::uint32_t vertex) { sorted_on_ = vertex; }

  const std::vector<VertexId>& data() const { return data_; }

 private:
  std::vector<std::uint32_t> schema_;
  std::vector<VertexId> data_;
  std::size_t rows_ = 0;
  std::uint32_t sorted_on_ = kNotSorted;
};

enum class JoinAlgorithm : std::uint8_t { Merge, Hash, Cross };

// Natural join on all shared schema vertices. Merge join when exactly one
// vertex is shared and both inputs are sorted on it, hash join otherwise,
// cross product when nothing is shared. Output schema: left schema followed
// by the right-only columns.
BindingTable op_ipj(const BindingTable& left, const BindingTable& right,
                    JoinAlgorithm* used = nullptr);

BindingTable hash_join(const BindingTable& left, const BindingTable& right);
BindingTable merge_join(const BindingTable& left, const BindingTable& right);
BindingTable cross_product(const BindingTable& left, const BindingTable& right);

// Sorts rows lexicographically and removes duplicates.
void sort_unique(BindingTable& table);

}  // namespace sgdq
