#include "sgdq/binding_table.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace sgdq {
namespace {

struct JoinLayout {
  std::vector<std::size_t> left_keys;
  std::vector<std::size_t> right_keys;
  std::vector<std::size_t> right_rest;
  std::vector<std::uint32_t> schema;
};

JoinLayout layout(const BindingTable& left, const BindingTable& right) {
  JoinLayout l;
  l.schema = left.schema();
  for (std::size_t j = 0; j < right.width(); ++j) {
    if (auto i = left.column_of(right.schema()[j])) {
      l.left_keys.push_back(*i);
      l.right_keys.push_back(j);
    } else {
      l.right_rest.push_back(j);
      l.schema.push_back(right.schema()[j]);
    }
  }
  return l;
}

std::uint64_t key_hash(std::span<const VertexId> row,
                       const std::vector<std::size_t>& cols) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t c : cols) {
    h ^= row[c];
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return h;
}

bool keys_equal(std::span<const VertexId> a, const std::vector<std::size_t>& ca,
                std::span<const VertexId> b, const std::vector<std::size_t>& cb) {
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (a[ca[i]] != b[cb[i]]) return false;
  }
  return true;
}

void emit(BindingTable& out, std::vector<VertexId>& buffer,
          std::span<const VertexId> left, std::span<const VertexId> right,
          const std::vector<std::size_t>& right_rest) {
  buffer.assign(left.begin(), left.end());
  for (std::size_t c : right_rest) buffer.push_back(right[c]);
  out.add_row(buffer);
}

}  // namespace

std::optional<std::size_t> BindingTable::column_of(std::uint32_t vertex) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i] == vertex) return i;
  }
  return std::nullopt;
}

BindingTable hash_join(const BindingTable& left, const BindingTable& right) {
  JoinLayout l = layout(left, right);
  BindingTable out(l.schema);
  out.set_sorted_on(left.sorted_on());
  if (left.empty() || right.empty()) return out;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index;
  index.reserve(right.rows());
  for (std::size_t r = 0; r < right.rows(); ++r) {
    index[key_hash(right.row(r), l.right_keys)].push_back(static_cast<std::uint32_t>(r));
  }
  std::vector<VertexId> buffer;
  for (std::size_t i = 0; i < left.rows(); ++i) {
    auto lrow = left.row(i);
    auto it = index.find(key_hash(lrow, l.left_keys));
    if (it == index.end()) continue;
    for (std::uint32_t r : it->second) {
      auto rrow = right.row(r);
      if (keys_equal(lrow, l.left_keys, rrow, l.right_keys)) {
        emit(out, buffer, lrow, rrow, l.right_rest);
      }
    }
  }
  return out;
}

BindingTable merge_join(const BindingTable& left, const BindingTable& right) {
  JoinLayout l = layout(left, right);
  BindingTable out(l.schema);
  if (l.left_keys.size() != 1) return hash_join(left, right);
  const std::size_t lc = l.left_keys[0];
  const std::size_t rc = l.right_keys[0];
  out.set_sorted_on(left.schema()[lc]);
  std::vector<VertexId> buffer;
  std::size_t i = 0, j = 0;
  while (i < left.rows() && j < right.rows()) {
    VertexId a = left.at(i, lc);
    VertexId b = right.at(j, rc);
    if (a < b) {
      ++i;
    } else if (b < a) {
      ++j;
    } else {
      std::size_t i_end = i, j_end = j;
      while (i_end < left.rows() && left.at(i_end, lc) == a) ++i_end;
      while (j_end < right.rows() && right.at(j_end, rc) == a) ++j_end;
      for (std::size_t x = i; x < i_end; ++x) {
        for (std::size_t y = j; y < j_end; ++y) {
          emit(out, buffer, left.row(x), right.row(y), l.right_rest);
        }
      }
      i = i_end;
      j = j_end;
    }
  }
  return out;
}

BindingTable cross_product(const BindingTable& left, const BindingTable& right) {
  JoinLayout l = layout(left, right);
  BindingTable out(l.schema);
  out.set_sorted_on(left.sorted_on());
  out.reserve(left.rows() * right.rows());
  std::vector<VertexId> buffer;
  for (std::size_t i = 0; i < left.rows(); ++i) {
    for (std::size_t j = 0; j < right.rows(); ++j) {
      if (!keys_equal(left.row(i), l.left_keys, right.row(j), l.right_keys)) continue;
      emit(out, buffer, left.row(i), right.row(j), l.right_rest);
    }
  }
  return out;
}

BindingTable op_ipj(const BindingTable& left, const BindingTable& right,
                    JoinAlgorithm* used) {
  JoinLayout l = layout(left, right);
  JoinAlgorithm algo = JoinAlgorithm::Hash;
  if (l.left_keys.empty()) {
    algo = JoinAlgorithm::Cross;
  } else if (l.left_keys.size() == 1) {
    std::uint32_t shared = left.schema()[l.left_keys[0]];
    if (left.sorted_on() == shared && right.sorted_on() == shared) {
      algo = JoinAlgorithm::Merge;
    }
  }
  if (used) *used = algo;
  switch (algo) {
    case JoinAlgorithm::Merge:
      return merge_join(left, right);
    case JoinAlgorithm::Cross:
      return cross_product(left, right);
    default:
      return hash_join(left, right);
  }
}

void sort_unique(BindingTable& table) {
  const std::size_t w = table.width();
  std::vector<std::size_t> order(table.rows());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = table.row(a), rb = table.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  BindingTable out(table.schema());
  out.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0) {
      auto prev = table.row(order[k - 1]), cur = table.row(order[k]);
      if (std::equal(prev.begin(), prev.end(), cur.begin())) continue;
    }
    out.add_row(table.row(order[k]));
  }
  if (w > 0) out.set_sorted_on(table.schema()[0]);
  table = std::move(out);
}

}  // namespace sgdq
