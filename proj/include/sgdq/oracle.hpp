#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sgdq/dataset.hpp"
#include "sgdq/error.hpp"
#include "sgdq/query.hpp"

namespace sgdq {

struct OracleResult {
  std::vector<std::string> schema;
  std::set<std::vector<Term>> rows;
};

class OracleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Nested-loop evaluation of every pattern over every triple of the dataset,
// on Terms. `max_steps` > 0 bounds the number of candidate bindings tried
// and throws OracleBudgetExceeded when exceeded.
OracleResult oracle_eval(const Dataset& dataset, const Query& query,
                         std::uint64_t max_steps = 0);

}  // namespace sgdq
