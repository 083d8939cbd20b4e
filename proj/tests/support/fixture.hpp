#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sgdq/store.hpp"
#include "sgdq/query.hpp"

namespace sgdq {
inline void PrintTo(const Term& t, std::ostream* os) { *os << t.to_ntriples(); }
}  // namespace sgdq

namespace sgdq::testing {

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);

std::vector<Triple> fixture_triples();
// Partition assignment {u1,u3,p1,r1,r2} / {u2,p2,r3,r4} by provisional index.
std::vector<std::optional<std::uint32_t>> fixture_assignment();
Store fixture_store();
Query reply_chain_query();

Term ex(const std::string& local);    // http://example.org/<local>
Term sioc(const std::string& local);
Term foaf(const std::string& local);

}  // namespace sgdq::testing
