#include "fixture.hpp"

#include <fstream>
#include <sstream>

#include "sgdq/error.hpp"
#include "sgdq/ntriples.hpp"
#include "sgdq/partitioner.hpp"

namespace sgdq::testing {

std::string data_path(const std::string& name) {
  return std::string(SGDQ_TEST_DATA_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Triple> fixture_triples() {
  return parse_ntriples(read_file(data_path("social.nt")));
}

std::vector<std::optional<std::uint32_t>> fixture_assignment() {
  std::istringstream in(read_file(data_path("social.partition")));
  return read_partition_file(in);
}

Store fixture_store() {
  BuildOptions options;
  options.partitions = 2;
  options.assignment = fixture_assignment();
  return build_store(fixture_triples(), options);
}

Query reply_chain_query() { return parse_query(read_file(data_path("reply_chain.rq"))); }

Term ex(const std::string& local) { return Term::iri("http://example.org/" + local); }
Term sioc(const std::string& local) { return Term::iri("http://rdfs.org/sioc/ns#" + local); }
Term foaf(const std::string& local) { return Term::iri("http://xmlns.com/foaf/0.1/" + local); }

}  // namespace sgdq::testing
