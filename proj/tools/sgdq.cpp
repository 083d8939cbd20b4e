#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sgdq/engine.hpp"
#include "sgdq/generator.hpp"
#include "sgdq/ntriples.hpp"
#include "sgdq/oracle.hpp"
#include "sgdq/store.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kMismatch = 3, kCorrupt = 4 };

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sgdq::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<sgdq::Triple> read_inputs(const std::vector<std::string>& inputs) {
  std::vector<sgdq::Triple> triples;
  for (const std::string& path : inputs) {
    std::ifstream in(path);
    if (!in) throw sgdq::Error("cannot open " + path);
    try {
      auto part = sgdq::parse_ntriples(in);
      triples.insert(triples.end(), part.begin(), part.end());
    } catch (const sgdq::ParseError& e) {
      throw sgdq::Error(path + ":" + std::to_string(e.line()) + ":" +
                        std::to_string(e.column()) + ": " + e.detail());
    }
  }
  return triples;
}

std::set<sgdq::Term> read_forced(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw sgdq::Error("cannot open " + path);
  return sgdq::read_attribute_predicates(in);
}

// A query argument names a file when one exists at that path.
std::string query_text(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) return read_text(arg);
  return arg;
}

void write_rows(std::ostream& out, const std::vector<std::string>& columns,
                const std::vector<std::vector<sgdq::Term>>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "\t" : "") << '?' << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << '\t';
      if (!row[i].lexical.empty() || row[i].is_literal()) out << row[i].to_ntriples();
    }
    out << '\n';
  }
}

struct BuildArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string partitions = "auto";
  std::string attribute_predicates;
  std::string partition_file;
  std::string export_partition;
  std::uint64_t seed = 1;
  double eps = 0.05;
  bool force = false;
};

int cmd_build(const BuildArgs& a) {
  sgdq::BuildOptions options;
  if (a.partitions != "auto") {
    try {
      std::size_t used = 0;
      unsigned long n = std::stoul(a.partitions, &used);
      if (used != a.partitions.size() || n == 0) throw std::invalid_argument("n");
      options.partitions = static_cast<std::uint32_t>(n);
    } catch (const std::exception&) {
      std::cerr << "error: --partitions expects a positive integer or 'auto'\n";
      return kUsage;
    }
  }
  options.attribute_predicates = read_forced(a.attribute_predicates);
  options.partitioner.seed = a.seed;
  options.partitioner.balance_eps = a.eps;
  if (!a.partition_file.empty()) {
    std::ifstream in(a.partition_file);
    if (!in) throw sgdq::Error("cannot open " + a.partition_file);
    options.assignment = sgdq::read_partition_file(in);
    if (!options.partitions) {
      std::uint32_t n = 0;
      for (const auto& p : *options.assignment) {
        if (p) n = std::max(n, *p + 1);
      }
      options.partitions = n;
    }
  }
  auto triples = read_inputs(a.inputs);
  std::vector<std::string> warnings;
  sgdq::Store store = sgdq::build_store(triples, options, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  sgdq::save_store(store, a.out, a.force);
  if (!a.export_partition.empty()) {
    std::ofstream out(a.export_partition);
    sgdq::write_partition_file(out, sgdq::export_assignment(store));
  }
  sgdq::write_report_table(std::cout, store.report);
  sgdq::write_report_kv(std::cout, store.report);
  return kOk;
}

struct QueryArgs {
  std::string store;
  std::string query;
  std::string order = "auto";
  std::string verify = "anchored";
  unsigned parallel = 1;
  bool stats = false;
  bool oracle_check = false;
  bool debug = false;
};

int cmd_query(const QueryArgs& a) {
  sgdq::Query query = sgdq::parse_query(query_text(a.query));
  sgdq::Store store = sgdq::open_store(a.store);
  sgdq::EngineOptions options;
  options.parallel = std::max(1u, a.parallel);
  options.debug = a.debug;
  options.order = a.order == "id" ? sgdq::OrderPolicy::Id : sgdq::OrderPolicy::Auto;
  options.verify =
      a.verify == "last-only" ? sgdq::VerifyPolicy::LastOnly : sgdq::VerifyPolicy::Anchored;
  sgdq::QueryResult result = sgdq::execute(store, query, options);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  write_rows(std::cout, result.columns, result.rows);
  if (a.stats) {
    result.stats.write(std::cerr);
    std::vector<std::string> names{"query"};
    sgdq::write_stats_table(std::cerr, names, std::span(&result.stats, 1));
  }
  if (a.oracle_check) {
    sgdq::OracleResult expected = sgdq::oracle_eval(store.dataset(), query);
    std::set<std::vector<sgdq::Term>> got(result.rows.begin(), result.rows.end());
    if (got != expected.rows || got.size() != result.rows.size()) {
      std::cerr << "oracle mismatch: engine " << result.rows.size() << " rows, oracle "
                << expected.rows.size() << " rows\n";
      return kMismatch;
    }
    std::cerr << "oracle check passed (" << expected.rows.size() << " rows)\n";
  }
  return kOk;
}

struct GenArgs {
  std::string kind = "social";
  std::uint64_t triples = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  auto kind = sgdq::parse_generator_kind(a.kind);
  if (!kind) {
    std::cerr << "error: unknown generator kind " << a.kind << '\n';
    return kUsage;
  }
  auto triples = sgdq::generate_dataset(*kind, a.triples, a.seed);
  if (a.out.empty()) {
    sgdq::write_ntriples(std::cout, triples);
  } else {
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    sgdq::write_ntriples(out, triples);
    if (!out) throw sgdq::Error("cannot write " + a.out);
  }
  return kOk;
}

struct OracleArgs {
  std::vector<std::string> inputs;
  std::string store;
  std::string query;
  std::string attribute_predicates;
};

int cmd_oracle(const OracleArgs& a) {
  sgdq::Query query = sgdq::parse_query(query_text(a.query));
  sgdq::Dataset dataset;
  if (!a.store.empty()) {
    dataset = sgdq::open_store(a.store).dataset();
  } else {
    dataset = sgdq::load_dataset(read_inputs(a.inputs), read_forced(a.attribute_predicates));
  }
  sgdq::OracleResult result = sgdq::oracle_eval(dataset, query);
  std::vector<std::vector<sgdq::Term>> rows(result.rows.begin(), result.rows.end());
  write_rows(std::cout, result.schema, rows);
  return kOk;
}

struct ExportArgs {
  std::vector<std::string> inputs;
  std::string attribute_predicates;
  std::string out;
};

int cmd_export_graph(const ExportArgs& a) {
  sgdq::Dataset dataset =
      sgdq::load_dataset(read_inputs(a.inputs), read_forced(a.attribute_predicates));
  sgdq::PredicateDictionary predicates(dataset.classes);
  sgdq::RlGraph graph = sgdq::build_rl_graph(dataset, predicates);
  if (a.out.empty()) {
    sgdq::write_metis_graph(std::cout, graph);
  } else {
    std::ofstream out(a.out);
    sgdq::write_metis_graph(out, graph);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgdq: partitioned RDF store driven by summary-graph matching"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a store directory from N-Triples");
  b->add_option("--input", build.inputs, "N-Triples file (repeatable)")->required();
  b->add_option("--out", build.out, "Store directory")->required();
  b->add_option("--partitions", build.partitions, "Partition count or 'auto'");
  b->add_option("--attribute-predicates", build.attribute_predicates,
                "File of predicates forced to be attributes");
  b->add_option("--partition-file", build.partition_file,
                "Import a partition assignment (line k: partition of vertex k)");
  b->add_option("--export-partition", build.export_partition,
                "Write the computed assignment in the same format");
  b->add_option("--seed", build.seed, "Partitioner seed");
  b->add_option("--balance-eps", build.eps, "Allowed part size imbalance");
  b->add_flag("--force", build.force, "Overwrite a non-empty output directory");

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Run a query against a store");
  q->add_option("--store", query.store, "Store directory")->required();
  q->add_option("--query", query.query, "Query text or file")->required();
  q->add_flag("--stats", query.stats, "Print counters to stderr");
  q->add_flag("--oracle-check", query.oracle_check, "Compare with the brute-force oracle");
  q->add_option("--parallel", query.parallel, "Worker threads");
  q->add_option("--order", query.order, "Match order")
      ->check(CLI::IsMember({"auto", "id"}));
  q->add_option("--verify", query.verify, "Duplicate-avoidance rule")
      ->check(CLI::IsMember({"anchored", "last-only"}));
  q->add_flag("--debug", query.debug, "Re-check match rows against the dataset");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic dataset");
  g->add_option("--kind", gen.kind, "random, powerlaw or social");
  g->add_option("--triples", gen.triples, "Number of distinct triples");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--out", gen.out, "Output file (default stdout)");

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Evaluate a query by brute force");
  o->add_option("--input", oracle.inputs, "N-Triples file (repeatable)");
  o->add_option("--store", oracle.store, "Store directory");
  o->add_option("--query", oracle.query, "Query text or file")->required();
  o->add_option("--attribute-predicates", oracle.attribute_predicates,
                "File of predicates forced to be attributes");

  ExportArgs exp;
  auto* e = app.add_subcommand("export-graph", "Write the RL-graph in METIS format");
  e->add_option("--input", exp.inputs, "N-Triples file (repeatable)")->required();
  e->add_option("--attribute-predicates", exp.attribute_predicates,
                "File of predicates forced to be attributes");
  e->add_option("--out", exp.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kOk : kUsage;
  }

  try {
    if (*b) return cmd_build(build);
    if (*q) return cmd_query(query);
    if (*g) return cmd_gen(gen);
    if (*o) {
      if (oracle.inputs.empty() == oracle.store.empty()) {
        std::cerr << "error: oracle needs exactly one of --input or --store\n";
        return kUsage;
      }
      return cmd_oracle(oracle);
    }
    if (*e) return cmd_export_graph(exp);
  } catch (const sgdq::StoreCorruptError& err) {
    std::cerr << "store error: " << err.what() << '\n';
    return kCorrupt;
  } catch (const sgdq::ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return kUsage;
  } catch (const sgdq::UnsupportedFeatureError& err) {
    std::cerr << "unsupported: " << err.what() << '\n';
    return kUsage;
  } catch (const sgdq::QueryError& err) {
    std::cerr << "query error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
