#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sgdq/attribute_index.hpp"
#include "sgdq/dataset.hpp"
#include "sgdq/dictionary.hpp"
#include "sgdq/partition_store.hpp"
#include "sgdq/partitioner.hpp"
#include "sgdq/summary_graph.hpp"

namespace sgdq {

inline constexpr std::uint32_t kStoreFormatVersion = 1;

struct BuildOptions {
  std::optional<std::uint32_t> partitions;  // nullopt: automatic
  std::set<Term> attribute_predicates;
  // Imported assignment keyed by provisional vertex index.
  std::optional<std::vector<std::optional<std::uint32_t>>> assignment;
  PartitionOptions partitioner;
};

// Everything the query side needs. Copies share the lazily loaded dataset.
class Store {
 public:
  PredicateDictionary predicates;
  DictionaryR dict_r;
  DictionaryA dict_a;
  AttributeIndexes a_indexes;
  std::vector<PartitionStore> partitions;
  SummaryGraph summary;
  PartitionReport report;
  std::vector<std::uint64_t> predicate_frequency;  // over D_R and D_A
  std::string partitioner_id;
  std::uint64_t seed = 0;

  // The undivided dataset (loaded on first use for stores opened from disk).
  const Dataset& dataset() const;
  void set_dataset(Dataset dataset);
  void set_dataset_loader(std::function<Dataset()> loader);

 private:
  struct Lazy;
  std::shared_ptr<Lazy> lazy_;
};

// The offline pipeline: classify, dictionaries, RL-graph, partitioning,
// 1-UHC, bitmap indexes, partition stores, summary graph.
Store build_store(std::span<const Triple> triples, const BuildOptions& options,
                  std::vector<std::string>* warnings = nullptr);

// Partition id of every RL vertex keyed by provisional index (sorted term
// order), the form accepted by BuildOptions::assignment.
std::vector<std::uint32_t> export_assignment(const Store& store);

struct ManifestFile {
  std::string path;
  std::uint64_t size = 0;
  std::uint32_t crc32 = 0;
};

struct StoreManifest {
  std::uint32_t format_version = kStoreFormatVersion;
  std::uint32_t dataset_crc32 = 0;
  std::uint64_t dataset_triples = 0;
  std::uint32_t n = 0;
  std::string partitioner;
  std::uint64_t seed = 0;
  std::vector<ManifestFile> files;
};

// Writes the store directory. Refuses a non-empty directory unless `force`.
void save_store(const Store& store, const std::filesystem::path& dir,
                bool force = false);

// Verifies version and checksums, then loads. Throws StoreCorruptError.
Store open_store(const std::filesystem::path& dir);

StoreManifest read_manifest(const std::filesystem::path& dir);

}  // namespace sgdq
