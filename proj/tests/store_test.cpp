#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixture.hpp"
#include "sgdq/engine.hpp"
#include "sgdq/generator.hpp"
#include "sgdq/store.hpp"

using namespace sgdq;
using namespace sgdq::testing;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("sgdq_store_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
             "_" + std::to_string(++counter));
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void flip_byte(const fs::path& file, std::size_t offset) {
  std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(static_cast<std::streamoff>(offset));
  char c;
  f.get(c);
  f.seekp(static_cast<std::streamoff>(offset));
  f.put(static_cast<char>(c ^ 0x20));
}

void expect_same(const Store& a, const Store& b) {
  EXPECT_EQ(a.dict_r.terms(), b.dict_r.terms());
  EXPECT_EQ(a.dict_r.partition_ranges(), b.dict_r.partition_ranges());
  EXPECT_EQ(a.dict_r.rl_vertex_count(), b.dict_r.rl_vertex_count());
  EXPECT_EQ(a.dict_a.terms(), b.dict_a.terms());
  ASSERT_EQ(a.predicates.size(), b.predicates.size());
  for (PredicateId p = 0; p < a.predicates.size(); ++p) {
    EXPECT_EQ(a.predicates.term(p), b.predicates.term(p));
    EXPECT_EQ(a.predicates.predicate_class(p), b.predicates.predicate_class(p));
  }
  EXPECT_EQ(a.predicate_frequency, b.predicate_frequency);
  ASSERT_EQ(a.partitions.size(), b.partitions.size());
  for (std::size_t i = 0; i < a.partitions.size(); ++i) {
    EXPECT_EQ(a.partitions[i].original_range(), b.partitions[i].original_range());
    EXPECT_EQ(a.partitions[i].p_vector(), b.partitions[i].p_vector());
    for (Ordering o : kAllOrderings) {
      EXPECT_EQ(a.partitions[i].indexes().index(o), b.partitions[i].indexes().index(o));
    }
    EXPECT_EQ(a.summary.adjacency(i), b.summary.adjacency(i));
    EXPECT_EQ(a.summary.labels(i), b.summary.labels(i));
  }
  EXPECT_EQ(a.a_indexes.pso_entries().size(), b.a_indexes.pso_entries().size());
  for (std::size_t i = 0; i < a.a_indexes.pso_entries().size(); ++i) {
    EXPECT_EQ(a.a_indexes.pso_entries()[i].objects, b.a_indexes.pso_entries()[i].objects);
  }
  EXPECT_EQ(a.a_indexes.comp_entries(), b.a_indexes.comp_entries());
  EXPECT_EQ(a.report.cut_edges, b.report.cut_edges);
  EXPECT_EQ(a.report.alpha, b.report.alpha);
  EXPECT_EQ(a.report.partition_triples, b.report.partition_triples);
  EXPECT_EQ(a.dataset().triples, b.dataset().triples);
}

}  // namespace

TEST(Store, RoundTripFixture) {
  TempDir dir;
  Store built = fixture_store();
  save_store(built, dir.path());
  Store opened = open_store(dir.path());
  expect_same(built, opened);
  QueryResult r = execute(opened, reply_chain_query());
  EXPECT_EQ(r.rows.size(), 2u);
  StoreManifest m = read_manifest(dir.path());
  EXPECT_EQ(m.n, 2u);
  EXPECT_EQ(m.dataset_triples, 24u);
  EXPECT_EQ(m.format_version, kStoreFormatVersion);
}

TEST(Store, RoundTripGenerated) {
  TempDir dir;
  BuildOptions options;
  options.partitions = 5;
  options.partitioner.seed = 3;
  Store built = build_store(generate_dataset(GeneratorKind::Social, 5000, 2), options);
  save_store(built, dir.path());
  Store opened = open_store(dir.path());
  expect_same(built, opened);
  EXPECT_EQ(opened.partitioner_id, built.partitioner_id);
  EXPECT_EQ(opened.seed, 3u);
}

TEST(Store, ByteDeterministic) {
  TempDir a, b;
  fs::create_directories(b.path());
  auto triples = generate_dataset(GeneratorKind::Powerlaw, 3000, 9);
  BuildOptions options;
  options.partitions = 3;
  save_store(build_store(triples, options), a.path());
  save_store(build_store(triples, options), b.path() / "x");
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), a.path());
    EXPECT_EQ(read_file(entry.path().string()), read_file((b.path() / "x" / rel).string()))
        << rel;
  }
}

TEST(Store, CorruptionDetected) {
  TempDir dir;
  save_store(fixture_store(), dir.path());
  for (const ManifestFile& f : read_manifest(dir.path()).files) {
    TempDir copy;
    fs::copy(dir.path(), copy.path(), fs::copy_options::recursive);
    flip_byte(copy.path() / f.path, f.size / 2);
    EXPECT_THROW(open_store(copy.path()), StoreCorruptError) << f.path;
  }
  {
    TempDir copy;
    fs::copy(dir.path(), copy.path(), fs::copy_options::recursive);
    fs::remove(copy.path() / "part-001" / "ops.idx");
    EXPECT_THROW(open_store(copy.path()), StoreCorruptError);
  }
  {
    TempDir copy;
    fs::copy(dir.path(), copy.path(), fs::copy_options::recursive);
    std::string manifest = read_file((copy.path() / "manifest.json").string());
    auto pos = manifest.find("\"format_version\": 1");
    ASSERT_NE(pos, std::string::npos);
    manifest.replace(pos, 19, "\"format_version\": 9");
    std::ofstream(copy.path() / "manifest.json", std::ios::trunc) << manifest;
    EXPECT_THROW(open_store(copy.path()), StoreCorruptError);
  }
  {
    TempDir copy;
    fs::create_directories(copy.path());
    EXPECT_THROW(open_store(copy.path()), StoreCorruptError);
    std::ofstream(copy.path() / "manifest.json") << "{not json";
    EXPECT_THROW(open_store(copy.path()), StoreCorruptError);
  }
}

TEST(Store, RefusesNonEmptyDirectory) {
  TempDir dir;
  fs::create_directories(dir.path());
  std::ofstream(dir.path() / "keep.txt") << "x";
  Store s = fixture_store();
  EXPECT_THROW(save_store(s, dir.path()), BuildError);
  EXPECT_TRUE(fs::exists(dir.path() / "keep.txt"));
  save_store(s, dir.path(), true);
  EXPECT_FALSE(fs::exists(dir.path() / "keep.txt"));
  EXPECT_NO_THROW(open_store(dir.path()));
  // An empty existing directory is fine.
  TempDir empty;
  fs::create_directories(empty.path());
  EXPECT_NO_THROW(save_store(s, empty.path()));
}

TEST(Store, ExportAssignmentReproducesBuild) {
  BuildOptions options;
  options.partitions = 4;
  auto triples = generate_dataset(GeneratorKind::Random, 2000, 4);
  Store a = build_store(triples, options);
  auto exported = export_assignment(a);
  BuildOptions imported;
  imported.partitions = 4;
  imported.assignment.emplace(exported.begin(), exported.end());
  Store b = build_store(triples, imported);
  EXPECT_EQ(a.dict_r.terms(), b.dict_r.terms());
  EXPECT_EQ(a.report.cut_edges, b.report.cut_edges);
  EXPECT_EQ(b.partitioner_id, "import");

  Store fixture = fixture_store();
  auto fa = export_assignment(fixture);
  auto expected = fixture_assignment();
  ASSERT_EQ(fa.size(), expected.size());
  for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_EQ(fa[i], *expected[i]);
}

TEST(Store, ForcedAttributePredicates) {
  BuildOptions options;
  options.partitions = 1;
  options.attribute_predicates.insert(foaf("knows"));
  Store s = build_store(fixture_triples(), options);
  EXPECT_EQ(s.predicates.predicate_class(*s.predicates.find(foaf("knows"))),
            PredicateClass::Attribute);
  EXPECT_EQ(s.report.a_triples, 16u);
}
