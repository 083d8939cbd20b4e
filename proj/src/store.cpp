#include "sgdq/store.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sgdq/error.hpp"
#include "sgdq/ntriples.hpp"

namespace sgdq {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Store::Lazy {
  std::mutex mutex;
  std::optional<Dataset> data;
  std::function<Dataset()> loader;
};

const Dataset& Store::dataset() const {
  if (!lazy_) throw Error("store has no dataset");
  std::lock_guard<std::mutex> lock(lazy_->mutex);
  if (!lazy_->data) {
    if (!lazy_->loader) throw Error("store has no dataset");
    lazy_->data = lazy_->loader();
  }
  return *lazy_->data;
}

void Store::set_dataset(Dataset dataset) {
  lazy_ = std::make_shared<Lazy>();
  lazy_->data = std::move(dataset);
}

void Store::set_dataset_loader(std::function<Dataset()> loader) {
  lazy_ = std::make_shared<Lazy>();
  lazy_->loader = std::move(loader);
}

Store build_store(std::span<const Triple> triples, const BuildOptions& options,
                  std::vector<std::string>* warnings) {
  Dataset dataset = load_dataset(triples, options.attribute_predicates);
  Store store;
  store.predicates = PredicateDictionary(dataset.classes);
  RlGraph graph = build_rl_graph(dataset, store.predicates);

  std::uint32_t n = options.partitions
                        ? *options.partitions
                        : auto_partition_count(dataset.r_triples.size(),
                                               graph.vertex_count());
  std::vector<OriginalPartition> originals;
  if (options.assignment) {
    originals = import_partition(*options.assignment, n, graph, warnings);
    store.partitioner_id = "import";
  } else {
    PartitionOptions popts = options.partitioner;
    popts.n = n;
    originals = partition_rl_graph(graph, popts);
    store.partitioner_id = "multilevel-hem";
  }
  store.seed = options.partitioner.seed;

  VertexNumbering numbering =
      assign_vertex_ids(graph, originals, a_only_subjects(dataset));
  RlGraph rgraph = graph.renumbered(numbering.new_index);
  std::vector<OriginalPartition> roriginals =
      renumber_partitions(originals, numbering.new_index);
  store.dict_r = std::move(numbering.dictionary);

  std::vector<ExpandedPartition> expanded;
  for (std::size_t i = 0; i < roriginals.size(); ++i) {
    expanded.push_back(expand_1uhc(roriginals[i], rgraph,
                                   store.dict_r.partition_ranges()[i],
                                   store.dict_r.size()));
  }
  store.report = compute_report(dataset, rgraph, roriginals, expanded);
  store.dict_a = DictionaryA::from_a_triples(dataset.a_triples);
  store.a_indexes =
      build_a_indexes(dataset, store.dict_r, store.dict_a, store.predicates);
  const auto pcount = static_cast<std::uint32_t>(store.predicates.size());
  for (const ExpandedPartition& e : expanded) {
    store.partitions.push_back(build_partition_store(e, rgraph, pcount));
  }
  store.summary =
      build_summary_graph(rgraph, assignment_of(rgraph, roriginals), expanded);
  store.predicate_frequency.assign(pcount, 0);
  for (const Triple& t : dataset.triples) {
    ++store.predicate_frequency[*store.predicates.find(t.p)];
  }
  store.set_dataset(std::move(dataset));
  return store;
}

std::vector<std::uint32_t> export_assignment(const Store& store) {
  const std::uint32_t rl = store.dict_r.rl_vertex_count();
  std::vector<VertexId> ids(rl);
  std::iota(ids.begin(), ids.end(), 1);
  std::sort(ids.begin(), ids.end(), [&](VertexId a, VertexId b) {
    return store.dict_r.term(a) < store.dict_r.term(b);
  });
  const auto& ranges = store.dict_r.partition_ranges();
  std::vector<std::uint32_t> out;
  out.reserve(rl);
  for (VertexId id : ids) {
    for (std::uint32_t p = 0; p < ranges.size(); ++p) {
      if (ranges[p].contains(id)) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'S', 'G', 'D', 'Q', 'I', 'D', 'X', '\0'};
enum IndexKind : std::uint32_t { kPos = 1, kComp = 2, kPso = 3, kPermutation = 16 };

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void key(std::initializer_list<std::uint32_t> parts) {
    u32(static_cast<std::uint32_t>(parts.size() * 4));
    for (std::uint32_t p : parts) {
      for (int i = 3; i >= 0; --i) u8(static_cast<std::uint8_t>(p >> (8 * i)));
    }
  }
  void bits(const BitVector& v) {
    u64(v.size());
    u8(v.first_bit() ? 1 : 0);
    u32(static_cast<std::uint32_t>(v.runs().size()));
    for (std::uint32_t r : v.runs()) u32(r);
  }
  void header(std::uint32_t kind, std::uint64_t vertices, std::uint64_t attributes,
              std::uint64_t records) {
    buf_.append(kMagic, sizeof kMagic);
    u32(kStoreFormatVersion);
    u32(kind);
    u64(vertices);
    u64(attributes);
    u64(records);
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string name) : buf_(std::move(data)), name_(std::move(name)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw StoreCorruptError(name_ + ": " + msg);
  }
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) fail("truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{u8()} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{u8()} << (8 * i);
    return v;
  }
  std::vector<std::uint32_t> key(std::size_t parts) {
    std::uint32_t len = u32();
    if (len != parts * 4) fail("unexpected key length");
    std::vector<std::uint32_t> out(parts, 0);
    for (auto& p : out) {
      for (int i = 0; i < 4; ++i) p = (p << 8) | u8();
    }
    return out;
  }
  BitVector bits(std::uint64_t expected_length) {
    std::uint64_t len = u64();
    if (len != expected_length) fail("bit vector length mismatch");
    bool first = u8() != 0;
    std::uint32_t count = u32();
    need(std::size_t{count} * 4);
    std::vector<std::uint32_t> runs(count);
    for (auto& r : runs) r = u32();
    try {
      return BitVector::from_runs(static_cast<std::uint32_t>(len), first, std::move(runs));
    } catch (const std::exception&) {
      fail("invalid run list");
    }
  }
  struct Header {
    std::uint32_t kind;
    std::uint64_t vertices, attributes, records;
  };
  Header header(std::uint32_t expected_kind) {
    need(sizeof kMagic);
    if (std::memcmp(buf_.data(), kMagic, sizeof kMagic) != 0) fail("bad magic");
    pos_ = sizeof kMagic;
    if (u32() != kStoreFormatVersion) fail("unsupported version");
    Header h{u32(), 0, 0, 0};
    if (h.kind != expected_kind) fail("unexpected index kind");
    h.vertices = u64();
    h.attributes = u64();
    h.records = u64();
    return h;
  }
  void finish() const {
    if (pos_ != buf_.size()) fail("trailing bytes");
  }

 private:
  std::string buf_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreCorruptError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint32_t crc_of(const std::string& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < data.size()) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

class DirWriter {
 public:
  explicit DirWriter(fs::path root) : root_(std::move(root)) {}

  void put(const std::string& rel, const std::string& data) {
    fs::path path = root_ / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("cannot write " + path.string());
    files_.push_back({rel, data.size(), crc_of(data)});
  }
  std::vector<ManifestFile>& files() { return files_; }

 private:
  fs::path root_;
  std::vector<ManifestFile> files_;
};

std::string part_dir(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part-%03zu", i);
  return buf;
}

json bits_json(const BitVector& v) {
  return json{{"length", v.size()}, {"first_bit", v.first_bit()}, {"runs", v.runs()}};
}

BitVector bits_from_json(const json& j) {
  return BitVector::from_runs(j.at("length").get<std::uint32_t>(),
                              j.at("first_bit").get<bool>(),
                              j.at("runs").get<std::vector<std::uint32_t>>());
}

std::string text_lines(const std::vector<Term>& terms) {
  std::string out;
  for (const Term& t : terms) {
    out += t.to_ntriples();
    out += '\n';
  }
  return out;
}

std::vector<Term> parse_term_lines(const std::string& text, const std::string& name,
                                   std::size_t skip_lines = 0) {
  std::vector<Term> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (n++ < skip_lines) continue;
    try {
      out.push_back(parse_ntriples_term(line));
    } catch (const Error& e) {
      throw StoreCorruptError(name + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

void save_store(const Store& store, const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw BuildError(dir.string() + " is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) {
        throw BuildError("output directory " + dir.string() +
                         " is not empty (use --force to overwrite)");
      }
      fs::remove_all(dir);
    }
  }
  fs::create_directories(dir);
  DirWriter w(dir);

  const Dataset& dataset = store.dataset();
  std::ostringstream nt;
  write_ntriples(nt, dataset.triples);
  std::string triples_text = nt.str();
  w.put("triples.nt", triples_text);

  std::string preds;
  for (PredicateId p = 0; p < store.predicates.size(); ++p) {
    preds += store.predicates.predicate_class(p) == PredicateClass::Attribute ? "A " : "R ";
    preds += std::to_string(store.predicate_frequency.at(p)) + ' ';
    preds += store.predicates.term(p).to_ntriples();
    preds += '\n';
  }
  w.put("predicates.txt", preds);

  std::ostringstream dr;
  dr << "vertices " << store.dict_r.size() << " rl " << store.dict_r.rl_vertex_count()
     << " partitions " << store.dict_r.partition_ranges().size() << '\n';
  for (const VertexRange& r : store.dict_r.partition_ranges()) {
    dr << "range " << r.first << ' ' << r.last << '\n';
  }
  dr << text_lines(store.dict_r.terms());
  w.put("dict_r.txt", dr.str());
  w.put("dict_a.txt", text_lines(store.dict_a.terms()));

  const AttributeIndexes& idx = store.a_indexes;
  {
    std::size_t records = 0;
    for (const auto& g : idx.pos_groups()) records += g.size();
    Writer out;
    out.header(kPos, idx.vertex_count(), idx.attribute_count(), records);
    for (PredicateId p = 0; p < idx.pos_groups().size(); ++p) {
      for (const PosEntry& e : idx.pos_groups()[p]) {
        out.key({p, e.object});
        out.bits(e.subjects);
      }
    }
    w.put("abidx_pos.bin", out.data());
  }
  {
    std::size_t records = 0;
    for (const auto& c : idx.comp_entries()) records += c.has_value();
    Writer out;
    out.header(kComp, idx.vertex_count(), idx.attribute_count(), records);
    for (PredicateId p = 0; p < idx.comp_entries().size(); ++p) {
      if (!idx.comp_entries()[p]) continue;
      out.key({p});
      out.bits(*idx.comp_entries()[p]);
    }
    w.put("abidx_comp.bin", out.data());
  }
  {
    Writer out;
    out.header(kPso, idx.vertex_count(), idx.attribute_count(), idx.pso_entries().size());
    for (const PsoEntry& e : idx.pso_entries()) {
      out.key({e.predicate, e.subject});
      out.bits(e.objects);
    }
    w.put("abidx_pso.bin", out.data());
  }

  for (std::size_t i = 0; i < store.partitions.size(); ++i) {
    const PartitionStore& part = store.partitions[i];
    const std::string dirname = part_dir(i);
    for (Ordering o : kAllOrderings) {
      Writer out;
      const auto& index = part.indexes().index(o);
      out.header(kPermutation + static_cast<std::uint32_t>(o), store.dict_r.size(), 0,
                 index.size());
      for (const Key3& k : index) {
        out.u32(k.a);
        out.u32(k.b);
        out.u32(k.c);
      }
      w.put(dirname + "/" + ordering_name(o) + ".idx", out.data());
    }
    json meta{{"id", part.id()},
              {"original_range", {part.original_range().first, part.original_range().last}},
              {"p_vector", bits_json(part.p_vector())},
              {"predicate_frequency", part.frequencies()}};
    w.put(dirname + "/meta.json", meta.dump(1) + "\n");
  }

  std::ostringstream sg;
  write_summary_graph(sg, store.summary, store.predicates);
  w.put("summary.txt", sg.str());

  std::ostringstream report;
  write_report_table(report, store.report);
  report << '\n';
  write_report_kv(report, store.report);
  w.put("report.txt", report.str());

  json files = json::array();
  for (const ManifestFile& f : w.files()) {
    files.push_back({{"path", f.path}, {"size", f.size}, {"crc32", f.crc32}});
  }
  json manifest{{"format_version", kStoreFormatVersion},
                {"dataset_crc32", crc_of(triples_text)},
                {"dataset_triples", dataset.triples.size()},
                {"n", store.partitions.size()},
                {"partitioner", store.partitioner_id},
                {"seed", store.seed},
                {"files", files}};
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest.dump(1) << '\n';
  if (!out) throw Error("cannot write manifest");
}

StoreManifest read_manifest(const fs::path& dir) {
  fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) throw StoreCorruptError("missing manifest.json in " + dir.string());
  StoreManifest m;
  try {
    json j = json::parse(read_file(path));
    m.format_version = j.at("format_version").get<std::uint32_t>();
    m.dataset_crc32 = j.at("dataset_crc32").get<std::uint32_t>();
    m.dataset_triples = j.at("dataset_triples").get<std::uint64_t>();
    m.n = j.at("n").get<std::uint32_t>();
    m.partitioner = j.at("partitioner").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const json& f : j.at("files")) {
      m.files.push_back({f.at("path").get<std::string>(), f.at("size").get<std::uint64_t>(),
                         f.at("crc32").get<std::uint32_t>()});
    }
  } catch (const json::exception& e) {
    throw StoreCorruptError(std::string("manifest.json: ") + e.what());
  }
  return m;
}

Store open_store(const fs::path& dir) {
  StoreManifest m = read_manifest(dir);
  if (m.format_version != kStoreFormatVersion) {
    throw StoreCorruptError("unsupported store format version " +
                            std::to_string(m.format_version));
  }
  std::map<std::string, std::string> contents;
  for (const ManifestFile& f : m.files) {
    if (f.path.find("..") != std::string::npos) {
      throw StoreCorruptError("manifest: invalid path " + f.path);
    }
    fs::path path = dir / f.path;
    if (!fs::exists(path)) throw StoreCorruptError("missing file " + f.path);
    std::string data = read_file(path);
    if (data.size() != f.size || crc_of(data) != f.crc32) {
      throw StoreCorruptError("checksum mismatch for " + f.path);
    }
    if (f.path != "triples.nt") contents[f.path] = std::move(data);
  }
  auto file = [&](const std::string& name) -> const std::string& {
    auto it = contents.find(name);
    if (it == contents.end()) throw StoreCorruptError("manifest lacks " + name);
    return it->second;
  };

  Store store;
  store.partitioner_id = m.partitioner;
  store.seed = m.seed;
  PredicateClasses classes;
  std::vector<std::uint64_t> frequency;
  {
    std::istringstream in(file("predicates.txt"));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string cls, rest;
      std::uint64_t count = 0;
      if (!(fields >> cls >> count) || (cls != "A" && cls != "R")) {
        throw StoreCorruptError("predicates.txt: malformed line");
      }
      std::getline(fields >> std::ws, rest);
      Term t;
      try {
        t = parse_ntriples_term(rest);
      } catch (const Error& e) {
        throw StoreCorruptError(std::string("predicates.txt: ") + e.what());
      }
      classes[t] = cls == "A" ? PredicateClass::Attribute : PredicateClass::Relation;
      frequency.push_back(count);
    }
  }
  store.predicates = PredicateDictionary(classes);
  if (classes.size() != frequency.size()) throw StoreCorruptError("predicates.txt: duplicates");
  store.predicate_frequency = std::move(frequency);
  {
    const std::string& text = file("dict_r.txt");
    std::istringstream in(text);
    std::string w1, w2, w3;
    std::uint32_t total = 0, rl = 0, n = 0;
    if (!(in >> w1 >> total >> w2 >> rl >> w3 >> n) || w1 != "vertices" || w2 != "rl" ||
        w3 != "partitions") {
      throw StoreCorruptError("dict_r.txt: bad header");
    }
    std::vector<VertexRange> ranges(n);
    for (auto& r : ranges) {
      std::string word;
      if (!(in >> word >> r.first >> r.last) || word != "range") {
        throw StoreCorruptError("dict_r.txt: bad range");
      }
    }
    std::vector<Term> terms = parse_term_lines(text, "dict_r.txt", 1 + n);
    if (terms.size() != total || rl > total) throw StoreCorruptError("dict_r.txt: size mismatch");
    try {
      store.dict_r = DictionaryR(std::move(terms), std::move(ranges), rl);
      store.dict_a = DictionaryA(parse_term_lines(file("dict_a.txt"), "dict_a.txt"));
    } catch (const BuildError& e) {
      throw StoreCorruptError(e.what());
    }
  }
  const std::uint32_t nv = store.dict_r.size();
  const std::uint32_t na = store.dict_a.size();
  const std::size_t np = store.predicates.size();
  {
    Reader pos(file("abidx_pos.bin"), "abidx_pos.bin");
    auto h = pos.header(kPos);
    if (h.vertices != nv || h.attributes != na) pos.fail("dimension mismatch");
    std::vector<std::vector<PosEntry>> groups(np);
    for (std::uint64_t i = 0; i < h.records; ++i) {
      auto k = pos.key(2);
      if (k[0] >= np) pos.fail("predicate out of range");
      groups[k[0]].push_back({k[1], pos.bits(nv)});
    }
    pos.finish();
    Reader comp(file("abidx_comp.bin"), "abidx_comp.bin");
    h = comp.header(kComp);
    std::vector<std::optional<BitVector>> comps(np);
    for (std::uint64_t i = 0; i < h.records; ++i) {
      auto k = comp.key(1);
      if (k[0] >= np) comp.fail("predicate out of range");
      comps[k[0]] = comp.bits(nv);
    }
    comp.finish();
    Reader pso(file("abidx_pso.bin"), "abidx_pso.bin");
    h = pso.header(kPso);
    std::vector<PsoEntry> entries;
    entries.reserve(h.records);
    for (std::uint64_t i = 0; i < h.records; ++i) {
      auto k = pso.key(2);
      entries.push_back({k[0], k[1], pso.bits(na)});
    }
    pso.finish();
    store.a_indexes = AttributeIndexes(nv, na, std::move(groups), std::move(comps),
                                       std::move(entries));
  }
  for (std::uint32_t i = 0; i < m.n; ++i) {
    const std::string dirname = part_dir(i);
    std::array<std::vector<Key3>, 6> arrays;
    for (Ordering o : kAllOrderings) {
      const std::string name = dirname + "/" + ordering_name(o) + ".idx";
      Reader r(file(name), name);
      auto h = r.header(kPermutation + static_cast<std::uint32_t>(o));
      auto& arr = arrays[static_cast<int>(o)];
      r.need(h.records * 12);
      arr.resize(h.records);
      for (Key3& k : arr) {
        k.a = r.u32();
        k.b = r.u32();
        k.c = r.u32();
      }
      r.finish();
    }
    try {
      json meta = json::parse(file(dirname + "/meta.json"));
      VertexRange range{meta.at("original_range")[0].get<VertexId>(),
                        meta.at("original_range")[1].get<VertexId>()};
      BitVector pv = bits_from_json(meta.at("p_vector"));
      if (pv.size() != nv) throw StoreCorruptError(dirname + ": p_vector length");
      store.partitions.emplace_back(meta.at("id").get<std::uint32_t>(), range, std::move(pv),
                                    PermutationIndexSet::from_arrays(std::move(arrays)),
                                    static_cast<std::uint32_t>(np));
    } catch (const json::exception& e) {
      throw StoreCorruptError(dirname + "/meta.json: " + e.what());
    } catch (const std::invalid_argument& e) {
      throw StoreCorruptError(dirname + "/meta.json: " + e.what());
    }
  }
  {
    std::istringstream in(file("summary.txt"));
    store.summary = read_summary_graph(in, store.predicates);
    if (store.summary.vertex_count() != m.n) throw StoreCorruptError("summary.txt: size mismatch");
  }
  {
    std::istringstream in(file("report.txt"));
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
      auto eq = line.find('=');
      if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    try {
      store.report.n = static_cast<std::uint32_t>(std::stoul(kv.at("partitions")));
      store.report.cut_edges = std::stoull(kv.at("cut_edges"));
      store.report.alpha = std::stod(kv.at("alpha"));
      store.report.dataset_triples = std::stoull(kv.at("dataset_triples"));
      store.report.a_triples = std::stoull(kv.at("a_triples"));
      store.report.r_triples = std::stoull(kv.at("r_triples"));
      store.report.partition_triples = std::stoull(kv.at("partition_triples"));
    } catch (const std::exception&) {
      throw StoreCorruptError("report.txt: malformed");
    }
  }
  const fs::path triples_path = dir / "triples.nt";
  const std::uint32_t expected_crc = m.dataset_crc32;
  store.set_dataset_loader([triples_path, classes, expected_crc]() {
    std::string text = read_file(triples_path);
    if (crc_of(text) != expected_crc) throw StoreCorruptError("triples.nt changed on disk");
    std::istringstream in(text);
    return split_dataset(parse_ntriples(in), classes);
  });
  return store;
}

}  // namespace sgdq
