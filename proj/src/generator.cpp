#include "sgdq/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <unordered_set>

namespace sgdq {

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  if (name == "random") return GeneratorKind::Random;
  if (name == "powerlaw") return GeneratorKind::Powerlaw;
  if (name == "social") return GeneratorKind::Social;
  return std::nullopt;
}

namespace {

const std::string kEx = "http://example.org/";
const std::string kSioc = "http://rdfs.org/sioc/ns#";
const std::string kFoaf = "http://xmlns.com/foaf/0.1/";
const std::string kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";

// Entities and literal values are small integers until the final triples
// are materialised; `kind` selects the spelling.
struct Node {
  std::uint32_t kind;
  std::uint32_t index;
};

struct RawTriple {
  Node s;
  std::uint32_t p;
  Node o;
};

struct RawKey {
  std::uint64_t s, o;
  std::uint32_t p;
  bool operator==(const RawKey&) const = default;
};

struct RawKeyHash {
  std::size_t operator()(const RawKey& k) const noexcept {
    std::uint64_t h = k.s * 0x9E3779B97F4A7C15ull;
    h ^= k.o + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    h ^= k.p * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t pack(Node n) { return (std::uint64_t{n.kind} << 32) | n.index; }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(engine_() % n);
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Samples 0..n-1 with probability proportional to (k+1)^-s.
class Zipf {
 public:
  Zipf(std::uint32_t n, double s) : cdf_(n) {
    double sum = 0;
    for (std::uint32_t k = 0; k < n; ++k) {
      sum += std::pow(k + 1.0, -s);
      cdf_[k] = sum;
    }
    for (double& c : cdf_) c /= sum;
  }
  std::uint32_t operator()(Rng& rng) const {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), rng.unit());
    if (it == cdf_.end()) return static_cast<std::uint32_t>(cdf_.size() - 1);
    return static_cast<std::uint32_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

class Collector {
 public:
  explicit Collector(std::uint64_t target) : target_(target) {
    seen_.reserve(target);
    out_.reserve(target);
  }
  bool full() const { return out_.size() >= target_; }
  void add(RawTriple t) {
    if (full()) return;
    if (seen_.insert({pack(t.s), pack(t.o), t.p}).second) out_.push_back(t);
  }
  std::vector<RawTriple>& triples() { return out_; }

 private:
  std::uint64_t target_;
  std::unordered_set<RawKey, RawKeyHash> seen_;
  std::vector<RawTriple> out_;
};

// Picks one of `weights.size()` categories.
std::size_t pick(Rng& rng, std::initializer_list<double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  double x = rng.unit() * total;
  std::size_t i = 0;
  for (double w : weights) {
    if (x < w) return i;
    x -= w;
    ++i;
  }
  return weights.size() - 1;
}

struct Vocabulary {
  std::vector<std::string> predicates;
  // Spelling of a node: IRI prefix or literal pattern per kind.
  std::vector<std::function<Term(std::uint32_t)>> kinds;
};

std::vector<Triple> materialise(std::vector<RawTriple>& raw, const Vocabulary& v) {
  std::vector<Triple> out;
  out.reserve(raw.size());
  for (const RawTriple& t : raw) {
    out.push_back({v.kinds[t.s.kind](t.s.index), Term::iri(v.predicates[t.p]),
                   v.kinds[t.o.kind](t.o.index)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::function<Term(std::uint32_t)> iri_kind(std::string prefix) {
  return [prefix](std::uint32_t i) { return Term::iri(prefix + std::to_string(i)); };
}
std::function<Term(std::uint32_t)> plain_kind(std::string prefix) {
  return [prefix](std::uint32_t i) { return Term::plain_literal(prefix + std::to_string(i)); };
}
std::function<Term(std::uint32_t)> lang_kind(std::string prefix, std::string lang) {
  return [prefix, lang](std::uint32_t i) {
    return Term::literal("\"" + prefix + std::to_string(i) + "\"@" + lang);
  };
}
std::function<Term(std::uint32_t)> integer_kind() {
  return [](std::uint32_t i) {
    return Term::literal("\"" + std::to_string(i) + "\"^^<" + kXsdInteger + ">");
  };
}
std::function<Term(std::uint32_t)> fixed_kind(std::vector<std::string> iris) {
  return [iris](std::uint32_t i) { return Term::iri(iris.at(i)); };
}

// Upper bound on draws so that saturated small datasets still terminate.
std::uint64_t draw_budget(std::uint64_t n) { return 64 * n + 1024; }

std::vector<Triple> gen_random(std::uint64_t n, Rng& rng) {
  enum Kind : std::uint32_t { kNode, kClass, kLabel, kNum };
  Vocabulary voc;
  voc.predicates = {kEx + "r0", kEx + "r1", kEx + "r2", kEx + "r3",
                    rdf_type().lexical, kEx + "label", kEx + "num"};
  voc.kinds = {iri_kind(kEx + "node/n"),
               fixed_kind({kEx + "C0", kEx + "C1", kEx + "C2", kEx + "C3"}),
               plain_kind("l"), integer_kind()};
  const auto v = static_cast<std::uint32_t>(std::max<std::uint64_t>(8, n / 4));
  Collector c(n);
  for (std::uint64_t draws = 0; !c.full() && draws < draw_budget(n); ++draws) {
    Node s{kNode, rng.below(v)};
    switch (pick(rng, {0.7, 0.12, 0.12, 0.06})) {
      case 0: c.add({s, rng.below(4), {kNode, rng.below(v)}}); break;
      case 1: c.add({s, 4, {kClass, rng.below(4)}}); break;
      case 2: c.add({s, 5, {kLabel, rng.below(10)}}); break;
      default: c.add({s, 6, {kNum, rng.below(5)}}); break;
    }
  }
  return materialise(c.triples(), voc);
}

std::vector<Triple> gen_powerlaw(std::uint64_t n, Rng& rng) {
  enum Kind : std::uint32_t { kNode, kClass, kValue };
  Vocabulary voc;
  voc.predicates = {kEx + "link0", kEx + "link1", kEx + "link2", kEx + "link3",
                    rdf_type().lexical, kEx + "value"};
  voc.kinds = {iri_kind(kEx + "vertex/v"),
               fixed_kind({kEx + "K0", kEx + "K1", kEx + "K2", kEx + "K3", kEx + "K4"}),
               plain_kind("v")};
  const auto v = static_cast<std::uint32_t>(std::max<std::uint64_t>(8, n / 5));
  const std::uint32_t hubs = (v + 99) / 100;
  Zipf zipf(v, 1.1);
  Collector c(n);
  for (std::uint64_t draws = 0; !c.full() && draws < draw_budget(n); ++draws) {
    switch (pick(rng, {0.75, 0.15, 0.10})) {
      case 0: {
        // A fixed share of edges starts at a hub so the top 1% always
        // carries a heavy tail, the rest follow the Zipf law.
        std::uint32_t s = rng.unit() < 0.3 ? rng.below(hubs) : zipf(rng);
        std::uint32_t o = zipf(rng);
        if (s == o) o = rng.below(v);
        c.add({{kNode, s}, rng.below(4), {kNode, o}});
        break;
      }
      case 1: c.add({{kNode, rng.below(v)}, 4, {kClass, rng.below(5)}}); break;
      default: c.add({{kNode, zipf(rng)}, 5, {kValue, rng.below(20)}}); break;
    }
  }
  return materialise(c.triples(), voc);
}

std::vector<Triple> gen_social(std::uint64_t n, Rng& rng) {
  enum Kind : std::uint32_t { kUser, kPost, kReply, kClass, kText, kName };
  enum Pred : std::uint32_t { kType, kContent, kNamePred, kKnows, kCreator, kReplyOf, kLikes };
  Vocabulary voc;
  voc.predicates = {rdf_type().lexical,   kSioc + "content",  kFoaf + "name",
                    kFoaf + "knows",      kSioc + "has_creator", kSioc + "reply_of",
                    kEx + "likes"};
  voc.kinds = {iri_kind(kEx + "account/u"), iri_kind(kEx + "post/p"),
               iri_kind(kEx + "reply/r"),
               fixed_kind({kSioc + "UserAccount", kSioc + "Post", kSioc + "Reply"}),
               plain_kind("w"), lang_kind("Name ", "en")};
  const auto users = static_cast<std::uint32_t>(std::max<std::uint64_t>(4, n / 40));
  const auto posts = static_cast<std::uint32_t>(std::max<std::uint64_t>(4, n / 15));
  const auto replies = static_cast<std::uint32_t>(std::max<std::uint64_t>(4, n / 10));
  Zipf popular_user(users, 1.0);
  Zipf popular_post(posts, 1.0);
  Zipf words(200, 1.0);
  Collector c(n);
  for (std::uint64_t draws = 0; !c.full() && draws < draw_budget(n); ++draws) {
    switch (pick(rng, {0.15, 0.15, 0.03, 0.2, 0.2, 0.17, 0.1})) {
      case kType: {
        std::uint32_t k = rng.below(users + posts + replies);
        Node e = k < users           ? Node{kUser, k}
                 : k < users + posts ? Node{kPost, k - users}
                                     : Node{kReply, k - users - posts};
        c.add({e, kType, {kClass, e.kind}});
        break;
      }
      case kContent: {
        Node e = rng.unit() < 0.4 ? Node{kPost, rng.below(posts)} : Node{kReply, rng.below(replies)};
        c.add({e, kContent, {kText, words(rng)}});
        break;
      }
      case kNamePred:
        c.add({{kUser, rng.below(users)}, kNamePred, {kName, rng.below(users / 2 + 1)}});
        break;
      case kKnows: {
        std::uint32_t a = rng.below(users), b = popular_user(rng);
        if (a != b) c.add({{kUser, a}, kKnows, {kUser, b}});
        break;
      }
      case kCreator: {
        Node e = rng.unit() < 0.4 ? Node{kPost, rng.below(posts)} : Node{kReply, rng.below(replies)};
        c.add({e, kCreator, {kUser, popular_user(rng)}});
        break;
      }
      case kReplyOf: {
        std::uint32_t r = rng.below(replies);
        if (r > 0 && rng.unit() < 0.3) {
          c.add({{kReply, r}, kReplyOf, {kReply, rng.below(r)}});
        } else {
          c.add({{kReply, r}, kReplyOf, {kPost, popular_post(rng)}});
        }
        break;
      }
      default:
        c.add({{kUser, rng.below(users)}, kLikes, {kPost, popular_post(rng)}});
        break;
    }
  }
  return materialise(c.triples(), voc);
}

}  // namespace

std::vector<Triple> generate_dataset(GeneratorKind kind, std::uint64_t triples,
                                     std::uint64_t seed) {
  if (triples == 0) return {};
  Rng rng(seed);
  switch (kind) {
    case GeneratorKind::Random: return gen_random(triples, rng);
    case GeneratorKind::Powerlaw: return gen_powerlaw(triples, rng);
    case GeneratorKind::Social: return gen_social(triples, rng);
  }
  return {};
}

}  // namespace sgdq
