#include <gtest/gtest.h>

#include <random>

#include "fixture.hpp"
#include "sgdq/attribute_index.hpp"
#include "sgdq/generator.hpp"

using namespace sgdq;
using namespace sgdq::testing;

namespace {

BitVector candidates(const Store& s, std::vector<APattern> patterns) {
  APatternGroup g{"?x", std::move(patterns)};
  return candidate_rl_vertex(g, s.a_indexes, s.predicates, s.dict_a);
}

}  // namespace

TEST(AttributeIndex, FixtureBitmaps) {
  Store s = fixture_store();
  PredicateId type = *s.predicates.find(rdf_type());
  PredicateId content = *s.predicates.find(sioc("content"));
  AttributeId reply = *s.dict_a.find(sioc("Reply"));
  ASSERT_NE(s.a_indexes.pos(type, reply), nullptr);
  EXPECT_EQ(s.a_indexes.pos(type, reply)->to_string(), "000110011");
  ASSERT_NE(s.a_indexes.comp(content), nullptr);
  EXPECT_EQ(s.a_indexes.comp(content)->to_string(), "001110111");

  BitVector both = candidates(s, {{rdf_type(), sioc("Reply")}, {sioc("content"), std::nullopt}});
  EXPECT_EQ(both.to_string(), "000110011");
  EXPECT_EQ(candidates(s, {{rdf_type(), sioc("UserAccount")}}).to_string(), "110001000");
  EXPECT_EQ(candidates(s, {{rdf_type(), sioc("Post")}, {sioc("content"), std::nullopt}})
                .to_string(),
            "001000100");
}

TEST(AttributeIndex, UnknownGivesZeros) {
  Store s = fixture_store();
  EXPECT_TRUE(candidates(s, {{ex("nope"), std::nullopt}}).none());
  EXPECT_TRUE(candidates(s, {{rdf_type(), ex("Nothing")}}).none());
  EXPECT_TRUE(candidates(s, {{sioc("content"), Term::plain_literal("absent")}}).none());
  EXPECT_EQ(candidates(s, {{ex("nope"), std::nullopt}}).size(), 9u);
  // A relation predicate has no attribute entries either.
  EXPECT_TRUE(candidates(s, {{foaf("knows"), std::nullopt}}).none());
}

TEST(AttributeIndex, RetrieveAttribute) {
  Store s = fixture_store();
  PredicateId type = *s.predicates.find(rdf_type());
  VertexId r3 = *s.dict_r.find(ex("reply/r3"));
  EXPECT_EQ(retrieve_attribute(r3, type, s.a_indexes, s.dict_a),
            std::vector<Term>{sioc("Reply")});
  VertexId u1 = *s.dict_r.find(ex("account/u1"));
  PredicateId content = *s.predicates.find(sioc("content"));
  EXPECT_TRUE(retrieve_attribute(u1, content, s.a_indexes, s.dict_a).empty());
}

TEST(AttributeIndex, LookupsCountComparisons) {
  Store s = fixture_store();
  LookupCounter counter;
  APatternGroup g{"?x", {{rdf_type(), sioc("Reply")}}};
  candidate_rl_vertex(g, s.a_indexes, s.predicates, s.dict_a, &counter);
  EXPECT_GT(counter.comparisons, 0u);
}

TEST(AttributeIndex, RandomGroupsAgainstScan) {
  auto triples = generate_dataset(GeneratorKind::Social, 4000, 5);
  BuildOptions options;
  options.partitions = 3;
  Store s = build_store(triples, options);
  const auto& a = s.dataset().a_triples;
  ASSERT_FALSE(a.empty());
  std::mt19937_64 rng(9);
  for (int round = 0; round < 200; ++round) {
    std::vector<APattern> patterns;
    int k = 1 + rng() % 3;
    for (int i = 0; i < k; ++i) {
      const Triple& t = a[rng() % a.size()];
      patterns.push_back({t.p, rng() % 2 ? std::optional<Term>(t.o) : std::nullopt});
    }
    BitVector got = candidates(s, patterns);
    std::vector<std::uint32_t> expected;
    for (VertexId v = 1; v <= s.dict_r.size(); ++v) {
      const Term& subject = s.dict_r.term(v);
      bool ok = true;
      for (const APattern& p : patterns) {
        auto lo = std::lower_bound(a.begin(), a.end(), Triple{subject, p.predicate, Term{}});
        bool found = false;
        for (auto it = lo; it != a.end() && it->s == subject && it->p == p.predicate; ++it) {
          if (!p.object || *p.object == it->o) found = true;
        }
        ok = ok && found;
      }
      if (ok) expected.push_back(v - 1);
    }
    ASSERT_EQ(got.ones(), expected) << "round " << round;
  }
  // Every vertex's attribute values come back in AttributeID order.
  for (VertexId v = 1; v <= s.dict_r.size(); v += 7) {
    for (PredicateId p = 0; p < s.predicates.size(); ++p) {
      if (s.predicates.predicate_class(p) != PredicateClass::Attribute) continue;
      std::vector<Term> expected;
      for (const Triple& t : a) {
        if (t.s == s.dict_r.term(v) && t.p == s.predicates.term(p)) expected.push_back(t.o);
      }
      std::sort(expected.begin(), expected.end(), LexicalOrder{});
      EXPECT_EQ(retrieve_attribute(v, p, s.a_indexes, s.dict_a), expected);
    }
  }
}
