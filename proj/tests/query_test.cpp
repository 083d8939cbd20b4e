#include <gtest/gtest.h>

#include "fixture.hpp"
#include "sgdq/query.hpp"
#include "sgdq/query_graph.hpp"

using namespace sgdq;
using namespace sgdq::testing;

namespace {

const char* kS7 =
    "PREFIX foaf: <http://xmlns.com/foaf/0.1/>\n"
    "SELECT ?u1 ?u2 ?p WHERE{?u2 foaf:knows ?u1.\n"
    " ?u3 foaf:knows ?u2.\n"
    " ?u3 foaf:knows ?u1. }";

}  // namespace

TEST(Query, S7) {
  Query q = parse_query(kS7);
  ASSERT_EQ(q.patterns.size(), 3u);
  EXPECT_EQ(q.variables(), (std::vector<std::string>{"u2", "u1", "u3"}));
  EXPECT_EQ(q.projection(), (std::vector<std::string>{"u1", "u2", "p"}));
  EXPECT_EQ(q.patterns[0].p, foaf("knows"));
  EXPECT_EQ(variable_name(q.patterns[2].s), "u3");
}

TEST(Query, Minimal) {
  Query q = parse_query("SELECT ?x WHERE { ?x <p> <o> . }");
  ASSERT_EQ(q.patterns.size(), 1u);
  EXPECT_EQ(q.patterns[0].p, Term::iri("p"));
  EXPECT_EQ(std::get<Term>(q.patterns[0].o), Term::iri("o"));
  EXPECT_FALSE(q.select_all);
}

TEST(Query, ReplyChain) {
  Query q = reply_chain_query();
  EXPECT_EQ(q.patterns.size(), 12u);
  EXPECT_EQ(q.projection(), (std::vector<std::string>{"u1", "u2", "p", "r", "s"}));
  EXPECT_EQ(q.patterns[0].p, rdf_type());
}

TEST(Query, Abbreviations) {
  Query q = parse_query(
      "PREFIX ex: <http://example.org/>\n"
      "SELECT DISTINCT * { ?x a ex:T ; ex:knows ?y , ?z . ?y ex:age 42 ; ex:h 1.5 . "
      "?z ex:name \"Bo\"@en . ?z ex:nick \"b\"^^ex:str . ?z ex:k _:b1 }");
  ASSERT_EQ(q.patterns.size(), 8u);
  EXPECT_TRUE(q.select_all);
  EXPECT_EQ(q.patterns[0].p, rdf_type());
  EXPECT_EQ(variable_name(q.patterns[1].s), "x");
  EXPECT_EQ(variable_name(q.patterns[2].o), "z");
  EXPECT_EQ(std::get<Term>(q.patterns[3].o),
            Term::literal("\"42\"^^<http://www.w3.org/2001/XMLSchema#integer>"));
  EXPECT_EQ(std::get<Term>(q.patterns[4].o),
            Term::literal("\"1.5\"^^<http://www.w3.org/2001/XMLSchema#decimal>"));
  EXPECT_EQ(std::get<Term>(q.patterns[5].o), Term::literal("\"Bo\"@en"));
  EXPECT_EQ(std::get<Term>(q.patterns[6].o),
            Term::literal("\"b\"^^<http://example.org/str>"));
  EXPECT_EQ(std::get<Term>(q.patterns[7].o), Term::iri("bnode:b1"));
  EXPECT_EQ(q.variables(), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(Query, Errors) {
  EXPECT_THROW(parse_query("SELECT * { ?x ?p ?o }"), UnsupportedFeatureError);
  EXPECT_THROW(parse_query("SELECT * { ?x <p> ?o . FILTER(?o > 1) }"), UnsupportedFeatureError);
  EXPECT_THROW(parse_query("SELECT * { ?x <p> ?o . OPTIONAL { ?o <q> ?z } }"),
               UnsupportedFeatureError);
  EXPECT_THROW(parse_query("SELECT * { ?x foaf:knows ?o }"), ParseError);
  EXPECT_THROW(parse_query("SELECT * { }"), QueryError);
  EXPECT_THROW(parse_query("SELECT * { ?a <p> ?b . ?c <p> ?d }"), QueryError);
  EXPECT_THROW(parse_query("SELECT * { \"lit\" <p> ?b }"), ParseError);
  EXPECT_THROW(parse_query("SELECT * { ?a <p> ?b "), ParseError);
  try {
    parse_query("SELECT *\n{ ?a <p> ?b ]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Query, ConstantsJoinPatterns) {
  Query q = parse_query("SELECT * { ?a <p> <c> . <c> <q> ?b }");
  EXPECT_EQ(q.patterns.size(), 2u);
}

TEST(SplitQuery, ReplyChain) {
  Store s = fixture_store();
  SplitQuery split = split_query(reply_chain_query(), s.predicates);
  EXPECT_FALSE(split.known_empty);
  EXPECT_EQ(split.graph.edges.size(), 4u);
  EXPECT_EQ(split.a_patterns.size(), 8u);
  EXPECT_EQ(split.graph.rl_vertex_count, 5u);
  // u1, u2, p, r, s in order of appearance; ?pc etc. are attribute objects.
  EXPECT_EQ(split.graph.vertices.size(), 5u);
  EXPECT_EQ(split.a_groups.size(), 5u);
  EXPECT_EQ(split.a_groups[0].patterns.size(), 1u);  // ?u1 type UserAccount
  EXPECT_EQ(split.a_groups[2].patterns.size(), 2u);  // ?p type Post, content
  EXPECT_FALSE(split.a_groups[2].patterns[1].object.has_value());
  EXPECT_EQ(split.a_groups[4].patterns[0].object, sioc("Reply"));
  EXPECT_EQ(split.vertex_of(Variable{"r"}), 3u);
  EXPECT_FALSE(split.vertex_of(Variable{"pc"}).has_value());
}

TEST(SplitQuery, AttributeOnly) {
  Store s = fixture_store();
  Query q = parse_query(
      "PREFIX sioc: <http://rdfs.org/sioc/ns#> SELECT * { ?x a sioc:Reply ; sioc:content ?c }");
  SplitQuery split = split_query(q, s.predicates);
  EXPECT_TRUE(split.graph.edges.empty());
  EXPECT_EQ(split.graph.rl_vertex_count, 0u);
  ASSERT_EQ(split.graph.vertices.size(), 1u);
  EXPECT_EQ(split.a_groups[0].patterns.size(), 2u);
  EXPECT_EQ(decompose(split.graph).size(), 0u);
}

TEST(SplitQuery, RelationOnly) {
  Store s = fixture_store();
  Query q = parse_query(
      "PREFIX sioc: <http://rdfs.org/sioc/ns#> SELECT * { ?x sioc:reply_of ?y . ?y "
      "sioc:has_creator ?z }");
  SplitQuery split = split_query(q, s.predicates);
  EXPECT_TRUE(split.a_patterns.empty());
  for (const auto& g : split.a_groups) EXPECT_TRUE(g.patterns.empty());
}

TEST(SplitQuery, UnknownPredicateAndLiteralObject) {
  Store s = fixture_store();
  SplitQuery a = split_query(parse_query("SELECT * { ?x <http://nope> ?y }"), s.predicates);
  EXPECT_TRUE(a.known_empty);
  ASSERT_EQ(a.warnings.size(), 1u);
  EXPECT_FALSE(a.graph.edges[0].predicate_id.has_value());

  SplitQuery b = split_query(
      parse_query("SELECT * { ?x <http://xmlns.com/foaf/0.1/knows> \"lit\" }"), s.predicates);
  EXPECT_TRUE(b.known_empty);

  Query lit;
  lit.select_all = true;
  lit.patterns.push_back({Term::plain_literal("x"), sioc("content"), Variable{"c"}});
  EXPECT_THROW(split_query(lit, s.predicates), QueryError);
}
