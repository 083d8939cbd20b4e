#include <gtest/gtest.h>

#include "fixture.hpp"
#include "sgdq/oracle.hpp"

using namespace sgdq;
using namespace sgdq::testing;

namespace {

Dataset tiny() {
  return load_dataset(std::vector<Triple>{
      {ex("a"), ex("p"), ex("b")},
      {ex("b"), ex("p"), ex("c")},
      {ex("c"), ex("p"), ex("a")},
      {ex("a"), ex("p"), ex("a")},
      {ex("a"), ex("name"), Term::plain_literal("A")},
  });
}

}  // namespace

TEST(Oracle, ReplyChain) {
  Dataset d = load_dataset(fixture_triples());
  OracleResult r = oracle_eval(d, reply_chain_query());
  EXPECT_EQ(r.schema, (std::vector<std::string>{"u1", "u2", "p", "r", "s"}));
  std::set<std::vector<Term>> expected = {
      {ex("account/u1"), ex("account/u3"), ex("post/p1"), ex("reply/r2"), ex("reply/r1")},
      {ex("account/u1"), ex("account/u3"), ex("post/p1"), ex("reply/r3"), ex("reply/r4")},
  };
  EXPECT_EQ(r.rows, expected);
}

TEST(Oracle, Chains) {
  Dataset d = tiny();
  auto r = oracle_eval(d, parse_query("SELECT * { ?x <http://example.org/p> ?y . "
                                      "?y <http://example.org/p> ?z }"));
  // Paths of length two over a->b->c->a plus the loop at a.
  EXPECT_EQ(r.rows.size(), 6u);
  auto loop = oracle_eval(d, parse_query("SELECT ?x { ?x <http://example.org/p> ?x }"));
  EXPECT_EQ(loop.rows, (std::set<std::vector<Term>>{{ex("a")}}));
}

TEST(Oracle, ProjectionCollapsesDuplicates) {
  Dataset d = tiny();
  auto r = oracle_eval(d, parse_query("SELECT ?x { ?x <http://example.org/p> ?y }"));
  EXPECT_EQ(r.rows.size(), 3u);
}

TEST(Oracle, ConstantsLiteralsAndUnknowns) {
  Dataset d = tiny();
  auto c = oracle_eval(d, parse_query("SELECT ?y { <http://example.org/a> <http://example.org/p> ?y }"));
  EXPECT_EQ(c.rows.size(), 2u);
  auto lit = oracle_eval(d, parse_query("SELECT ?x { ?x <http://example.org/name> \"A\" }"));
  EXPECT_EQ(lit.rows, (std::set<std::vector<Term>>{{ex("a")}}));
  auto unknown = oracle_eval(d, parse_query("SELECT ?x { ?x <http://example.org/zzz> ?y }"));
  EXPECT_TRUE(unknown.rows.empty());
  auto missing = oracle_eval(d, parse_query("SELECT ?x { ?x <http://example.org/p> <http://no> }"));
  EXPECT_TRUE(missing.rows.empty());
}

TEST(Oracle, UnboundProjection) {
  Dataset d = tiny();
  auto r = oracle_eval(d, parse_query("SELECT ?x ?nothing { ?x <http://example.org/name> ?n }"));
  EXPECT_EQ(r.rows, (std::set<std::vector<Term>>{{ex("a"), Term{}}}));
}

TEST(Oracle, Budget) {
  Dataset d = tiny();
  Query q = parse_query("SELECT * { ?a <http://example.org/p> ?b . ?b <http://example.org/p> ?c . "
                        "?c <http://example.org/p> ?d }");
  EXPECT_THROW(oracle_eval(d, q, 3), OracleBudgetExceeded);
  EXPECT_NO_THROW(oracle_eval(d, q, 0));
}
