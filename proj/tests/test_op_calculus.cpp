#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "acalc/op_calculus.hpp"

using namespace acalc;

namespace {

IndexSet gens(std::vector<std::pair<long, unsigned>> v) {
  std::vector<IndexTerm> t;
  for (auto [re, p] : v) t.push_back({CQ(Q(re)), p});
  return IndexSet::from_generators(t);
}

// gamma_z = 5, dim M = 4
Tower five() { return make_tower({1, 1, 1}, 1, {1, 1}); }

IndexSet random_set(std::mt19937& rng, int lo) {
  std::uniform_int_distribution<int> count(0, 2), num(lo * 6, 30), den(1, 3), pw(0, 3);
  std::vector<IndexTerm> t;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    int d = den(rng);
    t.push_back({CQ(qq(num(rng) * d / 6, d)), unsigned(pw(rng))});
  }
  return IndexSet::from_generators(t);
}

OperatorClass random_class(std::mt19937& rng) {
  OperatorClass p{Order(long(rng() % 5) - 2), {}};
  for (const auto& f : kDoubleFaces) p.family[f] = random_set(rng, -5);
  return p;
}

}  // namespace

TEST_CASE("orders") {
  CHECK(Order::minus_infinity() + Order(3) == Order::minus_infinity());
  CHECK(Order::minus_infinity() <= Order(-100));
  CHECK_FALSE(Order(0) <= Order::minus_infinity());
  CHECK(parse_order(to_string(Order(qq(-3, 2)))) == Order(qq(-3, 2)));
  CHECK(parse_order("-inf").neg_inf);
}

TEST_CASE("small classes") {
  auto p = small(Order(0), 0);
  CHECK(is_small(p));
  CHECK(p.family.size() == 5);
  CHECK(p.family["ff_z"] == gens({{0, 0}}));
  CHECK(small(Order::minus_infinity(), ExtQ::infinity()).family["ff_z"].empty());
  CHECK(subclass(small(Order(1), 2), small(Order(1), 0)));
  CHECK_FALSE(subclass(small(Order(1), 0), small(Order(1), 2)));
  CHECK_FALSE(subclass(small(Order(2), 0), small(Order(1), 0)));
}

TEST_CASE("composition examples") {
  Calculus c(five());
  CHECK(c.gamma_z() == 5);
  auto k = c.compose(small(Order(2), 0), small(Order(-2), 0));
  CHECK(k == small(Order(0), 0));

  OperatorClass p = small(Order(0), 0), q = small(Order(0), 0);
  p.family["lf"] = gens({{1, 0}});
  q.family["rf"] = gens({{2, 0}});
  CHECK(c.ffz_closed_form(p, q) == gens({{0, 0}, {8, 1}}));
  CHECK(c.compose(p, q).family["ff_z"] == gens({{0, 0}, {8, 1}}));

  OperatorClass a = small(Order(0), 0), b = small(Order(0), 0);
  a.family["rf"] = gens({{0, 0}});
  b.family["lf"] = gens({{0, 0}});
  try {
    c.compose(a, b);
    FAIL("expected NonIntegrable");
  } catch (const NonIntegrable& e) {
    CHECK(e.faces == std::vector<std::string>{"H_2"});
  }
  CHECK_THROWS_AS(c.ffz_closed_form(a, b), NonIntegrable);

  OperatorClass e = small(Order(0), ExtQ::infinity());
  CHECK(c.ffz_closed_form(e, e).empty());
}

TEST_CASE("pipeline against the closed form") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> o(1, 3), d(0, 3);
  int compared = 0;
  for (int n = 0; n < 12; ++n) {
    Calculus c(make_tower({1, o(rng), o(rng)}, d(rng), {d(rng), d(rng)}));
    for (int r = 0; r < 6; ++r) {
      auto p = random_class(rng), q = random_class(rng);
      if (!(ExtQ(0) < inf_re(add(p.family["rf"], q.family["lf"])))) {
        CHECK_THROWS_AS(c.compose(p, q), NonIntegrable);
        continue;
      }
      auto k = c.compose(p, q);
      CHECK(window_equal(k.family["ff_z"], c.ffz_closed_form(p, q), 12, 8));
      CHECK(k.order == p.order + q.order);
      // adjoint reverses products
      CHECK(adjoint(k) == c.compose(adjoint(q), adjoint(p)));
      ++compared;
    }
  }
  CHECK(compared > 30);
}

TEST_CASE("small calculus closes") {
  Calculus c(make_tower({1, 2, 3}, 1, {1, 1}));
  for (long a = -1; a <= 2; ++a)
    for (long b = 0; b <= 2; ++b) {
      auto k = c.compose(small(Order(a), a), small(Order(b), b));
      CHECK(is_small(k));
      CHECK(subclass(k, small(Order(a + b), a + b)));
    }
}

TEST_CASE("action on functions") {
  CHECK(act(small(Order(3), 0), gens({{0, 0}})) == gens({{0, 0}}));
  auto p = small(Order(0), 0);
  p.family["lf"] = gens({{2, 0}});
  CHECK(act(p, gens({{0, 0}})) == gens({{0, 0}, {2, 1}}));
  p.family["lf"] = IndexSet::single(qq(1, 2));
  CHECK(act(p, gens({{0, 0}})) == IndexSet::from_generators({{CQ(0), 0}, {CQ(qq(1, 2)), 0}}));
  CHECK(act(small(Order(0), 0), gens({{-1, 0}})) == gens({{-1, 0}}));
  auto r = small(Order(0), 0);
  r.family["rf"] = gens({{1, 0}});
  CHECK_THROWS_AS(act(r, gens({{-1, 0}})), NonIntegrable);
}

TEST_CASE("adjoint and conjugation") {
  auto s = small(Order(1), 2);
  CHECK(adjoint(s) == s);
  auto p = small(Order(0), 0);
  p.family["rf"] = gens({{3, 0}});
  p.family["lf"] = gens({{1, 0}});
  auto a = adjoint(p);
  CHECK(a.family["rf"] == gens({{1, 0}}));
  CHECK(a.family["lf"] == gens({{3, 0}}));
  CHECK(adjoint(a) == p);

  auto cs = conjugate_x(s, qq(5, 2));
  CHECK(cs.cls == s);
  CHECK_FALSE(cs.derived_extension);
  auto cp = conjugate_x(p, 1);
  CHECK(cp.derived_extension);
  CHECK(cp.cls.family["lf"] == gens({{0, 0}}));
  CHECK(cp.cls.family["rf"] == gens({{4, 0}}));
  CHECK(conjugate_x(p, 0).cls == p);
}

TEST_CASE("compactness") {
  CHECK(compact(1, -1));
  CHECK_FALSE(compact(0, -1));
  CHECK_FALSE(compact(1, 0));
  CHECK(hilbert_schmidt(3, -3, five()));
  CHECK_FALSE(hilbert_schmidt(2, -3, five()));
  CHECK_FALSE(hilbert_schmidt(3, -2, five()));
}

TEST_CASE("order bookkeeping") {
  for (const auto& t : {five(), make_tower({1, 2, 3}, 2, {0, 3})}) {
    auto o = composition_orders(qq(3, 2), -4, t);
    CHECK(o.pushed == qq(-5, 2));
    CHECK(o.pulled_p == qq(3, 2) - Q(t.dim_m()) / 4);
  }
}

TEST_CASE("parametrix ledger") {
  Calculus c(five());
  for (long m : {2L, 0L}) {
    auto l = parametrix_ledger(c, m);
    CHECK(l.steps.size() == 5);
    CHECK(l.verified());
    CHECK(replay_ledger(c, l));
    CHECK(l.steps[0].output == small(Order(-1), 0));
    CHECK(l.steps[1].output == small(Order::minus_infinity(), 0));
    CHECK(l.steps[2].output == small(Order::minus_infinity(), 1));
    CHECK(l.steps[3].output == small(Order::minus_infinity(), ExtQ::infinity()));
    CHECK(l.steps[4].output == small(Order::minus_infinity(), ExtQ::infinity()));
  }
  auto r = small(Order::minus_infinity(), 1);
  CHECK(subclass(c.compose(r, r), small(Order::minus_infinity(), 2)));
}
