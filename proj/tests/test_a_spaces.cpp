#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "acalc/a_spaces.hpp"

using namespace acalc;

namespace {

std::vector<int> column(const BMap& f, int c) {
  std::vector<int> v;
  for (const auto& r : f.exps) v.push_back(r[c]);
  return v;
}

std::vector<Tower> sweep() {
  std::vector<Tower> v;
  for (int a1 = 1; a1 <= 3; ++a1)
    for (int a2 = 1; a2 <= 3; ++a2)
      for (int b = 0; b <= 1; ++b) v.push_back(make_tower({1, a1, a2}, b, {1, b + 1}));
  return v;
}

}  // namespace

TEST_CASE("tower validation") {
  CHECK_THROWS_AS(make_tower({1, 0}, 1, {1}), TowerError);
  CHECK_THROWS_AS(make_tower({1, 1}, -1, {1}), TowerError);
  CHECK_THROWS_AS(make_tower({1, 1}, 1, {1, 2}), TowerError);
  CHECK(make_tower({1, 1, 1}, 1, {1, 1}).dim_m() == 4);
  CHECK_THROWS_AS(double_space(make_tower({2, 1}, 0, {0})), TowerError);
}

TEST_CASE("double space faces") {
  auto d0 = double_space(make_tower({1}, 0, {}));
  CHECK(d0.space.bhs() == std::vector<std::string>{"rf", "lf", "ff_x"});
  auto d1 = double_space(make_tower({1, 2}, 1, {1}));
  CHECK(d1.space.bhs() == std::vector<std::string>{"rf", "lf", "ff_yx", "ff_y"});
  auto d2 = double_space(make_tower({1, 2, 3}, 1, {1, 1}));
  CHECK(d2.space.bhs() == std::vector<std::string>{"rf", "lf", "ff_zx", "ff_zy", "ff_z"});
  auto d3 = double_space(make_tower({1, 1, 1, 1}, 0, {1, 1, 1}));
  CHECK(d3.space.faces.size() == 6);
  for (const auto* d : {&d0, &d1, &d2, &d3}) {
    auto meet = d->space.faces_meeting(d->diag);
    REQUIRE(meet.size() == 1);
    CHECK(meet[0] == d->space.bhs().back());
  }
}

TEST_CASE("exponent vectors of the double projections") {
  auto l0 = double_projections(make_tower({1}, 0, {}));
  CHECK(column(l0.first, 0) == std::vector<int>{0, 1, 1});
  CHECK(column(l0.second, 0) == std::vector<int>{1, 0, 1});
  auto l1 = double_projections(make_tower({1, 3}, 2, {1}));
  CHECK(column(l1.first, 0) == std::vector<int>{0, 1, 1, 1});
  CHECK(column(l1.second, 0) == std::vector<int>{1, 0, 1, 1});
  auto l2 = double_projections(make_tower({1, 2, 3}, 1, {1, 1}));
  CHECK(column(l2.first, 0) == std::vector<int>{0, 1, 1, 1, 1});
  CHECK(column(l2.second, 0) == std::vector<int>{1, 0, 1, 1, 1});
  for (int k = 0; k <= 4; ++k) {
    std::vector<int> a(k + 1, 2), f(k, 1);
    a[0] = 1;
    auto [pl, pr] = double_projections(make_tower(a, 1, f));
    CHECK(is_b_fibration(pl));
    CHECK(is_b_fibration(pr));
    auto cl = column(pl, 0), cr = column(pr, 0);
    CHECK(std::count(cl.begin(), cl.end(), 0) == 1);
    CHECK(std::count(cr.begin(), cr.end(), 0) == 1);
    CHECK(cl[0] == 0);
    CHECK(cr[1] == 0);
  }
}

TEST_CASE("triple space") {
  auto t = make_tower({1, 2, 3}, 1, {1, 1});
  auto tr = triple_space(t);
  CHECK(tr.space.faces.size() == 24);
  CHECK(tr.space.bhs() == std::vector<std::string>{
                              "H_1",     "H_2",     "H_3",     "V_x",     "E_{1,x}", "E_{2,x}",
                              "E_{3,x}", "V_y",     "G_{1,y}", "G_{2,y}", "G_{3,y}", "E_{1,y}",
                              "E_{2,y}", "E_{3,y}", "V_z",     "F_{1,z}", "F_{2,z}", "F_{3,z}",
                              "G_{1,z}", "G_{2,z}", "G_{3,z}", "E_{1,z}", "E_{2,z}", "E_{3,z}"});
  const Step& vz = tr.space.history[tr.space.face("V_z").step];
  CHECK(vz.order == 3);
  CHECK(vz.center.faces == std::set<std::string>{"V_y"});
  CHECK(vz.center.interior.size() == 9);
  // the E_{i,z} centers are pairwise disjoint when they are blown up
  auto seq = tr.sequence;
  size_t first = seq.steps.size() - 3;
  Space before = seq.base;
  for (size_t s = 0; s < first; ++s) before = apply_step(before, seq.steps[s]);
  for (size_t i = first; i < seq.steps.size(); ++i)
    for (size_t j = i + 1; j < seq.steps.size(); ++j) CHECK_FALSE(before.centers_meet(seq.steps[i], seq.steps[j]));
  CHECK_THROWS_AS(triple_space(make_tower({1, 1}, 1, {1})), TowerError);
}

TEST_CASE("triple projections") {
  auto t = make_tower({1, 2, 3}, 1, {1, 1});
  auto p1 = preimages(triple_projection(t, 1));
  CHECK(p1["ff_z"] == std::vector<std::string>{"E_{1,z}", "F_{1,z}", "G_{1,z}", "V_z"});
  CHECK(p1["lf"] == std::vector<std::string>{"E_{3,x}", "E_{3,y}", "E_{3,z}", "H_2"});
  auto p2 = preimages(triple_projection(t, 2));
  CHECK(p2["ff_z"] == std::vector<std::string>{"E_{2,z}", "F_{2,z}", "G_{2,z}", "V_z"});
  for (int i = 1; i <= 3; ++i) {
    BMap a = triple_projection(t, i);
    BMap b = triple_projection_by_rays(t, i);
    CHECK(a.cod_faces == b.cod_faces);
    for (const auto& f : b.dom_faces) CHECK(a.exps[a.dom_index(f)] == b.exps[b.dom_index(f)]);
    CHECK(is_b_fibration(a));
    // a partition with one 1 per row, or an all-zero row
    for (const auto& r : a.exps) {
      int ones = int(std::count(r.begin(), r.end(), 1)), zeros = int(std::count(r.begin(), r.end(), 0));
      CHECK(zeros + ones == int(r.size()));
      CHECK(ones <= 1);
    }
    size_t n = 0;
    for (const auto& [k, v] : preimages(a)) n += v.size();
    CHECK(n == 24);
  }
}

TEST_CASE("face tables") {
  for (const auto& t : sweep()) {
    auto r = verify_facemaps(t);
    CHECK(r.tables == 3);
    CHECK(r.mismatches == 0);
  }
  CHECK(reference_facemap(0).size() == 4);
  CHECK(reference_facemap(1).size() == 5);
  CHECK(reference_facemap(2).size() == 6);
  auto x = reference_facemap(0);
  CHECK(x["ff_x"] == std::vector<std::string>{"V_x", "E_{1,x}"});
  auto y = reference_facemap(1);
  CHECK(y["ff_y"] == std::vector<std::string>{"V_y", "E_{1,y}", "G_{1,y}"});
}

TEST_CASE("symmetric and commuted constructions agree") {
  for (const auto& t : {make_tower({1, 2, 3}, 1, {1, 1}), make_tower({1, 1, 1}, 0, {0, 0})}) {
    for (int i = 1; i <= 3; ++i) {
      auto sym = relabel(triple_sequence(t, 2), projection_relabel(i));
      auto com = run_script(sym, commutation_script(2));
      Space a = replay(sym), b = replay(com);
      auto iso = isomorphic(a, b);
      REQUIRE(iso);
      CHECK(iso->size() == 24);
      CHECK(total_blowdown(a).exps.size() == 24);
      for (const auto& [f, g] : *iso) CHECK(a.face(f).ray == b.face(g).ray);
    }
  }
}

TEST_CASE("reduce") {
  auto t = make_tower({1, 2, 3}, 1, {2, 3});
  auto r0 = reduce(t, 0);
  CHECK(r0.k == 0);
  CHECK(r0.a == std::vector<int>{1});
  CHECK(r0.b == 6);
  auto r1 = reduce(t, 1);
  CHECK(r1.a == std::vector<int>{1, 2});
  CHECK(r1.f == std::vector<int>{5});
  auto r2 = reduce(t, 2);
  CHECK(r2.a == t.a);
  CHECK(r2.f == t.f);
  CHECK(r2.b == t.b);
  CHECK_THROWS_AS(reduce(t, 3), TowerError);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> o(1, 4), d(0, 3);
  for (int n = 0; n < 200; ++n) {
    int k = n % 4;
    std::vector<int> a{1}, f;
    for (int i = 0; i < k; ++i) {
      a.push_back(o(rng));
      f.push_back(d(rng));
    }
    auto tw = make_tower(a, d(rng), f);
    for (int l = 0; l <= k; ++l) {
      CHECK(reduce(tw, l).dim_m() == tw.dim_m());
      for (int m = 0; m <= l; ++m) {
        auto x = reduce(reduce(tw, l), m), y = reduce(tw, m);
        CHECK(x.a == y.a);
        CHECK(x.b == y.b);
        CHECK(x.f == y.f);
      }
    }
  }
}

TEST_CASE("normal bundle rank") {
  CHECK(normal_bundle_rank(make_tower({1, 1, 1}, 1, {1, 1}), 2) == 3);
  CHECK(normal_bundle_rank(make_tower({1, 1, 1}, 4, {2, 1}), 0) == 1);
  CHECK(normal_bundle_rank(make_tower({1, 1, 1}, 0, {0, 0}), 2) == 1);
  CHECK(normal_bundle_rank(make_tower({1, 1, 1}, 2, {3, 1}), 1) == 3);
}

TEST_CASE("coordinate changes") {
  // x' = c x + O(x^2), a_0 = 2: the remainder sits one order above
  CHECK(check_coord_change(make_tower({2}, 0, {}), CoordChangeSpec{{{}, {}}, {2, -1}}));
  // x' in x C_phi + x^2 C
  CHECK(check_coord_change(make_tower({1, 1}, 1, {1}), CoordChangeSpec{{{{1, 2}}, {}, {}}, {2, -1, -1}}));
  // y0' depending on y1 at x-power 0
  CHECK_FALSE(check_coord_change(make_tower({1, 1, 1}, 1, {1, 1}), CoordChangeSpec{{{}, {{1, 0}}, {}, {}}, {}}));
  CHECK(check_coord_change(make_tower({1, 1, 1}, 1, {1, 1}), CoordChangeSpec{{{}, {{1, 1}, {2, 2}}, {}, {}}, {}}));
  CHECK_FALSE(check_coord_change(make_tower({1, 2, 1}, 1, {1, 1}), CoordChangeSpec{{{}, {{2, 2}}, {}, {}}, {}}));
}

TEST_CASE("a-function membership") {
  auto t = make_tower({2, 1, 3}, 1, {1, 1});
  CHECK(a_function_member(t, {{2, 0}}));
  CHECK_FALSE(a_function_member(t, {{0, 2}}));
  CHECK(a_function_member(t, {}));
  CHECK(a_function_member(t, {{0, -1}, {3, 1}, {6, 2}}));
  CHECK_FALSE(a_function_member(t, {{5, 2}}));
}
