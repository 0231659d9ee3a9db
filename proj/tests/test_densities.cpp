#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "acalc/densities.hpp"

using namespace acalc;

namespace {

std::vector<Tower> sweep() {
  std::vector<Tower> v;
  for (int a1 = 1; a1 <= 3; ++a1)
    for (int a2 = 1; a2 <= 3; ++a2)
      for (int b = 0; b <= 2; ++b)
        for (int f1 = 0; f1 <= 2; ++f1) v.push_back(make_tower({1, a1, a2}, b, {f1, 1}));
  return v;
}

}  // namespace

TEST_CASE("gamma") {
  auto t = make_tower({1, 2, 3}, 1, {1, 1});
  CHECK(gamma(t) == std::vector<long>{4, 13});
  CHECK(gamma(make_tower({1, 1, 1}, 0, {0, 0})) == std::vector<long>{1, 2});
  CHECK(gamma(make_tower({1, 2, 1, 5}, 2, {3, 1, 0})) == std::vector<long>{6, 12, 47});
}

TEST_CASE("double-space weights from blowup data") {
  for (const auto& t : sweep()) {
    auto d = double_weights(t);
    CHECK(d.w_a0 == d.w_a0_computed);
    auto g = gamma(t);
    CHECK(weight_at(d.w0, "ff_z") == ExtQ(Q(-g[1])));
    CHECK(weight_at(d.w0, "ff_zy") == ExtQ(Q(-g[0])));
    CHECK(weight_at(d.w0, "rf") == ExtQ(0));
  }
  // the first-principles reading also works at other depths
  auto t = make_tower({1, 2, 1, 2}, 1, {2, 1, 0});
  auto w = blowup_weights(double_space(t).space, t);
  auto g = gamma(t);
  CHECK(w["ff_1"] == ExtQ(Q(g[0])));
  CHECK(w["ff_2"] == ExtQ(Q(g[1])));
  CHECK(w["ff_3"] == ExtQ(Q(g[2])));
  CHECK(w["ff_0"] == ExtQ(0));
}

TEST_CASE("triple-space weights") {
  for (const auto& t : {make_tower({1, 2, 3}, 1, {1, 1}), make_tower({1, 1, 2}, 0, {2, 1}),
                        make_tower({1, 3, 1}, 2, {0, 1})}) {
    auto tr = triple_space(t);
    auto w = triple_weights(t, tr);
    for (const auto& f : w.order) CHECK_MESSAGE(weight_at(w.W_a0, f) == weight_at(w.W_a0_computed, f), f);
    auto g = gamma(t);
    ExtQ gz{Q(g[1])}, my{Q(-g[0])}, mz{Q(-g[1])}, zero{0};
    for (int i = 1; i <= 3; ++i) {
      CHECK(w.W_a[tri_face("G", i, 'y')] == zero);
      CHECK(w.W_a[tri_face("E", i, 'y')] == zero);
      CHECK(w.W_a[tri_face("F", i, 'z')] == my);
      CHECK(w.W_a[tri_face("G", i, 'z')] == zero);
      CHECK(w.W_a[tri_face("E", i, 'z')] == zero);
      CHECK(w.W_a["H_" + std::to_string(i)] == zero);
    }
    CHECK(w.W_a["V_y"] == my);
    CHECK(w.W_a["V_z"] == mz);
    CHECK(w.W_a["V_x"] == zero);
    // the printed form differs in sign on the z-level faces
    CHECK_FALSE(w.W_a == w.W_a_displayed);
    CHECK(w.W_a_displayed["V_z"] == gz);
    CHECK(w.W_a_displayed["V_y"] == my);
  }
}

TEST_CASE("pullback of weights") {
  auto d = double_space(make_tower({1, 2, 3}, 1, {1, 1}));
  auto p = pullback_weight(d.proj_l, {{d.proj_l.cod_faces[0], ExtQ(2)}});
  std::vector<ExtQ> got;
  for (const auto& f : d.proj_l.dom_faces) got.push_back(p[f]);
  CHECK(got == std::vector<ExtQ>{ExtQ(0), ExtQ(2), ExtQ(2), ExtQ(2), ExtQ(2)});
  auto q = pullback_weight(d.proj_l, {{d.proj_l.cod_faces[0], ExtQ::infinity()}});
  CHECK(q["rf"] == ExtQ(0));
  CHECK(q["ff_z"].inf);
}
