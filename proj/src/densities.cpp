#include "acalc/densities.hpp"

#include <algorithm>

namespace acalc {

std::vector<long> gamma(const Tower& t) {
  t.validate();
  std::vector<long> g;
  long acc = 0, dims = 1 + t.b;
  for (int i = 1; i <= t.k; ++i) {
    acc += long(t.a[i]) * dims;
    g.push_back(acc);
    dims += t.f[i - 1];
  }
  return g;
}

long level_dim(const Tower& t, int level) {
  if (level == 0) return 1;
  if (level == 1) return t.b;
  return t.f[level - 2];
}

WeightVector blowup_weights(const Space& x, const Tower& t) {
  const Layout& L = *x.layout;
  WeightVector w;
  for (const auto& f : x.faces) {
    long total = 0;
    for (int lev = 0; lev <= L.k; ++lev) {
      std::vector<long> v;
      for (int i = 1; i <= L.n; ++i)
        for (int j = i + 1; j <= L.n; ++j) v.push_back(f.ray[L.n + L.label_index(pair_label(lev, L.k, i, j))]);
      long sum = 0;
      for (long e : v) sum += e;
      long m = v.size() > 1 ? *std::min_element(v.begin(), v.end()) : 0;
      total += level_dim(t, lev) * (sum - m);
    }
    w[f.name] = ExtQ(Q(total));
  }
  return w;
}

WeightVector pullback_weight(const BMap& f, const WeightVector& w) {
  WeightVector out;
  for (size_t g = 0; g < f.dom_faces.size(); ++g) {
    ExtQ s(0);
    for (size_t h = 0; h < f.cod_faces.size(); ++h)
      if (f.exps[g][h]) {
        ExtQ v = weight_at(w, f.cod_faces[h]);
        s = s + (v.inf ? v : ExtQ(Q(f.exps[g][h]) * v.v));
      }
    out[f.dom_faces[g]] = s;
  }
  return out;
}

WeightVector add_weights(const WeightVector& a, const WeightVector& b) {
  WeightVector out = a;
  for (const auto& [k, v] : b) out[k] = weight_at(a, k) + v;
  return out;
}

WeightVector scale_weights(const WeightVector& a, const Q& s) {
  WeightVector out;
  for (const auto& [k, v] : a) out[k] = v.inf ? v : ExtQ(s * v.v);
  return out;
}

namespace {

WeightVector on_double(const std::vector<long>& v) {
  static const char* names[] = {"rf", "lf", "ff_zx", "ff_zy", "ff_z"};
  WeightVector w;
  for (int i = 0; i < 5; ++i) w[names[i]] = ExtQ(Q(v[i]));
  return w;
}

}  // namespace

DoubleWeights double_weights(const Tower& t) {
  if (t.k != 2) throw TowerError("density weights are tabulated for k = 2");
  auto g = gamma(t);
  long gy = g[0], gz = g[1];
  DoubleWeights d;
  d.w_a0 = on_double({0, 0, 0, gy, gz});
  d.w_a = on_double({0, 0, 0, -gy, -gz});
  d.w_tilde = on_double({-gz, -gz, -2 * gz, -2 * gz + gy, -gz});
  d.w_a0_computed = blowup_weights(double_space(t).space, t);
  WeightVector diff = add_weights(d.w_a, scale_weights(d.w_a0, -1));
  d.w0 = scale_weights(diff, qq(1, 2));
  return d;
}

TripleWeights triple_weights(const Tower& t, const ASpaceTriple& tr) {
  auto g = gamma(t);
  long gy = g[0], gz = g[1];
  TripleWeights r;
  r.order = tr.space.bhs();
  r.W_a0_computed = blowup_weights(tr.space, t);
  auto set = [&](WeightVector& w, const std::vector<long>& v) {
    for (const auto& f : r.order) w[f] = ExtQ(0);
    w["V_y"] = Q(v[0]);
    w["V_z"] = Q(v[3]);
    for (int i = 1; i <= 3; ++i) {
      w[tri_face("G", i, 'y')] = Q(v[1]);
      w[tri_face("E", i, 'y')] = Q(v[2]);
      w[tri_face("F", i, 'z')] = Q(v[4]);
      w[tri_face("G", i, 'z')] = Q(v[5]);
      w[tri_face("E", i, 'z')] = Q(v[6]);
    }
  };
  set(r.W_a0, {2 * gy, gy, gy, 2 * gz, gy + gz, gz, gz});
  // printed as -(gy, 0, 0; -gz, -gy, 0, 0)
  set(r.W_a_displayed, {-gy, 0, 0, gz, gy, 0, 0});
  WeightVector w0 = double_weights(t).w0;
  r.W_a = r.W_a0_computed;
  for (const auto& p : tr.projections) r.W_a = add_weights(r.W_a, pullback_weight(p, w0));
  return r;
}

TripleWeights triple_weights(const Tower& t) { return triple_weights(t, triple_space(t)); }

}  // namespace acalc
