#include "acalc/a_spaces.hpp"

#include <algorithm>
#include <numeric>

namespace acalc {

int Tower::dim_m() const { return 1 + b + std::accumulate(f.begin(), f.end(), 0); }

void Tower::validate() const {
  if (k < 0) throw TowerError("depth k must be >= 0");
  if (int(a.size()) != k + 1) throw TowerError("expected k+1 orders a_0..a_k");
  if (int(f.size()) != k) throw TowerError("expected k fibre dimensions f_1..f_k");
  for (int x : a)
    if (x < 1) throw TowerError("orders must be >= 1");
  if (b < 0) throw TowerError("dimensions must be >= 0");
  for (int x : f)
    if (x < 0) throw TowerError("dimensions must be >= 0");
}

Tower make_tower(std::vector<int> a, int b, std::vector<int> f) {
  Tower t;
  t.k = int(a.size()) - 1;
  t.a = std::move(a);
  t.b = b;
  t.f = std::move(f);
  t.validate();
  return t;
}

std::vector<std::string> double_face_names(int k) {
  std::vector<std::string> v{"rf", "lf"};
  if (k == 0) v.push_back("ff_x");
  if (k == 1) v.insert(v.end(), {"ff_yx", "ff_y"});
  if (k == 2) v.insert(v.end(), {"ff_zx", "ff_zy", "ff_z"});
  if (k > 2)
    for (int l = 0; l <= k; ++l) v.push_back("ff_" + std::to_string(l));
  return v;
}

namespace {

std::set<std::string> labels_upto(const Layout& L, int level, int i, int j) {
  std::set<std::string> s;
  for (int l = 0; l <= level; ++l) s.insert(pair_label(l, L.k, i, j));
  return s;
}

std::set<std::string> all_labels_upto(const Layout& L, int level) {
  std::set<std::string> s;
  for (int i = 1; i <= L.n; ++i)
    for (int j = i + 1; j <= L.n; ++j) {
      auto p = labels_upto(L, level, i, j);
      s.insert(p.begin(), p.end());
    }
  return s;
}

BMap factor_projection(const std::vector<std::string>& faces, const std::string& kept) {
  std::vector<std::vector<int>> m;
  for (const auto& f : faces) m.push_back({f == kept ? 1 : 0});
  return make_bmap("M^2", "M", faces, {"bM"}, m);
}

}  // namespace

ASpaceDouble double_space(const Tower& t) {
  t.validate();
  if (t.a[0] != 1) throw TowerError("space constructions need a_0 = 1");
  Space x = product_space({{"rf"}, {"lf"}}, t.k, "M^2");
  const Layout& L = *x.layout;
  x.registry.emplace_back("Delta", PSub{{}, all_labels_upto(L, t.k), 0});
  for (int l = 0; l <= t.k; ++l)
    x.registry.emplace_back("Delta_" + level_name(l, t.k), PSub{{}, all_labels_upto(L, l), 0});
  auto names = double_face_names(t.k);
  ASpaceDouble d;
  auto r = blowup(x, PSub{{"rf", "lf"}, {}, 0}, 1, names[2]);
  d.blowdowns.push_back(r.blowdown);
  for (int l = 1; l <= t.k; ++l) {
    r = blowup(r.space, PSub{{names[l + 1]}, all_labels_upto(L, l), 0}, t.a[l], names[l + 2]);
    d.blowdowns.push_back(r.blowdown);
  }
  d.space = r.space;
  d.space.name = t.k <= 2 ? std::string("M^2_") + "xyz"[t.k] : "M^2_a";
  d.diag = *d.space.registered("Delta");
  auto faces = d.space.bhs();
  BMap pl = factor_projection({"rf", "lf"}, "lf"), pr = factor_projection({"rf", "lf"}, "rf");
  for (size_t i = 0; i < d.blowdowns.size(); ++i) {
    pl = compose(d.blowdowns[i], pl);
    pr = compose(d.blowdowns[i], pr);
  }
  pl.domain = pr.domain = d.space.name;
  d.proj_l = pl;
  d.proj_r = pr;
  return d;
}

std::pair<BMap, BMap> double_projections(const Tower& t) {
  auto d = double_space(t);
  return {d.proj_l, d.proj_r};
}

std::string tri_face(const std::string& kind, int i, char level) {
  if (kind == "V") return std::string("V_") + level;
  if (kind == "H") return "H_" + std::to_string(i);
  return kind + "_{" + std::to_string(i) + "," + level + "}";
}

std::string relabel_face(const std::string& face, const std::array<int, 4>& sigma) {
  if (face.size() == 3 && face[0] == 'H' && face[1] == '_') return "H_" + std::to_string(sigma[face[2] - '0']);
  if (face.size() == 7 && face[1] == '_' && face[2] == '{') {
    std::string r = face;
    r[3] = char('0' + sigma[face[3] - '0']);
    return r;
  }
  return face;
}

namespace {

std::string relabel_label(const std::string& l, const std::array<int, 4>& sigma) {
  auto colon = l.find(':');
  int i = sigma[l[colon + 1] - '0'], j = sigma[l[colon + 2] - '0'];
  if (i > j) std::swap(i, j);
  return l.substr(0, colon + 1) + std::to_string(i) + std::to_string(j);
}

}  // namespace

PSub relabel(const PSub& p, const Layout&, const std::array<int, 4>& sigma) {
  PSub q;
  q.order = p.order;
  for (const auto& f : p.faces) q.faces.insert(relabel_face(f, sigma));
  for (const auto& l : p.interior) q.interior.insert(relabel_label(l, sigma));
  return q;
}

BlowupSeq relabel(const BlowupSeq& s, const std::array<int, 4>& sigma) {
  BlowupSeq out = s;
  const Layout& L = *s.base.layout;
  for (auto& st : out.steps) {
    st.center = relabel(st.center, L, sigma);
    st.name = relabel_face(st.name, sigma);
  }
  for (auto& [n, p] : out.base.registry) {
    p = relabel(p, L, sigma);
    n = relabel_face(n, sigma);
  }
  // base faces keep their positions; H_i is factor i in every relabeled copy
  return out;
}

std::array<int, 4> projection_relabel(int i) {
  if (i == 1) return {0, 1, 2, 3};
  if (i == 2) return {0, 2, 1, 3};
  return {0, 3, 1, 2};
}

BlowupSeq triple_sequence(const Tower& t, int levels) {
  t.validate();
  if (t.k != 2) throw TowerError("triple space is constructed for k = 2 only");
  if (t.a[0] != 1) throw TowerError("space constructions need a_0 = 1");
  BlowupSeq seq;
  seq.base = product_space({{"H_1"}, {"H_2"}, {"H_3"}}, 2, "M^3");
  const Layout& L = *seq.base.layout;
  auto other = [](int i) {
    std::array<int, 2> p{};
    int n = 0;
    for (int j = 1; j <= 3; ++j)
      if (j != i) p[n++] = j;
    return p;
  };
  for (int l = 1; l <= 2; ++l) {
    char c = "xyz"[l];
    seq.base.registry.emplace_back(std::string("Delta3_") + c, PSub{{}, all_labels_upto(L, l), 0});
    for (int i = 1; i <= 3; ++i) {
      auto [j, k] = other(i);
      seq.base.registry.emplace_back("Delta_{" + std::to_string(i) + "," + c + "}",
                                     PSub{{}, labels_upto(L, l, j, k), 0});
    }
  }
  auto& st = seq.steps;
  st.push_back({PSub{{"H_1", "H_2", "H_3"}, {}, 0}, 1, "V_x"});
  for (int i = 1; i <= 3; ++i) {
    auto [j, k] = other(i);
    st.push_back({PSub{{tri_face("H", j, 'x'), tri_face("H", k, 'x')}, {}, 0}, 1, tri_face("E", i, 'x')});
  }
  if (levels >= 1) {
    int a = t.a[1];
    st.push_back({PSub{{"V_x"}, all_labels_upto(L, 1), 0}, a, "V_y"});
    for (int i = 1; i <= 3; ++i) {
      auto [j, k] = other(i);
      st.push_back({PSub{{"V_x"}, labels_upto(L, 1, j, k), 0}, a, tri_face("G", i, 'y')});
    }
    for (int i = 1; i <= 3; ++i) {
      auto [j, k] = other(i);
      st.push_back({PSub{{tri_face("E", i, 'x')}, labels_upto(L, 1, j, k), 0}, a, tri_face("E", i, 'y')});
    }
  }
  if (levels >= 2) {
    int a = t.a[2];
    st.push_back({PSub{{"V_y"}, all_labels_upto(L, 2), 0}, a, "V_z"});
    for (int i = 1; i <= 3; ++i) {
      auto [j, k] = other(i);
      st.push_back({PSub{{"V_y"}, labels_upto(L, 2, j, k), 0}, a, tri_face("F", i, 'z')});
    }
    for (int i = 1; i <= 3; ++i) {
      auto [j, k] = other(i);
      st.push_back({PSub{{tri_face("G", i, 'y')}, labels_upto(L, 2, j, k), 0}, a, tri_face("G", i, 'z')});
    }
    for (int i = 1; i <= 3; ++i) {
      auto [j, k] = other(i);
      st.push_back({PSub{{tri_face("E", i, 'y')}, labels_upto(L, 2, j, k), 0}, a, tri_face("E", i, 'z')});
    }
  }
  return seq;
}

std::map<std::string, std::vector<std::string>> preimages(const BMap& f) {
  std::map<std::string, std::vector<std::string>> m;
  for (size_t i = 0; i < f.dom_faces.size(); ++i) {
    int h = f.face_map[i];
    std::string key = h == kInterior ? "interior" : h == kCorner ? "corner" : f.cod_faces[h];
    m[key].push_back(f.dom_faces[i]);
  }
  for (auto& [k, v] : m) std::sort(v.begin(), v.end());
  return m;
}

BMap triple_projection_by_rays(const Tower& t, int i, int levels) {
  Space x = replay(triple_sequence(t, levels));
  Tower r = reduce(t, levels);
  ASpaceDouble d = double_space(r);
  const Layout& TL = *x.layout;
  const Layout& DL = *d.space.layout;
  auto sigma = projection_relabel(i);
  int j = sigma[2], k = sigma[3];
  std::vector<std::vector<int>> m;
  for (const auto& g : x.faces) {
    std::vector<Q> w(DL.dim(), Q(0));
    w[0] = g.ray[k - 1];
    w[1] = g.ray[j - 1];
    for (size_t u = 0; u < DL.labels.size(); ++u) {
      int lev = int(u);
      w[DL.n + u] = g.ray[TL.n + TL.label_index(pair_label(lev, 2, j, k))];
    }
    Decomp dc = d.space.peel(w);
    std::vector<int> row;
    for (const auto& c : dc.c) {
      if (!is_integer(c)) throw SpaceError("non-integral exponent for " + g.name);
      row.push_back(int(c.get_num().get_si()));
    }
    m.push_back(row);
  }
  BMap f = make_bmap(x.name, d.space.name, x.bhs(), d.space.bhs(), m);
  return f;
}

namespace {

// M x M^2 prefix for pi_i: E_{i,x}, E_{i,y}, E_{i,z} on the pair (j, k)
bool has_product_prefix(const BlowupSeq& s, int i, int levels) {
  auto sigma = projection_relabel(i);
  int j = sigma[2], k = sigma[3];
  const Layout& L = *s.base.layout;
  for (int l = 0; l <= levels; ++l) {
    if (int(s.steps.size()) <= l) return false;
    const Step& st = s.steps[l];
    PSub want;
    if (l == 0)
      want.faces = {"H_" + std::to_string(j), "H_" + std::to_string(k)};
    else
      want = PSub{{tri_face("E", i, "xyz"[l - 1])}, labels_upto(L, l, j, k), 0};
    if (st.name != tri_face("E", i, "xyz"[l]) || st.center.faces != want.faces ||
        st.center.interior != want.interior)
      return false;
  }
  return true;
}

}  // namespace

BMap triple_projection(const Tower& t, int i, int levels) {
  auto sigma = projection_relabel(i);
  BlowupSeq sym = relabel(triple_sequence(t, levels), sigma);
  BlowupSeq seq = run_script(sym, commutation_script(levels));
  if (!has_product_prefix(seq, i, levels))
    throw SpaceError("commutation script does not reach M x M^2 for pi_" + std::to_string(i));
  Tower r = reduce(t, levels);
  auto dnames = double_face_names(r.k);
  int j = sigma[2], k = sigma[3];
  Space x = seq.base;
  std::vector<std::vector<int>> pm;
  std::vector<std::string> pfaces;
  for (int f = 1; f <= 3; ++f) {
    pfaces.push_back("H_" + std::to_string(f));
    std::vector<int> row(dnames.size(), 0);
    if (f == j) row[1] = 1;
    if (f == k) row[0] = 1;
    pm.push_back(row);
  }
  for (int l = 0; l <= levels; ++l) {
    x = apply_step(x, seq.steps[l]);
    pfaces.push_back(seq.steps[l].name);
    std::vector<int> row(dnames.size(), 0);
    row[2 + l] = 1;
    pm.push_back(row);
  }
  std::string prod = x.name;
  BMap total = make_bmap(prod, "M^2", pfaces, dnames, pm);
  std::vector<BMap> downs;
  for (size_t s = levels + 1; s < seq.steps.size(); ++s) {
    Space y = apply_step(x, seq.steps[s]);
    downs.push_back(blowdown_map(x, y));
    x = y;
  }
  for (const auto& down : downs) total = compose(down, total);
  return total;
}

BMap triple_projection(const Tower& t, int i, int levels, bool by_rays) {
  return by_rays ? triple_projection_by_rays(t, i, levels) : triple_projection(t, i, levels);
}

ASpaceTriple triple_space(const Tower& t) {
  ASpaceTriple tr;
  tr.sequence = triple_sequence(t, 2);
  tr.space = replay(tr.sequence);
  tr.space.name = "M^3_z";
  for (int i = 1; i <= 3; ++i) tr.projections.push_back(triple_projection(t, i, 2));
  return tr;
}

const std::map<std::string, std::vector<std::string>>& reference_facemap(int level) {
  static const std::map<std::string, std::vector<std::string>> x{
      {"interior", {"H_1"}},
      {"rf", {"H_3", "E_{2,x}"}},
      {"lf", {"H_2", "E_{3,x}"}},
      {"ff_x", {"V_x", "E_{1,x}"}},
  };
  static const std::map<std::string, std::vector<std::string>> y{
      {"interior", {"H_1"}},
      {"rf", {"H_3", "E_{2,x}", "E_{2,y}"}},
      {"lf", {"H_2", "E_{3,x}", "E_{3,y}"}},
      {"ff_yx", {"V_x", "E_{1,x}", "G_{2,y}", "G_{3,y}"}},
      {"ff_y", {"V_y", "E_{1,y}", "G_{1,y}"}},
  };
  static const std::map<std::string, std::vector<std::string>> z{
      {"interior", {"H_1"}},
      {"rf", {"H_3", "E_{2,x}", "E_{2,y}", "E_{2,z}"}},
      {"lf", {"H_2", "E_{3,x}", "E_{3,y}", "E_{3,z}"}},
      {"ff_zx", {"V_x", "E_{1,x}", "G_{2,y}", "G_{2,z}", "G_{3,y}", "G_{3,z}"}},
      {"ff_zy", {"V_y", "E_{1,y}", "G_{1,y}", "F_{2,z}", "F_{3,z}"}},
      {"ff_z", {"V_z", "E_{1,z}", "G_{1,z}", "F_{1,z}"}},
  };
  if (level == 0) return x;
  if (level == 1) return y;
  return z;
}

namespace {

std::map<std::string, std::vector<std::string>> relabeled_reference(int level, int i) {
  auto sigma = projection_relabel(i);
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [k, v] : reference_facemap(level)) {
    auto& w = out[k];
    for (const auto& f : v) w.push_back(relabel_face(f, sigma));
    std::sort(w.begin(), w.end());
  }
  return out;
}

int compare_tables(const std::map<std::string, std::vector<std::string>>& got,
                   const std::map<std::string, std::vector<std::string>>& want, const std::string& tag,
                   std::vector<std::string>& lines) {
  int bad = 0;
  std::set<std::string> keys;
  for (const auto& [k, v] : got) keys.insert(k);
  for (const auto& [k, v] : want) keys.insert(k);
  for (const auto& k : keys) {
    auto g = got.count(k) ? got.at(k) : std::vector<std::string>{};
    auto w = want.count(k) ? want.at(k) : std::vector<std::string>{};
    if (g != w) {
      ++bad;
      std::string gs, ws;
      for (const auto& s : g) gs += " " + s;
      for (const auto& s : w) ws += " " + s;
      lines.push_back(tag + " mismatch at " + k + ": computed" + gs + " | expected" + ws);
    }
  }
  return bad;
}

}  // namespace

FacemapReport verify_facemaps(const Tower& t) {
  FacemapReport r;
  for (int level = 0; level <= 2; ++level) {
    ++r.tables;
    int before = r.mismatches;
    for (int i = 1; i <= 3; ++i) {
      auto want = relabeled_reference(level, i);
      std::string tag = std::string("pi^3_{") + "xyz"[level] + "," + std::to_string(i) + "}";
      BMap a = triple_projection(t, i, level);
      BMap b = triple_projection_by_rays(t, i, level);
      if (!is_b_fibration(a)) {
        ++r.mismatches;
        r.lines.push_back(tag + " is not a b-fibration");
      }
      r.mismatches += compare_tables(preimages(a), want, tag + " (commuted construction)", r.lines);
      r.mismatches += compare_tables(preimages(b), want, tag + " (projected valuations)", r.lines);
      // pi_2, pi_3 against the relabeled pi_1 table computed above
      if (i > 1) {
        auto base = preimages(triple_projection(t, 1, level));
        std::map<std::string, std::vector<std::string>> moved;
        for (const auto& [k, v] : base) {
          auto& w = moved[k];
          for (const auto& f : v) w.push_back(relabel_face(f, projection_relabel(i)));
          std::sort(w.begin(), w.end());
        }
        r.mismatches += compare_tables(preimages(a), moved, tag + " (relabeled pi_1)", r.lines);
      }
    }
    r.lines.push_back(std::string("level ") + "xyz"[level] + ": " + std::to_string(r.mismatches - before) +
                      " mismatches");
  }
  return r;
}

Tower reduce(const Tower& t, int l) {
  t.validate();
  if (l < 0 || l > t.k) throw TowerError("reduction level out of range");
  Tower r;
  r.k = l;
  r.a.assign(t.a.begin(), t.a.begin() + l + 1);
  r.b = t.b;
  if (l == 0) {
    for (int x : t.f) r.b += x;
  } else {
    r.f.assign(t.f.begin(), t.f.begin() + l);
    for (int i = l; i < t.k; ++i) r.f.back() += t.f[i];
  }
  return r;
}

int normal_bundle_rank(const Tower& t, int l) {
  if (l < 0 || l > t.k) throw TowerError("level out of range");
  int r = 1;
  if (l >= 1) r += t.b;
  for (int i = 1; i < l; ++i) r += t.f[i - 1];
  return r;
}

bool check_coord_change(const Tower& t, const CoordChangeSpec& c) {
  auto sum = [&](int from, int to) {
    int s = 0;
    for (int i = from; i <= to; ++i) s += t.a[i];
    return s;
  };
  for (size_t row = 0; row < c.cross.size(); ++row) {
    int j = int(row) - 1;
    for (const auto& ct : c.cross[row]) {
      if (ct.source_level <= j) continue;
      if (ct.source_level > t.k) return false;
      if (ct.x_power < sum(j + 1, ct.source_level)) return false;
    }
  }
  for (size_t row = 0; row < c.remainder.size(); ++row) {
    int j = int(row) - 1;
    if (c.remainder[row] >= 0 && c.remainder[row] < sum(j + 1, t.k)) return false;
  }
  return true;
}

bool a_function_member(const Tower& t, const std::vector<SeriesTerm>& s) {
  for (const auto& term : s) {
    if (term.level < 0) continue;
    if (term.level > t.k) return false;
    int need = 0;
    for (int i = 0; i <= term.level; ++i) need += t.a[i];
    if (term.x_power < need) return false;
  }
  return true;
}

std::vector<RewriteOp> commutation_script(int levels) {
  // {rule, position}; positions index the sequence as it stands before each step
  static const std::vector<RewriteOp> x{{2, 0}};
  static const std::vector<RewriteOp> y{{2, 0}, {1, 7}, {1, 6}, {2, 4}, {1, 5}, {1, 3}, {1, 4},
                                        {1, 2}, {1, 3}, {3, 1}};
  static const std::vector<RewriteOp> z{
      {2, 0},  {1, 7},  {1, 6},  {1, 17}, {1, 16}, {2, 4},  {1, 5}, {1, 14}, {1, 15}, {1, 13}, {1, 14},
      {1, 3},  {1, 4},  {1, 2},  {1, 3},  {3, 1},  {2, 11}, {1, 12}, {1, 13}, {1, 10}, {1, 11}, {1, 12},
      {1, 9},  {1, 10}, {1, 11}, {1, 8},  {1, 9},  {1, 10}, {1, 7}, {1, 8},  {1, 9},  {3, 6},  {1, 8},
      {1, 7},  {1, 5},  {1, 6},  {1, 4},  {1, 5},  {1, 3},  {1, 4}, {3, 2}};
  if (levels == 0) return x;
  if (levels == 1) return y;
  return z;
}

}  // namespace acalc
