#include "acalc/corner_spaces.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace acalc {

namespace {

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
  return out;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

CompiledStep compile(const Space& x, const Step& s, int ff) {
  CompiledStep c;
  for (const auto& f : s.center.faces) {
    int i = x.face_index(f);
    if (i < 0) throw SpaceError("center of " + s.name + " names unknown face " + f);
    c.faces.push_back(i);
  }
  for (const auto& l : s.center.interior) {
    int i = x.layout->label_index(l);
    if (i < 0) throw SpaceError("center of " + s.name + " names unknown label " + l);
    c.labels.push_back(i);
  }
  c.order = s.order;
  c.ff = ff;
  return c;
}

}  // namespace

int Layout::label_index(const std::string& l) const {
  auto it = std::find(labels.begin(), labels.end(), l);
  return it == labels.end() ? -1 : int(it - labels.begin());
}

std::string level_name(int level, int k) {
  if (k <= 2) return std::string(1, "xyz"[level]);
  return "l" + std::to_string(level);
}

std::string pair_label(int level, int k, int i, int j) {
  return level_name(level, k) + ":" + std::to_string(i) + std::to_string(j);
}

bool operator==(const PSub& a, const PSub& b) {
  return a.faces == b.faces && a.interior == b.interior && a.order == b.order;
}

std::string to_string(const PSub& p) {
  std::string s = "{" + join(p.faces) + "}";
  if (!p.interior.empty()) s += "+{" + join(p.interior) + "}";
  return s;
}

std::vector<int> Decomp::support() const {
  std::vector<int> s;
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] > 0) s.push_back(int(i));
  return s;
}

int Space::face_index(const std::string& f) const {
  for (size_t i = 0; i < faces.size(); ++i)
    if (faces[i].name == f) return int(i);
  return -1;
}

std::vector<std::string> Space::bhs() const {
  std::vector<std::string> v;
  for (const auto& f : faces) v.push_back(f.name);
  return v;
}

const PSub* Space::registered(const std::string& n) const {
  for (const auto& [name, p] : registry)
    if (name == n) return &p;
  return nullptr;
}

Decomp Space::peel(const std::vector<Q>& w) const {
  const Layout& L = *layout;
  Decomp d;
  d.c.assign(faces.size(), Q(0));
  for (int i = 0; i < L.n; ++i) d.c[i] = w[i];
  d.residual.assign(w.begin() + L.n, w.end());
  for (const auto& s : compiled) {
    Q lam = d.c[s.faces.front()];
    for (int f : s.faces) lam = std::min(lam, d.c[f]);
    for (int u : s.labels) lam = std::min(lam, Q(d.residual[u] / s.order));
    if (lam <= 0) continue;
    d.c[s.ff] = lam;
    for (int f : s.faces) d.c[f] -= lam;
    for (int u : s.labels) d.residual[u] -= s.order * lam;
  }
  return d;
}

void Space::close_point(std::vector<Q>& w) const {
  const Layout& L = *layout;
  for (const auto& [u, i, j] : L.level0)
    if (w[i - 1] != w[j - 1]) w[L.n + u] = 0;
  for (const auto& tri : L.triangles) {
    std::vector<Q> v;
    for (int u : tri) v.push_back(w[L.n + u]);
    std::vector<Q> s = v;
    std::sort(s.begin(), s.end());
    if (s[0] < s[1])
      for (int u : tri)
        if (w[L.n + u] == s[0]) w[L.n + u] = s[1];
  }
}

std::vector<Q> Space::center_point(const PSub& c, long big) const {
  std::vector<Q> w(layout->dim(), Q(0));
  for (const auto& f : c.faces) {
    int i = face_index(f);
    if (i < 0) throw SpaceError("unknown face " + f + " in " + name);
    for (size_t j = 0; j < w.size(); ++j) w[j] += faces[i].ray[j];
  }
  for (const auto& l : c.interior) {
    int u = layout->label_index(l);
    if (u < 0) throw SpaceError("unknown interior label " + l);
    w[layout->n + u] += big;
  }
  return w;
}

bool Space::locus_nonempty(const PSub& c) const {
  if (c.faces.empty()) return true;
  auto w = center_point(c, std::max(c.order, 1));
  close_point(w);
  Decomp d = peel(w);
  for (const auto& f : c.faces)
    if (d.c[face_index(f)] <= 0) return false;
  for (const auto& l : c.interior)
    if (d.residual[layout->label_index(l)] <= 0) return false;
  return true;
}

bool Space::centers_meet(const Step& s, const Step& t) const {
  auto w = center_point(s.center, s.order);
  auto v = center_point(t.center, t.order);
  for (size_t j = 0; j < w.size(); ++j) w[j] += v[j];
  std::vector<Q> closed = w;
  close_point(closed);
  if (closed != w) return false;
  Decomp d = peel(w);
  auto active = [&](const Step& st) {
    for (const auto& f : st.center.faces)
      if (d.c[face_index(f)] <= 0) return false;
    for (const auto& l : st.center.interior)
      if (d.residual[layout->label_index(l)] <= 0) return false;
    return true;
  };
  return active(s) && active(t);
}

bool Space::meets(const std::vector<int>& fs) const {
  std::vector<Q> w(layout->dim(), Q(0));
  for (int f : fs)
    for (size_t j = 0; j < w.size(); ++j) w[j] += faces[f].ray[j];
  // the sum must itself be a valuation of some point
  std::vector<Q> closed = w;
  close_point(closed);
  if (closed != w) return false;
  Decomp d = peel(w);
  std::vector<int> want(fs);
  std::sort(want.begin(), want.end());
  if (d.support() != want) return false;
  return std::all_of(d.residual.begin(), d.residual.end(), [](const Q& r) { return r == 0; });
}

std::vector<std::vector<int>> Space::cones() const {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> grow = [&](int from) {
    for (int f = from; f < int(faces.size()); ++f) {
      cur.push_back(f);
      if (meets(cur)) {
        out.push_back(cur);
        grow(f + 1);
      }
      cur.pop_back();
    }
  };
  grow(0);
  return out;
}

std::vector<std::string> Space::faces_meeting(const PSub& p) const {
  std::vector<std::string> out;
  for (const auto& f : faces) {
    PSub q = p;
    q.faces.insert(f.name);
    if (locus_nonempty(q)) out.push_back(f.name);
  }
  return out;
}

Space product_space(const std::vector<FactorDesc>& factors, int k, std::string name) {
  auto L = std::make_shared<Layout>();
  L->n = int(factors.size());
  L->k = k;
  for (const auto& f : factors) L->base_faces.push_back(f.bhs);
  for (int lev = 0; lev <= k; ++lev) {
    std::vector<int> tri;
    for (int i = 1; i <= L->n; ++i)
      for (int j = i + 1; j <= L->n; ++j) {
        int u = int(L->labels.size());
        L->labels.push_back(pair_label(lev, k, i, j));
        tri.push_back(u);
        if (lev == 0) L->level0.push_back({u, i, j});
      }
    if (tri.size() == 3) L->triangles.push_back(tri);
  }
  Space x;
  x.name = name.empty() ? "M^" + std::to_string(L->n) : std::move(name);
  for (int i = 0; i < L->n; ++i) {
    Face f;
    f.name = factors[i].bhs;
    f.ray.assign(L->dim(), 0);
    f.ray[i] = 1;
    x.faces.push_back(f);
  }
  x.layout = L;
  return x;
}

std::optional<PSub> lift(const Step& blown, const PSub& p) {
  const PSub& c = blown.center;
  int b = blown.order;
  if (!subset(c.faces, p.faces) || !subset(c.interior, p.interior)) return p;
  if (p.faces == c.faces && p.interior == c.interior) {
    if (p.interior.empty()) return std::nullopt;
    if (p.order != 0 && p.order < b)
      throw SpaceError("lift undefined: " + to_string(p) + " is defined only to order " +
                       std::to_string(p.order) + " < " + std::to_string(b));
    if (p.order == b) return std::nullopt;
    PSub q;
    q.faces = {blown.name};
    q.interior = p.interior;
    q.order = p.order == 0 ? 0 : p.order - b;
    return q;
  }
  PSub q;
  q.faces = minus(p.faces, c.faces);
  q.faces.insert(blown.name);
  q.interior = minus(p.interior, c.interior);
  q.order = p.order;
  return q;
}

Space apply_step(const Space& x, const Step& s) {
  if (s.order < 1) throw SpaceError("blowup order must be positive");
  if (s.center.faces.empty()) throw SpaceError("center of " + s.name + " is not a boundary submanifold");
  if (x.face_index(s.name) >= 0) throw SpaceError("face name already used: " + s.name);
  if (s.center.order != 0 && s.center.order < s.order)
    throw SpaceError("center of " + s.name + " is defined only to order " + std::to_string(s.center.order));
  Space y = x;
  CompiledStep cs = compile(x, s, int(x.faces.size()));
  if (!x.locus_nonempty(s.center)) throw SpaceError("center of " + s.name + " is empty in " + x.name);
  Face f;
  f.name = s.name;
  f.ray.assign(x.layout->dim(), 0);
  for (int i : cs.faces)
    for (size_t j = 0; j < f.ray.size(); ++j) f.ray[j] += x.faces[i].ray[j];
  for (int u : cs.labels) f.ray[x.layout->n + u] += s.order;
  f.step = int(x.history.size());
  y.faces.push_back(f);
  y.history.push_back(s);
  y.compiled.push_back(cs);
  y.registry.clear();
  for (const auto& [n, p] : x.registry)
    if (auto q = lift(s, p)) y.registry.emplace_back(n, *q);
  y.name = "[" + x.name + ";" + s.name + "]";
  return y;
}

BMap blowdown_map(const Space& before, const Space& after) {
  const Step& s = after.history.back();
  auto dom = after.bhs(), cod = before.bhs();
  std::vector<std::vector<int>> m(dom.size(), std::vector<int>(cod.size(), 0));
  for (size_t i = 0; i < cod.size(); ++i) m[i][i] = 1;
  for (const auto& f : s.center.faces) m.back()[before.face_index(f)] = 1;
  BMap b = make_bmap(after.name, before.name, dom, cod, m);
  for (const auto& l : s.center.interior) b.interior_orders[s.name][l] = s.order;
  return b;
}

BlowupResult blowup(const Space& x, const PSub& center, int a, const std::string& ff_name) {
  // a whole hypersurface: nothing changes
  if (center.faces.size() == 1 && center.interior.empty()) {
    if (x.face_index(*center.faces.begin()) < 0) throw SpaceError("unknown face " + *center.faces.begin());
    return {x, identity_bmap(x.name, x.bhs())};
  }
  int defined = 0;
  if (!center.interior.empty()) {
    const PSub* reg = nullptr;
    for (const auto& [n, p] : x.registry)
      if (p.interior == center.interior && subset(p.faces, center.faces)) reg = &p;
    if (!reg) throw SpaceError("center " + to_string(center) + " is not in the registry of " + x.name);
    defined = reg->order;
  }
  if (center.order != 0) defined = defined == 0 ? center.order : std::min(defined, center.order);
  if (defined != 0 && defined < a)
    throw SpaceError("center " + to_string(center) + " is defined only to order " + std::to_string(defined));
  Step s{center, a, ff_name};
  s.center.order = 0;
  Space y = apply_step(x, s);
  return {y, blowdown_map(x, y)};
}

BMap compose(const BMap& f, const BMap& g) {
  if (f.codomain != g.domain || f.cod_faces != g.dom_faces)
    throw SpaceError("cannot compose " + f.domain + " -> " + f.codomain + " with " + g.domain + " -> " +
                     g.codomain);
  size_t n = f.dom_faces.size(), m = f.cod_faces.size(), r = g.cod_faces.size();
  std::vector<std::vector<int>> e(n, std::vector<int>(r, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      if (f.exps[i][j])
        for (size_t l = 0; l < r; ++l) e[i][l] += f.exps[i][j] * g.exps[j][l];
  BMap h = make_bmap(f.domain, g.codomain, f.dom_faces, g.cod_faces, e);
  h.interior_orders = f.interior_orders;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      if (!f.exps[i][j]) continue;
      auto it = g.interior_orders.find(f.cod_faces[j]);
      if (it == g.interior_orders.end()) continue;
      for (const auto& [l, o] : it->second) h.interior_orders[f.dom_faces[i]][l] += f.exps[i][j] * o;
    }
  return h;
}

bool is_b_fibration(const BMap& f) {
  return std::none_of(f.face_map.begin(), f.face_map.end(), [](int h) { return h == kCorner; });
}

BMap total_blowdown(const Space& x) {
  const Layout& L = *x.layout;
  std::vector<std::vector<int>> m;
  for (const auto& f : x.faces) m.emplace_back(f.ray.begin(), f.ray.begin() + L.n);
  BMap b = make_bmap(x.name, "base", x.bhs(), L.base_faces, m);
  for (const auto& f : x.faces)
    for (size_t u = 0; u < L.labels.size(); ++u)
      if (f.ray[L.n + u]) b.interior_orders[f.name][L.labels[u]] = int(f.ray[L.n + u]);
  return b;
}

Space replay(const BlowupSeq& seq) {
  Space x = seq.base;
  for (const auto& s : seq.steps) x = apply_step(x, s);
  return x;
}

namespace {

bool references(const Step& s, const std::string& name) { return s.center.faces.count(name) > 0; }

Space prefix(const BlowupSeq& seq, size_t n) {
  Space x = seq.base;
  for (size_t i = 0; i < n; ++i) x = apply_step(x, seq.steps[i]);
  return x;
}

std::set<std::string> unite(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> u(a);
  u.insert(b.begin(), b.end());
  return u;
}

bool disjoint_sets(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

}  // namespace

namespace {

BlowupSeq rewrite_unchecked(const BlowupSeq& seq, int rule, size_t pos);

}  // namespace

BlowupSeq rewrite_step(const BlowupSeq& seq, int rule, size_t pos) {
  BlowupSeq out = rewrite_unchecked(seq, rule, pos);
  Space before = replay(seq), after;
  try {
    after = replay(out);
  } catch (const SpaceError& e) {
    throw RewriteError("rule " + std::to_string(rule) + " at " + std::to_string(pos) + ": " + e.what());
  }
  if (!isomorphic(before, after))
    throw RewriteError("rule " + std::to_string(rule) + " at " + std::to_string(pos) + " changes the space");
  return out;
}

namespace {

BlowupSeq rewrite_unchecked(const BlowupSeq& seq, int rule, size_t pos) {
  const size_t need = rule == 3 ? 3 : 2;
  if (pos + need > seq.steps.size()) throw RewriteError("rule " + std::to_string(rule) + ": position out of range");
  BlowupSeq out = seq;
  const Step& s1 = seq.steps[pos];
  const Step& s2 = seq.steps[pos + 1];
  Space x = prefix(seq, pos);
  switch (rule) {
    case 1: {
      if (references(s2, s1.name)) throw RewriteError("rule 1: second center lies on the first front face");
      if (x.centers_meet(s1, s2)) throw RewriteError("rule 1: centers " + s1.name + ", " + s2.name + " meet");
      std::swap(out.steps[pos], out.steps[pos + 1]);
      return out;
    }
    case 2: {
      if (s1.order != s2.order) throw RewriteError("rule 2: orders differ");
      if (!references(s2, s1.name)) {
        // [X;A];B~  ->  [X;B];A~  with A inside B
        const PSub &a = s1.center, &b = s2.center;
        if (!subset(b.faces, a.faces) || !subset(b.interior, a.interior) || a == b)
          throw RewriteError("rule 2: " + s1.name + " is not nested in " + s2.name);
        Step na{PSub{minus(a.faces, b.faces), minus(a.interior, b.interior), 0}, s1.order, s1.name};
        na.center.faces.insert(s2.name);
        out.steps[pos] = s2;
        out.steps[pos + 1] = na;
        return out;
      }
      // [X;B];A~  ->  [X;A];B~  where A~ = {ff_B} + rest
      PSub a{minus(s2.center.faces, {s1.name}), s2.center.interior, 0};
      if (!disjoint_sets(a.faces, s1.center.faces) || !disjoint_sets(a.interior, s1.center.interior))
        throw RewriteError("rule 2: lifted center overlaps " + s1.name);
      a.faces.insert(s1.center.faces.begin(), s1.center.faces.end());
      a.interior.insert(s1.center.interior.begin(), s1.center.interior.end());
      if (!x.locus_nonempty(a)) throw RewriteError("rule 2: nested center is empty");
      out.steps[pos] = Step{a, s1.order, s2.name};
      out.steps[pos + 1] = s1;
      return out;
    }
    case 3: {
      // [X;Y]_a; A~_b; W~~_b  ->  [X;W]_b; A~'_a; Y~~_a
      const Step& s3 = seq.steps[pos + 2];
      const PSub &y = s1.center, &w = s3.center;
      if (s2.order != s3.order) throw RewriteError("rule 3: orders of the last two steps differ");
      if (references(s3, s1.name) || references(s3, s2.name) || references(s2, s3.name))
        throw RewriteError("rule 3: third center depends on earlier front faces");
      PSub expect{minus(w.faces, y.faces), w.interior, 0};
      expect.faces.insert(s1.name);
      if (!(s2.center.faces == expect.faces && s2.center.interior == expect.interior))
        throw RewriteError("rule 3: middle center is not the lifted intersection");
      if (!disjoint_sets(y.interior, w.interior)) throw RewriteError("rule 3: intersection is not clean");
      if (subset(y.faces, w.faces) && subset(y.interior, w.interior))
        throw RewriteError("rule 3: centers are nested");
      if (subset(w.faces, y.faces) && subset(w.interior, y.interior))
        throw RewriteError("rule 3: centers are nested");
      PSub a{unite(y.faces, w.faces), unite(y.interior, w.interior), 0};
      if (!x.locus_nonempty(a)) throw RewriteError("rule 3: centers do not intersect");
      Step na{PSub{minus(y.faces, w.faces), y.interior, 0}, s1.order, s2.name};
      na.center.faces.insert(s3.name);
      out.steps[pos] = s3;
      out.steps[pos + 1] = na;
      out.steps[pos + 2] = s1;
      return out;
    }
    default:
      throw RewriteError("unknown rule " + std::to_string(rule));
  }
}

}  // namespace

BlowupSeq run_script(const BlowupSeq& seq, const std::vector<RewriteOp>& script) {
  BlowupSeq s = seq;
  for (const auto& op : script) s = rewrite_unchecked(s, op.rule, op.pos);
  if (!script.empty() && !isomorphic(replay(seq), replay(s))) throw RewriteError("script changes the space");
  return s;
}

std::optional<std::map<std::string, std::string>> isomorphic(const Space& x, const Space& y) {
  if (x.faces.size() != y.faces.size() || x.layout->labels != y.layout->labels || x.layout->n != y.layout->n)
    return std::nullopt;
  size_t n = x.faces.size();
  std::vector<std::vector<int>> cand(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (x.faces[i].ray == y.faces[j].ray) cand[i].push_back(int(j));
  auto xc = x.cones(), yc = y.cones();
  std::set<std::vector<int>> ycones(yc.begin(), yc.end());
  std::vector<int> img(n, -1);
  std::vector<bool> used(n, false);
  auto consistent = [&]() {
    if (xc.size() != yc.size()) return false;
    for (const auto& c : xc) {
      std::vector<int> m;
      for (int f : c) m.push_back(img[f]);
      std::sort(m.begin(), m.end());
      if (!ycones.count(m)) return false;
    }
    for (const auto& [name, p] : x.registry) {
      const PSub* q = y.registered(name);
      if (!q) continue;
      std::vector<std::string> a, b = y.faces_meeting(*q);
      for (const auto& f : x.faces_meeting(p)) a.push_back(y.faces[img[x.face_index(f)]].name);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return false;
    }
    return true;
  };
  std::function<bool(size_t)> assign = [&](size_t i) -> bool {
    if (i == n) return consistent();
    for (int j : cand[i]) {
      if (used[j]) continue;
      used[j] = true;
      img[i] = j;
      if (assign(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  std::map<std::string, std::string> m;
  for (size_t i = 0; i < n; ++i) m[x.faces[i].name] = y.faces[img[i]].name;
  return m;
}

std::string export_dot(const Space& x) {
  std::ostringstream os;
  os << "digraph faces {\n  rankdir=BT;\n";
  for (const auto& f : x.faces) {
    os << "  \"" << f.name << "\"";
    if (f.step >= 0) {
      const Step& s = x.history[f.step];
      os << " [label=\"" << f.name << "\\n" << to_string(s.center) << " order " << s.order << "\"]";
    } else {
      os << " [shape=box]";
    }
    os << ";\n";
  }
  for (const auto& f : x.faces) {
    if (f.step < 0) continue;
    for (const auto& c : x.history[f.step].center.faces) os << "  \"" << c << "\" -> \"" << f.name << "\";\n";
  }
  for (size_t i = 0; i < x.faces.size(); ++i)
    for (size_t j = i + 1; j < x.faces.size(); ++j)
      if (x.meets({int(i), int(j)}))
        os << "  \"" << x.faces[i].name << "\" -> \"" << x.faces[j].name
           << "\" [dir=none, style=dashed, constraint=false];\n";
  os << "}\n";
  return os.str();
}

}  // namespace acalc
