#include "acalc/index_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace acalc {

bool operator==(const IndexTerm& a, const IndexTerm& b) { return a.z == b.z && a.p == b.p; }

bool operator<(const IndexTerm& a, const IndexTerm& b) {
  if (a.z.im != b.z.im) return a.z.im < b.z.im;
  if (a.z.re != b.z.re) return a.z.re < b.z.re;
  return a.p < b.p;
}

bool z_dominates(const CQ& t, const CQ& s) {
  if (t.im != s.im) return false;
  Q d = t.re - s.re;
  return is_integer(d) && d >= 0;
}

IndexSet normalize(std::vector<IndexTerm> terms) {
  for (auto& t : terms) {
    t.z.re.canonicalize();
    t.z.im.canonicalize();
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<IndexTerm> out;
  for (size_t i = 0; i < terms.size(); ++i) {
    bool covered = false;
    for (size_t j = 0; j < terms.size() && !covered; ++j) {
      if (i == j) continue;
      const auto& t = terms[i];
      const auto& s = terms[j];
      covered = z_dominates(t.z, s.z) && t.p <= s.p;
    }
    if (!covered) out.push_back(terms[i]);
  }
  return IndexSet::from_generators(std::move(out));
}

IndexSet IndexSet::from_generators(std::vector<IndexTerm> gens) {
  // callers outside normalize() are routed through it
  bool antichain = std::is_sorted(gens.begin(), gens.end());
  for (size_t i = 0; antichain && i < gens.size(); ++i)
    for (size_t j = 0; antichain && j < gens.size(); ++j)
      if (i != j && z_dominates(gens[i].z, gens[j].z) && gens[i].p <= gens[j].p) antichain = false;
  if (!antichain) return normalize(std::move(gens));
  IndexSet g;
  g.gens_ = std::move(gens);
  return g;
}

bool contains(const IndexSet& g, const IndexTerm& t) {
  for (const auto& s : g.generators())
    if (z_dominates(t.z, s.z) && t.p <= s.p) return true;
  return false;
}

ExtQ inf_re(const IndexSet& g) {
  if (g.empty()) return ExtQ::infinity();
  Q m = g.generators().front().z.re;
  for (const auto& s : g.generators()) m = std::min(m, Q(s.z.re));
  return ExtQ(m);
}

IndexSet add(const IndexSet& g, const IndexSet& h) {
  std::vector<IndexTerm> t;
  for (const auto& a : g.generators())
    for (const auto& b : h.generators()) t.push_back({a.z + b.z, a.p + b.p});
  return normalize(std::move(t));
}

IndexSet ext_union(const IndexSet& g, const IndexSet& h) {
  std::vector<IndexTerm> t(g.generators());
  t.insert(t.end(), h.generators().begin(), h.generators().end());
  for (const auto& a : g.generators())
    for (const auto& b : h.generators()) {
      if (a.z.im != b.z.im || !is_integer(Q(a.z.re - b.z.re))) continue;
      CQ z = a.z.re < b.z.re ? b.z : a.z;
      t.push_back({z, a.p + b.p + 1});
    }
  return normalize(std::move(t));
}

IndexSet shift(const IndexSet& g, const ExtQ& w) {
  if (w.inf) return {};
  std::vector<IndexTerm> t;
  for (const auto& a : g.generators()) t.push_back({a.z + CQ(w.v), a.p});
  return normalize(std::move(t));
}

IndexFamily pullback_family(const BMap& f, const IndexFamily& e) {
  IndexFamily out;
  for (size_t gi = 0; gi < f.dom_faces.size(); ++gi) {
    std::vector<IndexTerm> acc{{CQ(0), 0}};
    bool empty = false;
    for (size_t hi = 0; hi < f.cod_faces.size(); ++hi) {
      int ex = f.exps[gi][hi];
      if (ex == 0) continue;
      const IndexSet& eh = e.at(f.cod_faces[hi]);
      if (eh.empty()) {
        empty = true;
        break;
      }
      std::vector<IndexTerm> next;
      for (const auto& a : acc)
        for (const auto& b : eh.generators()) next.push_back({a.z + Q(ex) * b.z, a.p + b.p});
      acc = normalize(std::move(next)).generators();
    }
    out[f.dom_faces[gi]] = empty ? IndexSet{} : normalize(acc);
  }
  return out;
}

PushforwardResult pushforward_family(const BMap& f, const IndexFamily& e) {
  PushforwardResult r;
  for (size_t hi = 0; hi < f.cod_faces.size(); ++hi) {
    IndexSet acc;
    for (size_t gi = 0; gi < f.dom_faces.size(); ++gi) {
      int ex = f.exps[gi][hi];
      if (ex <= 0) continue;
      std::vector<IndexTerm> div;
      for (const auto& a : e.at(f.dom_faces[gi]).generators())
        for (int j = 0; j < ex; ++j) div.push_back({Q(1, ex) * (a.z + CQ(Q(j))), a.p});
      acc = ext_union(acc, normalize(std::move(div)));
    }
    r.family[f.cod_faces[hi]] = acc;
  }
  for (size_t gi = 0; gi < f.dom_faces.size(); ++gi) {
    bool zero = std::all_of(f.exps[gi].begin(), f.exps[gi].end(), [](int x) { return x == 0; });
    if (!zero) continue;
    ExtQ m = inf_re(e.at(f.dom_faces[gi]));
    if (!(ExtQ(0) < m)) r.violations.push_back(f.dom_faces[gi]);
  }
  return r;
}

ExtQ weight_at(const WeightVector& w, const std::string& face) {
  auto it = w.find(face);
  return it == w.end() ? ExtQ(0) : it->second;
}

IndexFamily shift_family(const IndexFamily& e, const WeightVector& w) {
  IndexFamily out;
  for (const auto& [face, g] : e) out[face] = shift(g, weight_at(w, face));
  return out;
}

std::set<std::tuple<Q, Q, unsigned>> window(const IndexSet& g, const Q& re_max, unsigned p_max) {
  std::set<std::tuple<Q, Q, unsigned>> s;
  for (const auto& a : g.generators())
    for (Q re = a.z.re; re <= re_max; re += 1)
      for (unsigned q = 0; q <= std::min(a.p, p_max); ++q) s.emplace(a.z.im, re, q);
  return s;
}

bool window_equal(const IndexSet& a, const IndexSet& b, const Q& re_max, unsigned p_max) {
  return window(a, re_max, p_max) == window(b, re_max, p_max);
}

std::string to_string(const IndexSet& g) {
  if (g.empty()) return "{}";
  std::ostringstream os;
  os << "gen{";
  bool first = true;
  for (const auto& t : g.generators()) {
    os << (first ? "" : ",") << "(" << to_string(t.z.re);
    if (t.z.im != 0) os << (t.z.im > 0 ? "+" : "") << to_string(t.z.im) << "i";
    os << "," << t.p << ")";
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace acalc
