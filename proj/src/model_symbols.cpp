#include "acalc/model_symbols.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace acalc {

CQ operator*(const CQ& a, const CQ& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CQ conj(const CQ& a) { return {a.re, -a.im}; }

std::string to_string(const CQ& z) {
  if (z.im == 0) return to_string(z.re);
  if (z.re == 0) return to_string(z.im) + "i";
  return to_string(z.re) + (z.im > 0 ? "+" : "") + to_string(z.im) + "i";
}

namespace {

bool is_zero(const CQ& z) { return z.re == 0 && z.im == 0; }
std::complex<double> cd(const CQ& z) { return {z.re.get_d(), z.im.get_d()}; }
constexpr double kPi = std::numbers::pi;

}  // namespace

// ---------------- Poly ----------------

Poly Poly::constant(const Q& c) {
  Poly p;
  if (c != 0) p.terms[{}] = c;
  return p;
}

Poly Poly::var(const std::string& v, int e, const Q& c) {
  Poly p;
  Monomial m;
  if (e != 0) m[v] = e;
  if (c != 0) p.terms[m] = c;
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms) {
    Q s = r.terms[m] + c;
    if (s == 0)
      r.terms.erase(m);
    else
      r.terms[m] = s;
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms) c = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [m1, c1] : terms)
    for (const auto& [m2, c2] : o.terms) {
      Monomial m = m1;
      for (const auto& [v, e] : m2)
        if ((m[v] += e) == 0) m.erase(v);
      Poly t;
      t.terms[m] = c1 * c2;
      r = r + t;
    }
  return r;
}

Poly Poly::diff(const std::string& v) const {
  Poly r;
  for (const auto& [m, c] : terms) {
    auto it = m.find(v);
    if (it == m.end()) continue;
    Monomial n = m;
    int e = it->second;
    if (--n[v] == 0) n.erase(v);
    Poly t;
    t.terms[n] = c * e;
    r = r + t;
  }
  return r;
}

Poly Poly::subst(const std::string& v, const Poly& by) const {
  Poly r;
  for (const auto& [m, c] : terms) {
    auto it = m.find(v);
    Monomial rest = m;
    rest.erase(v);
    Poly t;
    t.terms[rest] = c;
    if (it != m.end()) {
      int e = it->second;
      Poly f = by;
      if (e < 0) {
        if (by.terms.size() != 1) throw std::invalid_argument("negative power of a sum");
        Poly inv;
        Monomial mi;
        for (const auto& [u, k] : by.terms.begin()->first) mi[u] = -k;
        inv.terms[mi] = 1 / by.terms.begin()->second;
        f = inv;
        e = -e;
      }
      for (int i = 0; i < e; ++i) t = t * f;
    }
    r = r + t;
  }
  return r;
}

std::optional<Poly> Poly::at_zero(const std::string& v) const {
  Poly r;
  for (const auto& [m, c] : terms) {
    auto it = m.find(v);
    if (it == m.end()) {
      r.terms[m] = c;
      continue;
    }
    if (it->second < 0) return std::nullopt;
  }
  return r;
}

std::string to_string(const Poly& p) {
  if (p.terms.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : p.terms) {
    std::string mono;
    for (const auto& [v, e] : m) mono += (mono.empty() ? "" : "*") + v + (e == 1 ? "" : "^" + std::to_string(e));
    Q a = abs(c);
    std::string coef = (a == 1 && !mono.empty()) ? "" : to_string(a) + (mono.empty() ? "" : "*");
    if (s.empty())
      s = (c < 0 ? "-" : "") + coef + mono;
    else
      s += (c < 0 ? " - " : " + ") + coef + mono;
  }
  return s;
}

std::string to_string(const VField& v) {
  std::string s;
  for (const auto& [u, p] : v) {
    if (p.zero()) continue;
    std::string c = to_string(p);
    std::string term = (c == "1" ? "" : (p.terms.size() > 1 ? "(" + c + ")*" : c + "*")) + "d_" + u;
    if (term.rfind("-1*", 0) == 0) term = "-" + term.substr(3);
    if (s.empty())
      s = term;
    else if (term[0] == '-')
      s += " - " + term.substr(1);
    else
      s += " + " + term;
  }
  return s.empty() ? "0" : s;
}

VField clean(VField v) {
  for (auto it = v.begin(); it != v.end();)
    if (it->second.zero())
      it = v.erase(it);
    else
      ++it;
  return v;
}

// ---------------- vector-field lifts ----------------

namespace {

std::string idx(const std::string& base, int i) { return base + std::to_string(i); }

struct StageChange {
  // new coordinates as functions of old ones
  std::vector<std::pair<std::string, Poly>> fresh;
  // old coordinates that disappear, in terms of new ones
  std::vector<std::pair<std::string, Poly>> gone;
};

StageChange stage_change(const ModelShape& s, Stage st) {
  StageChange c;
  Poly x = Poly::var("x");
  if (st == Stage::X) {
    c.fresh.push_back({"t", Poly::var("xp") * Poly::var("x", -1)});
    c.gone.push_back({"xp", Poly::var("t") * x});
  } else if (st == Stage::Y) {
    Poly inv = Poly::var("x", -s.a1);
    c.fresh.push_back({"T", (Poly::constant(1) + -Poly::var("t")) * inv});
    c.gone.push_back({"t", Poly::constant(1) + -(Poly::var("x", s.a1) * Poly::var("T"))});
    for (int i = 1; i <= s.b; ++i) {
      c.fresh.push_back({idx("Y", i), (Poly::var(idx("y", i)) + -Poly::var(idx("yp", i))) * inv});
      c.gone.push_back({idx("yp", i), Poly::var(idx("y", i)) + -(Poly::var("x", s.a1) * Poly::var(idx("Y", i)))});
    }
  } else if (st == Stage::Z) {
    Poly inv = Poly::var("x", -s.a2);
    c.fresh.push_back({"𝒯", Poly::var("T") * inv});
    c.gone.push_back({"T", Poly::var("x", s.a2) * Poly::var("𝒯")});
    for (int i = 1; i <= s.b; ++i) {
      c.fresh.push_back({idx("𝒴", i), Poly::var(idx("Y", i)) * inv});
      c.gone.push_back({idx("Y", i), Poly::var("x", s.a2) * Poly::var(idx("𝒴", i))});
    }
    for (int j = 1; j <= s.f1; ++j) {
      c.fresh.push_back({idx("𝒵", j), (Poly::var(idx("z", j)) + -Poly::var(idx("zp", j))) * inv});
      c.gone.push_back({idx("zp", j), Poly::var(idx("z", j)) + -(Poly::var("x", s.a2) * Poly::var(idx("𝒵", j)))});
    }
  }
  return c;
}

VField change(const VField& v, const StageChange& c) {
  VField out;
  std::set<std::string> gone;
  for (const auto& [g, e] : c.gone) gone.insert(g);
  for (const auto& [u, p] : v)
    if (!gone.count(u)) out[u] = p;
  for (const auto& [u, expr] : c.fresh) {
    Poly comp;
    for (const auto& [old, p] : v) comp = comp + p * expr.diff(old);
    out[u] = comp;
  }
  for (auto& [u, p] : out)
    for (const auto& [g, e] : c.gone) p = p.subst(g, e);
  return clean(out);
}

std::string dir_coord(Dir d, int i) {
  switch (d) {
    case Dir::X: return "x";
    case Dir::Y: return idx("y", i);
    case Dir::Z: return idx("z", i);
    case Dir::W: return idx("w", i);
  }
  return "";
}

}  // namespace

int ModelShape::weight(int v) const {
  if (v == 0) return 1 + a1 + a2;
  if (v <= b) return a1 + a2;
  if (v <= b + f1) return a2;
  return 0;
}

ModelShape model_shape(const Tower& t) {
  if (t.k != 2) throw TowerError("model operators need k = 2");
  return {t.a[1], t.a[2], t.b, t.f[0], t.f[1]};
}

VField lift_vf(const Tower& t, Dir dir, int index, int x_power, Stage stage) {
  ModelShape s = model_shape(t);
  VField v{{dir_coord(dir, index), Poly::var("x", x_power)}};
  for (Stage st : {Stage::X, Stage::Y, Stage::Z}) {
    if (int(st) > int(stage)) break;
    v = change(v, stage_change(s, st));
  }
  return v;
}

std::optional<VField> at_front_face(const VField& v) {
  VField out;
  for (const auto& [u, p] : v) {
    auto r = p.at_zero("x");
    if (!r) return std::nullopt;
    out[u] = *r;
  }
  return clean(out);
}

VField lifted_basis(const Tower& t, Dir dir, int index) {
  ModelShape s = model_shape(t);
  int w = dir == Dir::X ? s.weight(0) : dir == Dir::Y ? s.weight(1) : dir == Dir::Z ? s.a2 : 0;
  return lift_vf(t, dir, index, w, Stage::Z);
}

namespace {

int rank_q(std::vector<std::vector<Q>> m) {
  int r = 0;
  size_t cols = m.empty() ? 0 : m[0].size();
  for (size_t c = 0; c < cols && r < int(m.size()); ++c) {
    int piv = -1;
    for (size_t i = r; i < m.size(); ++i)
      if (m[i][c] != 0) {
        piv = int(i);
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    for (size_t i = 0; i < m.size(); ++i)
      if (int(i) != r && m[i][c] != 0) {
        Q f = m[i][c] / m[r][c];
        for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      }
    ++r;
  }
  return r;
}

std::vector<std::string> stage_z_coords(const ModelShape& s) {
  std::vector<std::string> v{"x", "𝒯"};
  for (int i = 1; i <= s.b; ++i) v.push_back(idx("𝒴", i));
  for (int j = 1; j <= s.f1; ++j) v.push_back(idx("𝒵", j));
  for (int i = 1; i <= s.b; ++i) v.push_back(idx("y", i));
  for (int j = 1; j <= s.f1; ++j) v.push_back(idx("z", j));
  for (int k = 1; k <= s.f2; ++k) v.insert(v.end(), {idx("w", k), idx("wp", k)});
  return v;
}

// value at a point of the lifted diagonal over ff_z
std::optional<Q> on_diagonal(const Poly& p) {
  Poly r = p;
  std::set<std::string> vars;
  for (const auto& [m, c] : p.terms)
    for (const auto& [v, e] : m) vars.insert(v);
  for (const auto& v : vars) {
    auto z = r.at_zero(v);
    if (!z) return std::nullopt;
    r = *z;
  }
  return r.terms.empty() ? Q(0) : r.terms.begin()->second;
}

std::vector<std::pair<Dir, int>> basis_dirs(const ModelShape& s, bool with_w) {
  std::vector<std::pair<Dir, int>> v{{Dir::X, 1}};
  for (int i = 1; i <= s.b; ++i) v.push_back({Dir::Y, i});
  for (int j = 1; j <= s.f1; ++j) v.push_back({Dir::Z, j});
  if (with_w)
    for (int k = 1; k <= s.f2; ++k) v.push_back({Dir::W, k});
  return v;
}

}  // namespace

bool transversality_check(const Tower& t, bool with_w) {
  ModelShape s = model_shape(t);
  auto coords = stage_z_coords(s);
  auto col = [&](const std::string& u) { return int(std::find(coords.begin(), coords.end(), u) - coords.begin()); };
  std::vector<std::vector<Q>> rows;
  for (auto [d, i] : basis_dirs(s, with_w)) {
    VField v = lifted_basis(t, d, i);
    // smooth up to x = 0
    for (const auto& [u, p] : v)
      for (const auto& [m, c] : p.terms)
        if (m.count("x") && m.at("x") < 0) return false;
    std::vector<Q> row(coords.size());
    for (const auto& [u, p] : v) {
      auto val = on_diagonal(*p.at_zero("x"));
      if (!val) return false;
      row[col(u)] = *val;
    }
    rows.push_back(row);
  }
  // tangent space of the diagonal: d_x, d_y, d_z, d_w + d_w'
  auto unit = [&](std::initializer_list<std::string> us) {
    std::vector<Q> r(coords.size());
    for (const auto& u : us) r[col(u)] = 1;
    rows.push_back(r);
  };
  unit({"x"});
  for (int i = 1; i <= s.b; ++i) unit({idx("y", i)});
  for (int j = 1; j <= s.f1; ++j) unit({idx("z", j)});
  for (int k = 1; k <= s.f2; ++k) unit({idx("w", k), idx("wp", k)});
  return rank_q(rows) == int(coords.size());
}

// ---------------- coefficients ----------------

Coeff Coeff::constant(const CQ& c, int nvars) {
  Coeff r;
  if (!is_zero(c)) r.terms[{0, 0, std::vector<int>(nvars - 1, 0)}] = c;
  return r;
}

Coeff Coeff::monomial(const CQ& c, int xpow, std::vector<int> freq, int pipow) {
  Coeff r;
  if (!is_zero(c)) r.terms[{xpow, pipow, std::move(freq)}] = c;
  return r;
}

Coeff Coeff::operator+(const Coeff& o) const {
  Coeff r = *this;
  for (const auto& [k, c] : o.terms) {
    CQ s = r.terms[k] + c;
    if (is_zero(s))
      r.terms.erase(k);
    else
      r.terms[k] = s;
  }
  return r;
}

Coeff Coeff::operator*(const Coeff& o) const {
  Coeff r;
  for (const auto& [k1, c1] : terms)
    for (const auto& [k2, c2] : o.terms) {
      CoeffKey k{k1.xpow + k2.xpow, k1.pipow + k2.pipow, k1.freq};
      for (size_t i = 0; i < k.freq.size(); ++i) k.freq[i] += k2.freq[i];
      Coeff t;
      t.terms[k] = c1 * c2;
      r = r + t;
    }
  return r;
}

Coeff Coeff::scaled(const CQ& s) const {
  Coeff r;
  for (const auto& [k, c] : terms) r = r + Coeff{{{k, s * c}}};
  return r;
}

Coeff Coeff::conjugate() const {
  Coeff r;
  for (const auto& [k, c] : terms) {
    CoeffKey n = k;
    for (auto& f : n.freq) f = -f;
    r.terms[n] = conj(c);
  }
  return r;
}

Coeff Coeff::at_x0() const {
  Coeff r;
  for (const auto& [k, c] : terms)
    if (k.xpow == 0) r.terms[k] = c;
  return r;
}

int Coeff::w_degree(int first_w) const {
  int d = 0;
  for (const auto& [k, c] : terms)
    for (size_t i = first_w; i < k.freq.size(); ++i) d = std::max(d, std::abs(k.freq[i]));
  return d;
}

namespace {

// x^e D_v applied to a coefficient
Coeff field_on(const ModelShape& s, int v, const Coeff& c) {
  Coeff r;
  int e = s.weight(v);
  for (const auto& [k, a] : c.terms) {
    if (v == 0) {
      if (k.xpow == 0) continue;
      CoeffKey n = k;
      n.xpow += e - 1;
      r = r + Coeff{{{n, CQ(0, Q(-k.xpow)) * a}}};
    } else {
      int f = k.freq[v - 1];
      if (f == 0) continue;
      CoeffKey n = k;
      n.xpow += e;
      n.pipow += 1;
      r = r + Coeff{{{n, CQ(Q(2 * f)) * a}}};
    }
  }
  return r;
}

ADiffOp times(const Coeff& c, const ADiffOp& p) {
  ADiffOp r{p.shape, {}};
  for (const auto& [i, a] : p.terms) r.add(i, c * a);
  return r;
}

ADiffOp apply_field(int v, const ADiffOp& p) {
  const ModelShape& s = p.shape;
  ADiffOp r{s, {}};
  for (const auto& [i, c] : p.terms) {
    Coeff d = field_on(s, v, c);
    if (!d.zero()) r.add(i, d);
    if (v == 0) {
      auto j = i;
      ++j[0];
      r.add(j, c);
      continue;
    }
    // V_v V_x^beta R = V_x (V_v V_x^{beta-1} R) + i e_v x^{e_x - 1} (V_v V_x^{beta-1} R)
    auto j = i;
    j[0] = 0;
    ++j[v];
    ADiffOp cur{s, {}};
    cur.add(j, Coeff::constant(CQ(1), s.nvars()));
    Coeff comm = Coeff::monomial(CQ(0, Q(s.weight(v))), s.weight(0) - 1, std::vector<int>(s.nvars() - 1, 0));
    for (int b = 0; b < i[0]; ++b) cur = apply_field(0, cur) + times(comm, cur);
    r = r + times(c, cur);
  }
  return r;
}

}  // namespace

int ADiffOp::order() const {
  int m = 0;
  for (const auto& [i, c] : terms) {
    int d = 0;
    for (int e : i) d += e;
    m = std::max(m, d);
  }
  return m;
}

void ADiffOp::add(const std::vector<int>& idx, const Coeff& c) {
  Coeff s = terms[idx] + c;
  if (s.zero())
    terms.erase(idx);
  else
    terms[idx] = s;
}

ADiffOp op_constant(const ModelShape& s, const CQ& c) {
  ADiffOp p{s, {}};
  p.add(std::vector<int>(s.nvars(), 0), Coeff::constant(c, s.nvars()));
  return p;
}

ADiffOp op_field(const ModelShape& s, int var) {
  ADiffOp p{s, {}};
  std::vector<int> i(s.nvars(), 0);
  i[var] = 1;
  p.add(i, Coeff::constant(CQ(1), s.nvars()));
  return p;
}

ADiffOp op_multiply(const ModelShape& s, const Coeff& c) {
  ADiffOp p{s, {}};
  p.add(std::vector<int>(s.nvars(), 0), c);
  return p;
}

ADiffOp model_laplacian(const ModelShape& s, const CQ& lambda) {
  ADiffOp p = op_constant(s, CQ() - lambda);
  for (int v = 0; v < s.nvars(); ++v) {
    std::vector<int> i(s.nvars(), 0);
    i[v] = 2;
    p.add(i, Coeff::constant(CQ(1), s.nvars()));
  }
  return p;
}

ADiffOp operator+(const ADiffOp& a, const ADiffOp& b) {
  ADiffOp r = a;
  for (const auto& [i, c] : b.terms) r.add(i, c);
  return r;
}

ADiffOp compose(const ADiffOp& p, const ADiffOp& q) {
  ADiffOp r{p.shape, {}};
  for (const auto& [i, c] : p.terms) {
    ADiffOp cur = q;
    for (int v = p.shape.nvars() - 1; v >= 0; --v)
      for (int n = 0; n < i[v]; ++n) cur = apply_field(v, cur);
    r = r + times(c, cur);
  }
  return r;
}

ADiffOp formal_adjoint(const ADiffOp& p) {
  const ModelShape& s = p.shape;
  int nv = s.nvars();
  // (x^e D_x)^* = x^e D_x - i e x^{e-1}
  ADiffOp vx = op_field(s, 0) + op_multiply(s, Coeff::monomial(CQ(0, Q(-s.weight(0))), s.weight(0) - 1,
                                                                std::vector<int>(nv - 1, 0)));
  ADiffOp r{s, {}};
  for (const auto& [i, c] : p.terms) {
    ADiffOp cur = op_multiply(s, c.conjugate());
    for (int n = 0; n < i[0]; ++n) cur = compose(vx, cur);
    for (int v = 1; v < nv; ++v)
      for (int n = 0; n < i[v]; ++n) cur = apply_field(v, cur);
    r = r + cur;
  }
  return r;
}

// ---------------- symbols ----------------

SymbolPoly symbol_degree(const ADiffOp& p, int m) {
  SymbolPoly s;
  for (const auto& [i, c] : p.terms) {
    int d = 0;
    for (int e : i) d += e;
    if (d == m) s[i] = c;
  }
  return s;
}

SymbolPoly principal_symbol(const ADiffOp& p) { return symbol_degree(p, p.order()); }

SymbolPoly multiply(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly r;
  for (const auto& [i, c] : a)
    for (const auto& [j, d] : b) {
      auto k = i;
      for (size_t n = 0; n < k.size(); ++n) k[n] += j[n];
      Coeff s = r[k] + c * d;
      if (s.zero())
        r.erase(k);
      else
        r[k] = s;
    }
  return r;
}

namespace {

std::string coeff_string(const Coeff& c) {
  std::string s;
  for (const auto& [k, a] : c.terms) {
    std::string t = to_string(a);
    if (k.xpow) t += "*x^" + std::to_string(k.xpow);
    if (k.pipow) t += "*pi^" + std::to_string(k.pipow);
    bool osc = false;
    for (int f : k.freq) osc |= f != 0;
    if (osc) {
      t += "*e(";
      for (size_t i = 0; i < k.freq.size(); ++i) t += (i ? "," : "") + std::to_string(k.freq[i]);
      t += ")";
    }
    s += (s.empty() ? "" : " + ") + t;
  }
  return s.empty() ? "0" : s;
}

std::string fiber_var(const ModelShape& s, int v) {
  if (v == 0) return "tau";
  if (v <= s.b) return idx("eta", v);
  if (v <= s.b + s.f1) return idx("zeta", v - s.b);
  return idx("theta", v - s.b - s.f1);
}

}  // namespace

std::string to_string(const SymbolPoly& sp, const ModelShape& shape) {
  std::string s;
  for (const auto& [i, c] : sp) {
    std::string mono;
    for (size_t v = 0; v < i.size(); ++v)
      if (i[v]) mono += (mono.empty() ? "" : "*") + fiber_var(shape, int(v)) + (i[v] > 1 ? "^" + std::to_string(i[v]) : "");
    std::string cs = coeff_string(c);
    std::string term = cs == "1" && !mono.empty() ? mono : (mono.empty() ? cs : "(" + cs + ")*" + mono);
    s += (s.empty() ? "" : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

// ---------------- normal families ----------------

std::vector<std::vector<int>> fiber_modes(int f2, int n) {
  std::vector<std::vector<int>> modes{{}};
  for (int d = 0; d < f2; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& m : modes)
      for (int k = -n; k <= n; ++k) {
        auto e = m;
        e.push_back(k);
        next.push_back(e);
      }
    modes = next;
  }
  return modes;
}

bool w_independent(const ADiffOp& p) {
  int first_w = p.shape.b + p.shape.f1;
  for (const auto& [i, c] : p.terms)
    if (c.at_x0().w_degree(first_w) > 0) return false;
  return true;
}

namespace {

// the coefficient at x = 0 and base point, split by w-frequency
std::map<std::vector<int>, std::complex<double>> w_series(const Coeff& c, const ModelShape& s, const BasePoint& pt) {
  std::map<std::vector<int>, std::complex<double>> out;
  int nyz = s.b + s.f1;
  for (const auto& [k, a] : c.terms) {
    if (k.xpow != 0) continue;
    double phase = 0;
    for (int i = 0; i < nyz; ++i) phase += k.freq[i] * (i < int(pt.yz.size()) ? pt.yz[i] : 0.0);
    std::complex<double> v = cd(a) * std::pow(kPi, k.pipow) * std::polar(1.0, 2 * kPi * phase);
    out[std::vector<int>(k.freq.begin() + nyz, k.freq.end())] += v;
  }
  return out;
}

struct Prepared {
  ModelShape s;
  // per term: multi-index and coefficient split by w-frequency
  std::vector<std::pair<std::vector<int>, std::map<std::vector<int>, std::complex<double>>>> terms;
};

Prepared prepare(const ADiffOp& p, const BasePoint& pt) {
  Prepared r{p.shape, {}};
  for (const auto& [i, c] : p.terms) {
    auto ws = w_series(c, p.shape, pt);
    if (!ws.empty()) r.terms.push_back({i, ws});
  }
  return r;
}

std::complex<double> mu_part(const std::vector<int>& i, const std::vector<double>& mu, const std::vector<int>& kp,
                             int nmu) {
  double v = 1;
  for (int j = 0; j < nmu; ++j)
    if (i[j]) v *= std::pow(mu[j], i[j]);
  for (size_t j = 0; j < kp.size(); ++j)
    if (i[nmu + j]) v *= std::pow(2 * kPi * kp[j], i[nmu + j]);
  return v;
}

Eigen::MatrixXcd assemble(const Prepared& pr, const std::vector<double>& mu,
                          const std::vector<std::vector<int>>& modes) {
  int nmu = 1 + pr.s.b + pr.s.f1;
  std::map<std::vector<int>, int> pos;
  for (size_t i = 0; i < modes.size(); ++i) pos[modes[i]] = int(i);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(modes.size(), modes.size());
  for (size_t col = 0; col < modes.size(); ++col) {
    const auto& kp = modes[col];
    for (const auto& [i, ws] : pr.terms) {
      std::complex<double> base = mu_part(i, mu, kp, nmu);
      for (const auto& [f, a] : ws) {
        auto k = kp;
        for (size_t j = 0; j < k.size(); ++j) k[j] += f[j];
        auto it = pos.find(k);
        if (it != pos.end()) m(it->second, col) += a * base;
      }
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXcd normal_family_matrix(const ADiffOp& p, const BasePoint& pt, const std::vector<double>& mu, int n) {
  const ModelShape& s = p.shape;
  if (int(mu.size()) != 1 + s.b + s.f1) throw std::invalid_argument("mu has the wrong dimension");
  int first_w = s.b + s.f1;
  for (const auto& [i, c] : p.terms)
    if (c.at_x0().w_degree(first_w) > n)
      throw std::invalid_argument("truncation " + std::to_string(n) + " below the trig degree of a coefficient");
  return assemble(prepare(p, pt), mu, fiber_modes(s.f2, n));
}

std::vector<std::vector<double>> Grid::points(int dim) const {
  int per = int(std::lround(2 * radius / step)) + 1;
  std::vector<std::vector<double>> pts;
  long total = 1;
  for (int d = 0; d < dim; ++d) total *= per;
  pts.reserve(total);
  for (long n = 0; n < total; ++n) {
    std::vector<double> p(dim);
    long r = n;
    for (int d = dim - 1; d >= 0; --d) {
      p[d] = -radius + step * double(r % per);
      r /= per;
    }
    pts.push_back(p);
  }
  return pts;
}

namespace {

struct PointMin {
  double value = INFINITY;
  int mode = -1;
};

PointMin point_min(const Prepared& pr, const std::vector<double>& mu, const std::vector<std::vector<int>>& modes,
                   bool diagonal) {
  PointMin r;
  if (diagonal) {
    int nmu = 1 + pr.s.b + pr.s.f1;
    for (size_t m = 0; m < modes.size(); ++m) {
      std::complex<double> e = 0;
      for (const auto& [i, ws] : pr.terms) e += ws.begin()->second * mu_part(i, mu, modes[m], nmu);
      if (std::abs(e) < r.value) {
        r.value = std::abs(e);
        r.mode = int(m);
      }
    }
    return r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(assemble(pr, mu, modes));
  r.value = svd.singularValues().minCoeff();
  return r;
}

GridMin sweep(const ADiffOp& p, const BasePoint& pt, const Grid& g, int n, bool parallel) {
  Prepared pr = prepare(p, pt);
  auto modes = fiber_modes(p.shape.f2, n);
  auto pts = g.points(1 + p.shape.b + p.shape.f1);
  bool diag = w_independent(p);
  std::vector<PointMin> per(pts.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(pts.size()); ++i) per[i] = point_min(pr, pts[i], modes, diag);
  } else {
    for (size_t i = 0; i < pts.size(); ++i) per[i] = point_min(pr, pts[i], modes, diag);
  }
  size_t best = 0;
  for (size_t i = 1; i < per.size(); ++i)
    if (per[i].value < per[best].value) best = i;
  GridMin r{per[best].value, pts[best], {}};
  if (per[best].mode >= 0) r.mode = modes[per[best].mode];
  return r;
}

}  // namespace

GridMin sweep_serial(const ADiffOp& p, const BasePoint& pt, const Grid& g, int n) { return sweep(p, pt, g, n, false); }
GridMin sweep_parallel(const ADiffOp& p, const BasePoint& pt, const Grid& g, int n) { return sweep(p, pt, g, n, true); }

namespace {

// sum of squares of all fiber variables with positive rational constant weights
bool exact_positive(const SymbolPoly& s, const ModelShape& shape) {
  if (int(s.size()) != shape.nvars()) return false;
  for (const auto& [i, c] : s) {
    int nz = 0;
    for (int e : i) nz += e == 2 ? 1 : (e == 0 ? 0 : 100);
    if (nz != 1 || c.terms.size() != 1) return false;
    const auto& [k, a] = *c.terms.begin();
    bool constant = k.xpow == 0 && k.pipow == 0;
    for (int f : k.freq) constant &= f == 0;
    if (!constant || a.im != 0 || a.re <= 0) return false;
  }
  return true;
}

bool sampled_elliptic(const SymbolPoly& s, const ModelShape& shape, const BasePoint& pt) {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  int nv = shape.nvars(), nw = shape.f2;
  for (int n = 0; n < 400; ++n) {
    std::vector<double> xi(nv);
    double norm = 0;
    for (auto& v : xi) {
      v = g(rng);
      norm += v * v;
    }
    for (auto& v : xi) v /= std::sqrt(norm);
    std::vector<double> w(nw);
    for (auto& v : w) v = std::uniform_real_distribution<double>(0, 1)(rng);
    std::complex<double> val = 0;
    for (const auto& [i, c] : s) {
      double mono = 1;
      for (int v = 0; v < nv; ++v) mono *= std::pow(xi[v], i[v]);
      for (const auto& [k, a] : c.terms) {
        if (k.xpow) continue;
        double phase = 0;
        for (size_t j = 0; j < k.freq.size(); ++j) {
          double coord = j < pt.yz.size() ? pt.yz[j] : w[j - pt.yz.size()];
          phase += k.freq[j] * coord;
        }
        val += cd(a) * std::pow(kPi, k.pipow) * std::polar(1.0, 2 * kPi * phase) * mono;
      }
    }
    if (std::abs(val) < 1e-9) return false;
  }
  return true;
}

}  // namespace

Certificate fully_elliptic_check(const ADiffOp& p, const Grid& g, int n, std::optional<double> tail_bound,
                                 const std::vector<BasePoint>& base) {
  std::vector<BasePoint> pts = base;
  if (pts.empty()) pts.push_back({std::vector<double>(p.shape.b + p.shape.f1, 0.0)});
  Certificate c;
  SymbolPoly sigma = principal_symbol(p);
  c.symbol_elliptic = exact_positive(sigma, p.shape);
  if (!c.symbol_elliptic) {
    c.symbol_elliptic = true;
    for (const auto& pt : pts) c.symbol_elliptic &= sampled_elliptic(sigma, p.shape, pt);
  }
  c.min_singular = INFINITY;
  for (const auto& pt : pts) {
    GridMin m = sweep_parallel(p, pt, g, n);
    if (m.value < c.min_singular) {
      c.min_singular = m.value;
      c.argmin_mu = m.mu;
      c.argmin_mode = m.mode;
    }
  }
  bool tail_ok = true;
  if (tail_bound) {
    c.tail = "analytic bound " + std::to_string(*tail_bound) + " outside the grid";
    tail_ok = *tail_bound > 0;
  } else {
    c.tail = "grid-only";
  }
  c.fully_elliptic = c.symbol_elliptic && c.min_singular > 1e-12 && tail_ok;
  return c;
}

ResolventReport resolvent_model_check(const ModelShape& s, const CQ& lambda, int n, const Grid& g) {
  return resolvent_model_check(s, Coeff::constant(lambda, s.nvars()), n, g);
}

ResolventReport resolvent_model_check(const ModelShape& s, const Coeff& lambda, int n, const Grid& g) {
  ADiffOp p = model_laplacian(s);
  p = p + op_multiply(s, lambda.scaled(CQ(-1)));
  std::complex<double> lam = 0;
  for (const auto& [k, a] : lambda.terms) lam += cd(a) * std::pow(kPi, k.pipow);
  ResolventReport r;
  r.bound = lam.real() >= 0 ? std::abs(lam.imag()) : std::abs(lam);
  GridMin m = sweep_parallel(p, {std::vector<double>(s.b + s.f1, 0.0)}, g, n);
  r.margin = m.value;
  bool on_spectrum = lam.imag() == 0 && lam.real() >= 0;
  r.ok = !on_spectrum && r.margin >= r.bound - 1e-12;
  if (!r.ok) {
    r.witness_mu = m.mu;
    r.witness_mode = m.mode;
  }
  return r;
}

// ---------------- multiplicativity ----------------

MultiplicativityReport multiplicativity_check(const ADiffOp& p, const ADiffOp& q, int samples, std::mt19937& rng,
                                              int n) {
  MultiplicativityReport r;
  ADiffOp pq = compose(p, q);
  r.symbol_ok = symbol_degree(pq, p.order() + q.order()) == multiply(principal_symbol(p), principal_symbol(q));
  const ModelShape& s = p.shape;
  int first_w = s.b + s.f1, deg = 0;
  for (const ADiffOp* o : {&p, &q, static_cast<const ADiffOp*>(&pq)})
    for (const auto& [i, c] : o->terms) deg = std::max(deg, c.at_x0().w_degree(first_w));
  int inner = std::max(n, deg), outer = inner + deg;
  auto small_modes = fiber_modes(s.f2, inner), big_modes = fiber_modes(s.f2, outer);
  std::vector<int> sel;
  for (const auto& m : small_modes) sel.push_back(int(std::find(big_modes.begin(), big_modes.end(), m) - big_modes.begin()));
  std::uniform_real_distribution<double> u(-3, 3);
  r.normal_ok = true;
  for (int k = 0; k < samples; ++k) {
    BasePoint pt{std::vector<double>(s.b + s.f1)};
    for (auto& v : pt.yz) v = u(rng);
    std::vector<double> mu(1 + s.b + s.f1);
    for (auto& v : mu) v = u(rng);
    Eigen::MatrixXcd prod = normal_family_matrix(p, pt, mu, outer) * normal_family_matrix(q, pt, mu, outer);
    Eigen::MatrixXcd lhs = normal_family_matrix(pq, pt, mu, inner);
    double scale = 1;
    for (size_t i = 0; i < sel.size(); ++i)
      for (size_t j = 0; j < sel.size(); ++j) scale = std::max(scale, std::abs(prod(sel[i], sel[j])));
    for (size_t i = 0; i < sel.size(); ++i)
      for (size_t j = 0; j < sel.size(); ++j)
        r.normal_err = std::max(r.normal_err, std::abs(lhs(i, j) - prod(sel[i], sel[j])) / scale);
  }
  r.normal_ok = r.normal_err <= 1e-10;
  return r;
}

// ---------------- lifted kernels ----------------

KernelReport kernel_coeff_check(const Tower& t, const ADiffOp& p) {
  ModelShape s = model_shape(t);
  KernelReport rep;
  // identity kernel: x' = x (1 - x^{a1+a2} T), y' = y - x^{a1+a2} Y, z' = z - x^{a2} Z
  {
    std::vector<std::pair<std::string, std::string>> pairs{{"xp", "𝒯"}};
    for (int i = 1; i <= s.b; ++i) pairs.push_back({idx("yp", i), idx("𝒴", i)});
    for (int j = 1; j <= s.f1; ++j) pairs.push_back({idx("zp", j), idx("𝒵", j)});
    for (const auto& [old, fresh] : pairs) {
      Poly e = Poly::var(old);
      for (Stage st : {Stage::X, Stage::Y, Stage::Z})
        for (const auto& [g, by] : stage_change(s, st).gone) e = e.subst(g, by);
      Poly d = e.diff(fresh);
      if (d.terms.size() != 1) return rep;
      const Monomial& m = d.terms.begin()->first;
      rep.density_exponent += m.count("x") ? m.at("x") : 0;
    }
  }
  // lifted basis at ff_z, as rows over the kernel variables (calT, calY, calZ, w)
  std::vector<std::string> targets{"𝒯"};
  for (int i = 1; i <= s.b; ++i) targets.push_back(idx("𝒴", i));
  for (int j = 1; j <= s.f1; ++j) targets.push_back(idx("𝒵", j));
  for (int k = 1; k <= s.f2; ++k) targets.push_back(idx("w", k));
  std::vector<std::vector<Q>> lifted;
  bool clean_lift = true;
  for (auto [d, i] : basis_dirs(s, true)) {
    auto ff = at_front_face(lifted_basis(t, d, i));
    std::vector<Q> row(targets.size());
    if (!ff) {
      clean_lift = false;
    } else {
      for (const auto& [u, poly] : *ff) {
        auto val = on_diagonal(poly);
        auto it = std::find(targets.begin(), targets.end(), u);
        if (!val || it == targets.end() || poly.terms.size() > 1 ||
            (poly.terms.size() == 1 && !poly.terms.begin()->first.empty())) {
          clean_lift = false;
          continue;
        }
        row[it - targets.begin()] = *val;
      }
    }
    lifted.push_back(row);
  }
  // expand the lifted monomials: product of linear forms over the kernel variables
  std::map<std::vector<int>, Coeff> b;
  for (const auto& [i, c] : p.terms) {
    std::map<std::vector<int>, Q> expansion{{std::vector<int>(targets.size(), 0), Q(1)}};
    for (size_t v = 0; v < i.size(); ++v)
      for (int n = 0; n < i[v]; ++n) {
        std::map<std::vector<int>, Q> next;
        for (const auto& [e, q] : expansion)
          for (size_t u = 0; u < targets.size(); ++u)
            if (lifted[v][u] != 0) {
              auto f = e;
              ++f[u];
              next[f] += q * lifted[v][u];
            }
        expansion = next;
      }
    Coeff a0 = c.at_x0();
    for (const auto& [e, q] : expansion)
      if (q != 0) {
        Coeff sum = b[e] + a0.scaled(CQ(q));
        if (sum.zero())
          b.erase(e);
        else
          b[e] = sum;
      }
  }
  rep.ok = clean_lift;
  std::set<std::vector<int>> keys;
  for (const auto& [i, c] : p.terms) keys.insert(i);
  for (const auto& [i, c] : b) keys.insert(i);
  for (const auto& i : keys) {
    Coeff a0 = p.terms.count(i) ? p.terms.at(i).at_x0() : Coeff{};
    Coeff bi = b.count(i) ? b.at(i) : Coeff{};
    rep.coeffs.push_back({i, a0, bi});
    rep.ok &= a0 == bi;
  }
  long gamma = (1 + s.a1 + s.a2) + long(s.b) * (s.a1 + s.a2) + long(s.f1) * s.a2;
  rep.ok &= rep.density_exponent == gamma;
  return rep;
}

ADiffOp random_op(const ModelShape& s, int max_order, std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(1, 4), var(0, s.nvars() - 1), ord(0, max_order), num(-4, 4),
      den(1, 3), xp(0, 2), fr(-1, 1), coin(0, 3);
  ADiffOp p{s, {}};
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::vector<int> i(s.nvars(), 0);
    int o = ord(rng);
    for (int k = 0; k < o; ++k) ++i[var(rng)];
    int m = 1 + coin(rng) % 2;
    Coeff c;
    for (int k = 0; k < m; ++k) {
      std::vector<int> f(s.nvars() - 1, 0);
      for (auto& e : f)
        if (coin(rng) == 0) e = fr(rng);
      CQ a(qq(num(rng), den(rng)), coin(rng) == 0 ? qq(num(rng), den(rng)) : Q(0));
      c = c + Coeff::monomial(a, xp(rng), f);
    }
    p.add(i, c);
  }
  return p;
}

}  // namespace acalc
