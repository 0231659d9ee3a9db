#include "acalc/serialize.hpp"

#include <fstream>
#include <regex>

namespace acalc {

json to_json(const Q& q) { return to_string(q); }
json to_json(const ExtQ& e) { return to_string(e); }

Q q_from_json(const json& j) {
  if (j.is_number_integer()) return Q(j.get<long>());
  if (!j.is_string()) throw FormatError("expected a rational string, got " + j.dump());
  try {
    return parse_q(j.get<std::string>());
  } catch (const std::exception&) {
    throw FormatError("bad rational " + j.dump());
  }
}

ExtQ extq_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtQ::infinity();
  return ExtQ(q_from_json(j));
}

json to_json(const IndexSet& g) {
  json a = json::array();
  for (const auto& t : g.generators()) a.push_back({to_string(t.z.re), to_string(t.z.im), t.p});
  return a;
}

IndexSet index_set_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("index set must be an array");
  std::vector<IndexTerm> t;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[2].is_number_unsigned())
      throw FormatError("index term must be [re, im, p], got " + e.dump());
    t.push_back({CQ(q_from_json(e[0]), q_from_json(e[1])), e[2].get<unsigned>()});
  }
  return IndexSet::from_generators(t);
}

json to_json(const IndexFamily& f) {
  json o = json::object();
  for (const auto& [k, v] : f) o[k] = to_json(v);
  return o;
}

IndexFamily family_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("index family must be an object");
  IndexFamily f;
  for (const auto& [k, v] : j.items()) f[k] = index_set_from_json(v);
  return f;
}

json to_json(const WeightVector& w) {
  json o = json::object();
  for (const auto& [k, v] : w) o[k] = to_json(v);
  return o;
}

json to_json(const Tower& t) { return {{"k", t.k}, {"a", t.a}, {"b", t.b}, {"f", t.f}}; }

Tower tower_from_json(const json& j) {
  try {
    Tower t = make_tower(j.at("a").get<std::vector<int>>(), j.at("b").get<int>(), j.at("f").get<std::vector<int>>());
    if (j.contains("k") && j["k"].get<int>() != t.k) throw TowerError("k does not match the length of a");
    return t;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad tower: ") + e.what());
  }
}

json to_json(const BMap& f) {
  return {{"domain", f.domain}, {"codomain", f.codomain}, {"dom_faces", f.dom_faces},
          {"cod_faces", f.cod_faces}, {"exps", f.exps}};
}

json to_json(const PSub& p) { return {{"faces", p.faces}, {"interior", p.interior}, {"order", p.order}}; }

PSub psub_from_json(const json& j) {
  PSub p;
  p.faces = j.at("faces").get<std::set<std::string>>();
  p.interior = j.value("interior", std::set<std::string>{});
  p.order = j.value("order", 0);
  return p;
}

json to_json(const BlowupSeq& s) {
  json steps = json::array();
  for (const auto& st : s.steps) steps.push_back({{"name", st.name}, {"center", to_json(st.center)}, {"order", st.order}});
  return {{"base", {{"faces", s.base.layout->base_faces}, {"k", s.base.layout->k}}}, {"steps", steps}};
}

json to_json(const std::vector<RewriteOp>& script) {
  json a = json::array();
  for (const auto& op : script) a.push_back({{"rule", op.rule}, {"pos", op.pos}});
  return a;
}

std::vector<RewriteOp> script_from_json(const json& j) {
  std::vector<RewriteOp> s;
  for (const auto& e : j) s.push_back({e.at("rule").get<int>(), e.at("pos").get<size_t>()});
  return s;
}

json to_json(const OperatorClass& p) {
  return {{"order", to_string(p.order)}, {"family", to_json(p.family)}};
}

OperatorClass class_from_json(const json& j) {
  OperatorClass p;
  try {
    p.order = parse_order(j.at("order").is_string() ? j["order"].get<std::string>() : std::to_string(j["order"].get<long>()));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad operator class: ") + e.what());
  }
  p.family = family_from_json(j.at("family"));
  for (const auto& f : kDoubleFaces)
    if (!p.family.count(f)) p.family[f] = IndexSet{};
  for (const auto& [k, v] : p.family)
    if (std::find(kDoubleFaces.begin(), kDoubleFaces.end(), k) == kDoubleFaces.end())
      throw FormatError("unknown face " + k);
  return p;
}

json to_json(const Ledger& l) {
  json steps = json::array();
  for (const auto& s : l.steps) {
    json in = json::array(), checks = json::array();
    for (const auto& c : s.inputs) in.push_back(to_json(c));
    for (const auto& c : s.checks) checks.push_back({{"claim", c.claim}, {"holds", c.holds}});
    steps.push_back({{"description", s.description}, {"rule", s.rule}, {"inputs", in}, {"output", to_json(s.output)},
                     {"checks", checks}});
  }
  return {{"m", to_string(l.m)}, {"verified", l.verified()}, {"steps", steps}};
}

json to_json(const Coeff& c) {
  json a = json::array();
  for (const auto& [k, v] : c.terms)
    a.push_back({{"x", k.xpow}, {"pi", k.pipow}, {"freq", k.freq}, {"c", {to_string(v.re), to_string(v.im)}}});
  return {{"terms", a}};
}

namespace {

CQ cq_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw FormatError("complex coefficient must be [re, im]");
    return {q_from_json(j[0]), q_from_json(j[1])};
  }
  return CQ(q_from_json(j));
}

std::vector<int> int_list(const json& j, const char* key, size_t n) {
  std::vector<int> v = j.value(key, std::vector<int>(n, 0));
  if (v.size() != n) throw FormatError(std::string(key) + " has length " + std::to_string(v.size()) +
                                       ", expected " + std::to_string(n));
  return v;
}

}  // namespace

Coeff coeff_from_json(const json& j, int nvars) {
  Coeff c;
  size_t nf = nvars - 1;
  if (j.is_string() || j.is_number()) return Coeff::constant(CQ(q_from_json(j)), nvars);
  if (j.contains("terms")) {
    for (const auto& t : j["terms"])
      c = c + Coeff::monomial(cq_from_json(t.at("c")), t.value("x", 0), int_list(t, "freq", nf), t.value("pi", 0));
    return c;
  }
  Coeff xp, trig;
  const json xs = j.value("x_poly", json::array({"1"}));
  for (size_t n = 0; n < xs.size(); ++n) xp = xp + Coeff::monomial(cq_from_json(xs[n]), int(n), std::vector<int>(nf, 0));
  if (!j.contains("trig")) trig = Coeff::constant(CQ(1), nvars);
  for (const auto& t : j.value("trig", json::array()))
    trig = trig + Coeff::monomial(cq_from_json(t.at("c")), 0, int_list(t, "freq", nf));
  return xp * trig;
}

json to_json(const ADiffOp& p) {
  const ModelShape& s = p.shape;
  json terms = json::array();
  for (const auto& [i, c] : p.terms) {
    auto part = [&](int from, int n) { return std::vector<int>(i.begin() + from, i.begin() + from + n); };
    terms.push_back({{"alpha", i[0]}, {"I", part(1, s.b)}, {"J", part(1 + s.b, s.f1)}, {"K", part(1 + s.b + s.f1, s.f2)},
                     {"coeff", to_json(c)}});
  }
  return {{"terms", terms}};
}

ADiffOp op_from_json(const json& j, const ModelShape& s) {
  ADiffOp p{s, {}};
  const json& terms = j.is_array() ? j : j.at("terms");
  for (const auto& t : terms) {
    std::vector<int> idx{t.value("alpha", 0)};
    for (auto [key, n] : {std::pair{"I", s.b}, {"J", s.f1}, {"K", s.f2}}) {
      auto v = int_list(t, key, n);
      idx.insert(idx.end(), v.begin(), v.end());
    }
    for (int e : idx)
      if (e < 0) throw FormatError("negative derivative order");
    p.add(idx, coeff_from_json(t.at("coeff"), s.nvars()));
  }
  return p;
}

Coeff lambda_from_string(const std::string& s, int nvars) {
  std::smatch m;
  std::vector<int> zero(nvars - 1, 0);
  static const std::regex pi_re(R"(^([-+]?[0-9]+(?:/[0-9]+)?)?\*?pi\^2$)");
  static const std::regex cx_re(R"(^([-+]?[0-9]+(?:/[0-9]+)?)?(?:([-+])([0-9]+(?:/[0-9]+)?)?i)?$)");
  static const std::regex im_re(R"(^([-+]?)([0-9]+(?:/[0-9]+)?)?i$)");
  if (std::regex_match(s, m, pi_re)) {
    Q c = m[1].matched ? parse_q(m[1].str()) : Q(1);
    return Coeff::monomial(CQ(c), 0, zero, 2);
  }
  if (std::regex_match(s, m, im_re)) {
    Q c = m[2].matched ? parse_q(m[2].str()) : Q(1);
    if (m[1].str() == "-") c = -c;
    return Coeff::constant(CQ(Q(0), c), nvars);
  }
  if (!s.empty() && std::regex_match(s, m, cx_re)) {
    Q re = m[1].matched ? parse_q(m[1].str()) : Q(0);
    Q im = 0;
    if (m[2].matched) {
      im = m[3].matched ? parse_q(m[3].str()) : Q(1);
      if (m[2].str() == "-") im = -im;
    }
    return Coeff::constant(CQ(re, im), nvars);
  }
  throw FormatError("cannot parse lambda '" + s + "'");
}

json to_json(const Certificate& c) {
  return {{"symbol_elliptic", c.symbol_elliptic}, {"min_singular_value", c.min_singular}, {"argmin_mu", c.argmin_mu},
          {"argmin_mode", c.argmin_mode}, {"tail", c.tail}, {"fully_elliptic", c.fully_elliptic}};
}

json to_json(const ResolventReport& r) {
  json j{{"ok", r.ok}, {"bound", r.bound}, {"margin", r.margin}};
  if (!r.ok) j["witness"] = {{"mu", r.witness_mu}, {"mode", r.witness_mode}};
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace acalc
