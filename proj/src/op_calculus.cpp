#include "acalc/op_calculus.hpp"

#include <functional>

namespace acalc {

const std::vector<std::string> kDoubleFaces{"rf", "lf", "ff_zx", "ff_zy", "ff_z"};

bool operator==(const Order& a, const Order& b) {
  return a.neg_inf == b.neg_inf && (a.neg_inf || a.v == b.v);
}

bool operator<=(const Order& a, const Order& b) {
  if (a.neg_inf) return true;
  if (b.neg_inf) return false;
  return a.v <= b.v;
}

Order operator+(const Order& a, const Order& b) {
  if (a.neg_inf || b.neg_inf) return Order::minus_infinity();
  return Order(Q(a.v + b.v));
}

std::string to_string(const Order& o) { return o.neg_inf ? "-inf" : to_string(o.v); }

Order parse_order(const std::string& s) {
  if (s == "-inf") return Order::minus_infinity();
  return Order(parse_q(s));
}

bool operator==(const OperatorClass& a, const OperatorClass& b) {
  return a.order == b.order && a.family == b.family;
}

OperatorClass small(const Order& m, const ExtQ& c) {
  OperatorClass p{m, {}};
  for (const auto& f : kDoubleFaces) p.family[f] = IndexSet{};
  if (!c.inf) p.family["ff_z"] = IndexSet::single(c.v);
  return p;
}

bool is_small(const OperatorClass& p) {
  for (const auto& f : kDoubleFaces)
    if (f != "ff_z" && !p.family.at(f).empty()) return false;
  return true;
}

bool subclass(const OperatorClass& a, const OperatorClass& b) {
  if (!(a.order <= b.order)) return false;
  for (const auto& f : kDoubleFaces)
    for (const auto& t : a.family.at(f).generators())
      if (!contains(b.family.at(f), t)) return false;
  return true;
}

namespace {

void check_integrable(const IndexSet& s, const std::string& where, std::vector<std::string> faces) {
  ExtQ m = inf_re(s);
  if (!(ExtQ(0) < m))
    throw NonIntegrable("not integrable at " + where + ": inf Re = " + to_string(m), std::move(faces));
}

IndexSet union_all(std::initializer_list<IndexSet> sets) {
  IndexSet acc;
  for (const auto& s : sets) acc = ext_union(acc, s);
  return acc;
}

}  // namespace

Calculus::Calculus(const Tower& t) : t_(t) {
  if (t.k != 2) throw TowerError("the full calculus is implemented for k = 2");
  tr_ = triple_space(t);
  w_ = triple_weights(t, tr_);
  d_ = double_weights(t);
  auto g = gamma(t);
  gy_ = g[0];
  gz_ = g[1];
}

OperatorClass Calculus::compose(const OperatorClass& p, const OperatorClass& q) const {
  check_integrable(add(p.family.at("rf"), q.family.at("lf")), "H_2 (rf of the left factor against lf of the right)",
                   {"H_2"});
  IndexFamily a = pullback_family(tr_.projections[2], p.family);
  IndexFamily b = pullback_family(tr_.projections[0], q.family);
  IndexFamily s;
  for (const auto& [f, g] : a) s[f] = add(g, b.at(f));
  s = shift_family(s, w_.W_a);
  auto push = pushforward_family(tr_.projections[1], s);
  if (!push.violations.empty()) {
    std::string names;
    for (const auto& v : push.violations) names += (names.empty() ? "" : ", ") + v;
    throw NonIntegrable("not integrable at " + names, push.violations);
  }
  return {p.order + q.order, shift_family(push.family, scale_weights(d_.w_a, -1))};
}

IndexSet Calculus::ffz_closed_form(const OperatorClass& p, const OperatorClass& q) const {
  check_integrable(add(p.family.at("rf"), q.family.at("lf")), "H_2 (rf of the left factor against lf of the right)",
                   {"H_2"});
  auto sum = [&](const std::string& f, const std::string& g) { return add(p.family.at(f), q.family.at(g)); };
  return union_all({sum("ff_z", "ff_z"), shift(sum("lf", "rf"), ExtQ(gz_)), shift(sum("ff_zx", "ff_zx"), ExtQ(gz_)),
                    shift(sum("ff_zy", "ff_zy"), ExtQ(gz_ - gy_))});
}

IndexSet act(const OperatorClass& p, const IndexSet& i) {
  check_integrable(add(p.family.at("rf"), i), "rf against the argument", {"rf"});
  return union_all({p.family.at("lf"), add(p.family.at("ff_zx"), i), add(p.family.at("ff_zy"), i),
                    add(p.family.at("ff_z"), i)});
}

OperatorClass adjoint(const OperatorClass& p) {
  OperatorClass r = p;
  std::swap(r.family.at("rf"), r.family.at("lf"));
  return r;
}

Conjugated conjugate_x(const OperatorClass& p, const Q& alpha) {
  if (is_small(p) || alpha == 0) return {p, false};
  OperatorClass r = p;
  r.family["rf"] = shift(p.family.at("rf"), ExtQ(alpha));
  r.family["lf"] = shift(p.family.at("lf"), ExtQ(Q(-alpha)));
  return {r, true};
}

bool compact(const Q& p, const Q& k) { return p > 0 && k < 0; }

bool hilbert_schmidt(const Q& p, const Q& k, const Tower& t) {
  Q gz(gamma(t).back());
  return p > (gz - 1) / 2 && k < qq(-t.dim_m(), 2);
}

OrderBookkeeping composition_orders(const Q& m, const Q& mp, const Tower& t) {
  Q n(t.dim_m());
  Q d3 = 3 * n, d2 = 2 * n;
  OrderBookkeeping o;
  o.pulled_p = m - (d3 - d2) / 4;
  o.pulled_q = mp - (d3 - d2) / 4;
  o.pushed = o.pulled_p + o.pulled_q + d2 / 4;
  return o;
}

namespace {

OperatorClass power(const Calculus& c, const OperatorClass& r, int n) {
  OperatorClass acc = r;
  for (int i = 1; i < n; ++i) acc = c.compose(acc, r);
  return acc;
}

ExtQ ffz_floor(const OperatorClass& p) { return inf_re(p.family.at("ff_z")); }

std::string class_name(const Order& m, const ExtQ& c) {
  return "small(" + to_string(m) + ", " + to_string(c) + ")";
}

}  // namespace

OperatorClass apply_rule(const Calculus& c, const std::string& rule, const std::vector<OperatorClass>& in) {
  if (rule == "symbol map exact sequence") {
    // P Q0 - I: principal symbols cancel, one order lower
    OperatorClass pq = c.compose(in.at(0), in.at(1));
    return small(pq.order + Order(-1), ffz_floor(pq));
  }
  if (rule == "asymptotic completeness") return small(Order::minus_infinity(), ffz_floor(in.at(0)));
  if (rule == "normal operator exact sequence") {
    // the normal operator of the remainder is removed, so it vanishes at ff_z
    ExtQ f = ffz_floor(in.at(0));
    return small(Order::minus_infinity(), f + ExtQ(1));
  }
  if (rule == "Neumann series") return small(Order::minus_infinity(), ExtQ::infinity());
  if (rule == "left and right parametrix") {
    // Q_l - Q_r = Q_l R_f - R_f' Q_r
    OperatorClass a = c.compose(in.at(0), in.at(2)), b = c.compose(in.at(2), in.at(1));
    if (!(a == b)) throw std::logic_error("patching terms differ");
    return a;
  }
  throw std::invalid_argument("unknown rule: " + rule);
}

bool Ledger::verified() const {
  for (const auto& s : steps)
    for (const auto& k : s.checks)
      if (!k.holds) return false;
  return !steps.empty();
}

Ledger parametrix_ledger(const Calculus& c, const Q& m) {
  Ledger l;
  l.m = m;
  auto push = [&](std::string desc, std::vector<OperatorClass> in, std::string rule) -> LedgerStep& {
    LedgerStep s{std::move(desc), std::move(in), std::move(rule), {}, {}};
    s.output = apply_rule(c, s.rule, s.inputs);
    l.steps.push_back(std::move(s));
    return l.steps.back();
  };
  auto claim = [&](LedgerStep& s, std::string text, bool ok) { s.checks.push_back({std::move(text), ok}); };

  OperatorClass p = small(Order(m), 0), q0 = small(Order(Q(-m)), 0);
  auto& s1 = push("symbol inversion: P Q0 = I + R1", {p, q0}, "symbol map exact sequence");
  OperatorClass r1 = s1.output;
  claim(s1, "P Q0 in " + class_name(Order(0), 0), subclass(c.compose(p, q0), small(Order(0), 0)));
  claim(s1, "R1 in " + class_name(Order(-1), 0), subclass(r1, small(Order(-1), 0)));
  for (int n = 2; n <= 5; ++n)
    claim(s1, "R1^" + std::to_string(n) + " in " + class_name(Order(-n), 0),
          subclass(power(c, r1, n), small(Order(-n), 0)));

  auto& s2 = push("Neumann sum of the symbol sequence: R_s", {r1}, "asymptotic completeness");
  OperatorClass rs = s2.output;
  for (int j = 1; j <= 5; ++j) {
    Order mj = Order(Q(-m)) + Order(-j);
    claim(s2, "Q0 R1^" + std::to_string(j) + " in " + class_name(mj, 0),
          subclass(c.compose(q0, power(c, r1, j)), small(mj, 0)));
  }
  claim(s2, "R_s in " + class_name(Order::minus_infinity(), 0), subclass(rs, small(Order::minus_infinity(), 0)));

  auto& s3 = push("normal-operator correction: R_{f,1}", {rs}, "normal operator exact sequence");
  OperatorClass rf1 = s3.output;
  for (int n = 1; n <= 5; ++n)
    claim(s3, "R_{f,1}^" + std::to_string(n) + " in " + class_name(Order::minus_infinity(), n),
          subclass(power(c, rf1, n), small(Order::minus_infinity(), n)));

  auto& s4 = push("second Neumann sum: R_f", {rf1}, "Neumann series");
  OperatorClass rf = s4.output, res = small(Order::minus_infinity(), ExtQ::infinity());
  claim(s4, "R_f in " + class_name(Order::minus_infinity(), ExtQ::infinity()), subclass(rf, res));
  claim(s4, "R_{f,1} R_f residual", subclass(c.compose(rf1, rf), res));
  claim(s4, "R_f R_{f,1} residual", subclass(c.compose(rf, rf1), res));

  OperatorClass ql = small(Order(Q(-m)), 0), qr = small(Order(Q(-m)), 0);
  auto& s5 = push("left and right patching: Q_l - Q_r", {ql, qr, rf}, "left and right parametrix");
  claim(s5, "Q_l R_f residual", subclass(c.compose(ql, rf), res));
  claim(s5, "R_f Q_r residual", subclass(c.compose(rf, qr), res));
  claim(s5, "Q_l - Q_r residual", subclass(s5.output, res));
  return l;
}

bool replay_ledger(const Calculus& c, const Ledger& l) {
  for (const auto& s : l.steps)
    if (!(apply_rule(c, s.rule, s.inputs) == s.output)) return false;
  return true;
}

}  // namespace acalc
