#include "acalc/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "acalc/serialize.hpp"

namespace acalc {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  std::string config, format = "text", output;
  unsigned seed = 1;
  std::string p_path, q_path, i_path, op_path, lambda = "-1", mu, point, space = "double";
  std::string m = "2";
  int n = 8;
  int sweep = 0;
  double radius = 10, step = 0.5;
  bool certify = false;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string list(const std::vector<double>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + ")";
}

std::string list(const std::vector<int>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError("bad number '" + tok + "'");
    }
  }
  return v;
}

Tower load_tower(const Opts& o) {
  if (o.config.empty()) throw UsageError("a tower config is required (-c)");
  return tower_from_json(read_json_file(o.config));
}

std::string weights_line(const WeightVector& w, const std::vector<std::string>& order) {
  std::string s;
  for (const auto& f : order) s += (s.empty() ? "" : ", ") + f + "=" + to_string(weight_at(w, f));
  return s;
}

json exps_json(const BMap& f) {
  json rows = json::object();
  for (size_t g = 0; g < f.dom_faces.size(); ++g) rows[f.dom_faces[g]] = f.exps[g];
  return {{"cod_faces", f.cod_faces}, {"rows", rows}};
}

std::string exps_text(const std::string& name, const BMap& f) {
  std::string s = name + " -> (";
  for (size_t i = 0; i < f.cod_faces.size(); ++i) s += (i ? ", " : "") + f.cod_faces[i];
  s += ")\n";
  for (size_t g = 0; g < f.dom_faces.size(); ++g) s += "  " + f.dom_faces[g] + " " + list(f.exps[g]) + "\n";
  return s;
}

std::string class_text(const OperatorClass& p) {
  std::string s = "order " + to_string(p.order) + "\n";
  for (const auto& f : kDoubleFaces) s += "  " + f + ": " + to_string(p.family.at(f)) + "\n";
  return s;
}

OperatorClass load_class(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string("missing ") + flag);
  return class_from_json(read_json_file(path));
}

struct Result {
  std::string text;
  json js;
  int code = 0;
};

Result cmd_tower_validate(const Opts& o) {
  Tower t = load_tower(o);
  auto g = gamma(t);
  std::string gs;
  for (long v : g) gs += (gs.empty() ? "" : ", ") + std::to_string(v);
  return {"valid tower: k = " + std::to_string(t.k) + ", dim M = " + std::to_string(t.dim_m()) + ", gamma = (" + gs +
              ")\n",
          {{"valid", true}, {"tower", to_json(t)}, {"dim_m", t.dim_m()}, {"gamma", g}}};
}

Result cmd_space_double(const Opts& o) {
  Tower t = load_tower(o);
  auto d = double_space(t);
  Result r;
  r.text = "faces: ";
  for (const auto& f : d.space.bhs()) r.text += f + " ";
  r.text += "\ndiagonal meets: ";
  for (const auto& f : d.space.faces_meeting(d.diag)) r.text += f + " ";
  r.text += "\n" + exps_text("pi_l", d.proj_l) + exps_text("pi_r", d.proj_r);
  r.js = {{"faces", d.space.bhs()}, {"diagonal_meets", d.space.faces_meeting(d.diag)},
          {"pi_l", exps_json(d.proj_l)}, {"pi_r", exps_json(d.proj_r)}};
  return r;
}

Result cmd_space_triple(const Opts& o) {
  Tower t = load_tower(o);
  auto tr = triple_space(t);
  Result r;
  r.text = std::to_string(tr.space.faces.size()) + " faces:";
  for (const auto& f : tr.space.bhs()) r.text += " " + f;
  r.text += "\n";
  json pj = json::array();
  for (int i = 0; i < 3; ++i) {
    r.text += exps_text("pi_" + std::to_string(i + 1), tr.projections[i]);
    pj.push_back(exps_json(tr.projections[i]));
  }
  r.js = {{"faces", tr.space.bhs()}, {"sequence", to_json(tr.sequence)}, {"projections", pj}};
  return r;
}

Result cmd_facemap_verify(const Opts& o) {
  Tower t = load_tower(o);
  auto rep = verify_facemaps(t);
  Result r;
  for (const auto& l : rep.lines) r.text += l + "\n";
  r.text += std::to_string(rep.tables) + " tables, " + std::to_string(rep.mismatches) + " mismatches\n";
  r.js = {{"tables", rep.tables}, {"mismatches", rep.mismatches}, {"lines", rep.lines}};
  r.code = rep.mismatches == 0 ? 0 : 1;
  return r;
}

Result cmd_weights(const Opts& o) {
  Tower t = load_tower(o);
  auto d = double_weights(t);
  auto w = triple_weights(t);
  auto g = gamma(t);
  bool agree = w.W_a == w.W_a_displayed;
  Result r;
  r.text = "gamma_y = " + std::to_string(g[0]) + ", gamma_z = " + std::to_string(g[1]) + "\n";
  r.text += "w_a0:    " + weights_line(d.w_a0, kDoubleFaces) + "\n";
  r.text += "w_a:     " + weights_line(d.w_a, kDoubleFaces) + "\n";
  r.text += "w_tilde: " + weights_line(d.w_tilde, kDoubleFaces) + "\n";
  r.text += "w_a0 from blowups: " + weights_line(d.w_a0_computed, kDoubleFaces) + "\n";
  r.text += "W_a0:    " + weights_line(w.W_a0, w.order) + "\n";
  r.text += "W_a0 from blowups: " + weights_line(w.W_a0_computed, w.order) + "\n";
  r.text += "W_a cross-checked: " + weights_line(w.W_a, w.order) + "\n";
  r.text += "W_a as displayed:  " + weights_line(w.W_a_displayed, w.order) + "\n";
  if (!agree) r.text += "note: displayed W_a differs from the cross-checked W_a (sign of the z-level entries)\n";
  r.js = {{"gamma", g},
          {"w_a0", to_json(d.w_a0)},
          {"w_a", to_json(d.w_a)},
          {"w_tilde", to_json(d.w_tilde)},
          {"w_a0_computed", to_json(d.w_a0_computed)},
          {"W_a0", to_json(w.W_a0)},
          {"W_a0_computed", to_json(w.W_a0_computed)},
          {"W_a", to_json(w.W_a)},
          {"W_a_displayed", to_json(w.W_a_displayed)},
          {"displayed_agrees", agree}};
  return r;
}

IndexSet random_set(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(0, 2), num(-15, 15), den(1, 3), pw(0, 3);
  std::vector<IndexTerm> t;
  int n = count(rng);
  for (int i = 0; i < n; ++i) t.push_back({CQ(qq(num(rng), den(rng))), unsigned(pw(rng))});
  return IndexSet::from_generators(t);
}

Result cmd_compose(const Opts& o) {
  Tower t = load_tower(o);
  Calculus c(t);
  Result r;
  if (o.sweep > 0) {
    std::mt19937 rng(o.seed);
    int agree = 0, skipped = 0;
    for (int n = 0; n < o.sweep; ++n) {
      OperatorClass p, q;
      for (auto* x : {&p, &q})
        for (const auto& f : kDoubleFaces) x->family[f] = random_set(rng);
      try {
        auto k = c.compose(p, q);
        agree += window_equal(k.family.at("ff_z"), c.ffz_closed_form(p, q), 12, 8);
      } catch (const NonIntegrable&) {
        ++skipped;
      }
    }
    int compared = o.sweep - skipped;
    r.text = std::to_string(compared) + " compositions compared, " + std::to_string(compared - agree) +
             " disagreements, " + std::to_string(skipped) + " not integrable\n";
    r.js = {{"seed", o.seed}, {"compared", compared}, {"disagreements", compared - agree}, {"not_integrable", skipped}};
    r.code = agree == compared ? 0 : 1;
    return r;
  }
  OperatorClass p = load_class(o.p_path, "-P"), q = load_class(o.q_path, "-Q");
  auto k = c.compose(p, q);
  auto closed = c.ffz_closed_form(p, q);
  bool same = window_equal(k.family.at("ff_z"), closed, 12, 8);
  r.text = class_text(k) + "closed form at ff_z: " + to_string(closed) + (same ? " (agrees)" : " (DIFFERS)") + "\n";
  r.js = {{"class", to_json(k)}, {"ffz_closed_form", to_json(closed)}, {"agrees", same}};
  r.code = same ? 0 : 1;
  return r;
}

Result cmd_act(const Opts& o) {
  OperatorClass p = load_class(o.p_path, "-P");
  if (o.i_path.empty()) throw UsageError("missing -I");
  IndexSet i = index_set_from_json(read_json_file(o.i_path));
  IndexSet res = act(p, i);
  return {to_string(res) + "\n", {{"result", to_json(res)}}};
}

Result cmd_parametrix(const Opts& o) {
  Tower t = load_tower(o);
  Calculus c(t);
  Q m;
  try {
    m = parse_q(o.m);
  } catch (const std::exception&) {
    throw UsageError("bad order '" + o.m + "'");
  }
  auto l = parametrix_ledger(c, m);
  bool replay = replay_ledger(c, l);
  Result r;
  for (size_t i = 0; i < l.steps.size(); ++i) {
    const auto& s = l.steps[i];
    r.text += std::to_string(i + 1) + ". " + s.description + " [" + s.rule + "] -> order " + to_string(s.output.order) +
              ", ff_z " + to_string(s.output.family.at("ff_z")) + "\n";
    for (const auto& k : s.checks) r.text += std::string("   ") + (k.holds ? "ok   " : "FAIL ") + k.claim + "\n";
  }
  r.text += std::string("ledger ") + (l.verified() && replay ? "verified" : "NOT verified") + "\n";
  r.js = to_json(l);
  r.js["replayed"] = replay;
  r.code = l.verified() && replay ? 0 : 1;
  return r;
}

ADiffOp load_op(const Opts& o, const ModelShape& s) {
  if (o.op_path.empty()) {
    return model_laplacian(s) + op_multiply(s, lambda_from_string(o.lambda, s.nvars()).scaled(CQ(-1)));
  }
  return op_from_json(read_json_file(o.op_path), s);
}

BasePoint load_point(const Opts& o, const ModelShape& s) {
  BasePoint p{std::vector<double>(s.b + s.f1, 0.0)};
  if (!o.point.empty()) p.yz = parse_doubles(o.point);
  if (int(p.yz.size()) != s.b + s.f1) throw UsageError("--point needs b + f1 values");
  return p;
}

Result cmd_normal_family(const Opts& o) {
  Tower t = load_tower(o);
  ModelShape s = model_shape(t);
  ADiffOp p = load_op(o, s);
  BasePoint pt = load_point(o, s);
  Result r;
  if (o.certify) {
    std::optional<double> tail;
    if (o.op_path.empty()) {
      // eigenvalues are real and at least |mu|^2 outside the grid
      auto lam = lambda_from_string(o.lambda, s.nvars());
      double mag = 0;
      for (const auto& [k, a] : lam.terms)
        mag += std::abs(std::complex<double>(a.re.get_d(), a.im.get_d())) * std::pow(M_PI, k.pipow);
      tail = o.radius * o.radius - mag;
    }
    auto c = fully_elliptic_check(p, Grid{o.radius, o.step}, o.n, tail, {pt});
    r.text = std::string(c.fully_elliptic ? "fully elliptic" : "not fully elliptic") + "; symbol " +
             (c.symbol_elliptic ? "elliptic" : "not elliptic") + "; min singular value " + num(c.min_singular) +
             " at mu " + list(c.argmin_mu) + (c.argmin_mode.empty() ? "" : " mode " + list(c.argmin_mode)) + "; tail " +
             c.tail + "\n";
    r.js = to_json(c);
    r.code = c.fully_elliptic ? 0 : 1;
    return r;
  }
  std::vector<double> mu = o.mu.empty() ? std::vector<double>(1 + s.b + s.f1, 0.0) : parse_doubles(o.mu);
  if (int(mu.size()) != 1 + s.b + s.f1) throw UsageError("--mu needs 1 + b + f1 values");
  auto m = normal_family_matrix(p, pt, mu, o.n);
  auto modes = fiber_modes(s.f2, o.n);
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != std::complex<double>(0, 0)) {
        entries.push_back({{"row", modes[i]}, {"col", modes[j]}, {"value", {m(i, j).real(), m(i, j).imag()}}});
        r.text += list(modes[i]) + " " + list(modes[j]) + " " + num(m(i, j).real()) +
                  (m(i, j).imag() != 0 ? " + " + num(m(i, j).imag()) + "i" : "") + "\n";
      }
  r.js = {{"symbol", to_string(principal_symbol(p), s)}, {"size", m.rows()}, {"entries", entries}};
  r.text = "principal symbol: " + to_string(principal_symbol(p), s) + "\n" + r.text;
  return r;
}

Result cmd_resolvent(const Opts& o) {
  Tower t = load_tower(o);
  ModelShape s = model_shape(t);
  auto lam = lambda_from_string(o.lambda, s.nvars());
  auto rep = resolvent_model_check(s, lam, o.n, Grid{o.radius, o.step});
  Result r;
  if (rep.ok)
    r.text = "fully elliptic; margin " + num(rep.margin) + " (bound " + num(rep.bound) + ")\n";
  else
    r.text = "not fully elliptic; margin " + num(rep.margin) + "; witness mu " + list(rep.witness_mu) + " mode " +
             list(rep.witness_mode) + "\n";
  r.js = to_json(rep);
  r.code = rep.ok ? 0 : 1;
  return r;
}

Result cmd_export_dot(const Opts& o) {
  Tower t = load_tower(o);
  if (o.space != "double" && o.space != "triple") throw UsageError("--space must be double or triple");
  Space x = o.space == "double" ? double_space(t).space : triple_space(t).space;
  std::string dot = export_dot(x);
  return {dot, {{"dot", dot}}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"a-calculus workbench"};
  app.require_subcommand(1);
  Opts o;
  app.add_option("--format", o.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("-o,--output", o.output, "output file");
  app.add_option("--seed", o.seed, "seed for randomized sweeps");

  auto with_config = [&](CLI::App* c) {
    c->add_option("-c,--config", o.config, "tower config (JSON)")->required();
    c->add_option("--format", o.format)->check(CLI::IsMember({"text", "json", "dot"}));
    c->add_option("-o,--output", o.output);
    c->add_option("--seed", o.seed);
    return c;
  };
  auto grid_opts = [&](CLI::App* c) {
    c->add_option("-N", o.n, "fiber Fourier truncation")->check(CLI::PositiveNumber);
    c->add_option("--radius", o.radius, "mu grid radius")->check(CLI::PositiveNumber);
    c->add_option("--step", o.step, "mu grid step")->check(CLI::PositiveNumber);
  };

  std::function<Result(const Opts&)> action;
  auto bind = [&](CLI::App* c, Result (*f)(const Opts&)) { c->callback([&action, f] { action = f; }); };

  auto* tower = app.add_subcommand("tower", "tower operations")->require_subcommand(1);
  bind(with_config(tower->add_subcommand("validate", "check a tower config")), cmd_tower_validate);
  auto* space = app.add_subcommand("space", "blown-up spaces")->require_subcommand(1);
  bind(with_config(space->add_subcommand("double", "the double space and its projections")), cmd_space_double);
  bind(with_config(space->add_subcommand("triple", "the triple space and its projections")), cmd_space_triple);
  auto* facemap = app.add_subcommand("facemap", "face maps")->require_subcommand(1);
  bind(with_config(facemap->add_subcommand("verify", "check the triple projection face tables")), cmd_facemap_verify);
  bind(with_config(app.add_subcommand("weights", "density weight vectors")), cmd_weights);
  auto* comp = with_config(app.add_subcommand("compose", "compose two operator classes"));
  comp->add_option("-P", o.p_path, "left class (JSON)");
  comp->add_option("-Q", o.q_path, "right class (JSON)");
  comp->add_option("--sweep", o.sweep, "compare random compositions with the closed form");
  bind(comp, cmd_compose);
  auto* actc = app.add_subcommand("act", "index set of P u");
  actc->add_option("-P", o.p_path, "operator class (JSON)")->required();
  actc->add_option("-I", o.i_path, "index set (JSON)")->required();
  actc->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  actc->add_option("-o,--output", o.output);
  bind(actc, cmd_act);
  auto* par = with_config(app.add_subcommand("parametrix", "parametrix ledger"));
  par->add_option("-m", o.m, "order");
  bind(par, cmd_parametrix);
  auto* nf = with_config(app.add_subcommand("normal-family", "normal family matrix or certificate"));
  nf->add_option("--op", o.op_path, "operator spec (JSON); default is the model Laplacian minus lambda");
  nf->add_option("--lambda", o.lambda, "spectral parameter for the default operator");
  nf->add_option("--mu", o.mu, "comma-separated (tau, eta, zeta)");
  nf->add_option("--point", o.point, "comma-separated base point (y, z)");
  nf->add_flag("--certify", o.certify, "full-ellipticity certificate over the mu grid");
  grid_opts(nf);
  bind(nf, cmd_normal_family);
  auto* rc = with_config(app.add_subcommand("resolvent-check", "model resolvent check"));
  rc->add_option("--lambda", o.lambda, "spectral parameter: -1, i, -3+2i, 4pi^2");
  grid_opts(rc);
  bind(rc, cmd_resolvent);
  auto* dot = with_config(app.add_subcommand("export-dot", "face graph in DOT"));
  dot->add_option("--space", o.space, "double or triple");
  bind(dot, cmd_export_dot);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  Result r;
  try {
    r = action(o);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NonIntegrable& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const TowerError& e) {
    err << "invalid tower: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  std::string body = o.format == "json" ? r.js.dump(2) + "\n" : r.text;
  if (o.format == "dot" && r.js.contains("dot")) body = r.js["dot"].get<std::string>();
  if (o.output.empty()) {
    out << body;
  } else {
    std::ofstream f(o.output);
    if (!f) {
      err << "cannot write " << o.output << "\n";
      return 2;
    }
    f << body;
  }
  return r.code;
}

}  // namespace acalc
