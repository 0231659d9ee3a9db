#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "acalc/densities.hpp"

namespace acalc {

// rational order or -infinity
struct Order {
  Q v;
  bool neg_inf = false;

  Order() = default;
  Order(const Q& q) : v(q) {}
  Order(long n) : v(n) {}
  static Order minus_infinity() {
    Order o;
    o.neg_inf = true;
    return o;
  }
};

bool operator==(const Order& a, const Order& b);
bool operator<=(const Order& a, const Order& b);
Order operator+(const Order& a, const Order& b);
std::string to_string(const Order& o);
Order parse_order(const std::string& s);

extern const std::vector<std::string> kDoubleFaces;  // rf, lf, ff_zx, ff_zy, ff_z

struct OperatorClass {
  Order order;
  IndexFamily family;  // total on kDoubleFaces
};

bool operator==(const OperatorClass& a, const OperatorClass& b);

struct NonIntegrable : std::runtime_error {
  std::vector<std::string> faces;
  NonIntegrable(const std::string& what, std::vector<std::string> f) : std::runtime_error(what), faces(std::move(f)) {}
};

// c = +inf gives the residual class x^inf Psi^{-inf}
OperatorClass small(const Order& m, const ExtQ& c);
bool is_small(const OperatorClass& p);
// A contained in B: order and every face index set
bool subclass(const OperatorClass& a, const OperatorClass& b);

// Composition data for one tower: the triple space, its projections and weights.
class Calculus {
 public:
  explicit Calculus(const Tower& t);

  const Tower& tower() const { return t_; }
  long gamma_y() const { return gy_; }
  long gamma_z() const { return gz_; }
  const TripleWeights& weights() const { return w_; }

  OperatorClass compose(const OperatorClass& p, const OperatorClass& q) const;
  IndexSet ffz_closed_form(const OperatorClass& p, const OperatorClass& q) const;

 private:
  Tower t_;
  ASpaceTriple tr_;
  TripleWeights w_;
  DoubleWeights d_;
  long gy_ = 0, gz_ = 0;
};

IndexSet act(const OperatorClass& p, const IndexSet& i);
OperatorClass adjoint(const OperatorClass& p);

struct Conjugated {
  OperatorClass cls;
  bool derived_extension = false;  // set for full-calculus classes
};
Conjugated conjugate_x(const OperatorClass& p, const Q& alpha);

bool compact(const Q& p, const Q& k);
bool hilbert_schmidt(const Q& p, const Q& k, const Tower& t);

// conormal orders through the composition: each factor pulled back to M^3,
// summed, pushed forward to M^2
struct OrderBookkeeping {
  Q pulled_p;
  Q pulled_q;
  Q pushed;
};
OrderBookkeeping composition_orders(const Q& m, const Q& mp, const Tower& t);

struct LedgerCheck {
  std::string claim;
  bool holds = false;
};

struct LedgerStep {
  std::string description;
  std::vector<OperatorClass> inputs;
  std::string rule;
  OperatorClass output;
  std::vector<LedgerCheck> checks;
};

struct Ledger {
  Q m;
  std::vector<LedgerStep> steps;
  bool verified() const;
};

// hypothesis: P is fully elliptic of order m
Ledger parametrix_ledger(const Calculus& c, const Q& m);
OperatorClass apply_rule(const Calculus& c, const std::string& rule, const std::vector<OperatorClass>& inputs);
// re-runs every rule and compares outputs
bool replay_ledger(const Calculus& c, const Ledger& l);

}  // namespace acalc
