#pragma once

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "acalc/bmap.hpp"
#include "acalc/rational.hpp"

namespace acalc {

struct IndexTerm {
  CQ z;
  unsigned p = 0;
};

bool operator==(const IndexTerm& a, const IndexTerm& b);
bool operator<(const IndexTerm& a, const IndexTerm& b);

// Generators of an index set: an antichain under
// (z,p) <= (z',p')  iff  z'-z in N0 and p <= p'.
class IndexSet {
 public:
  IndexSet() = default;
  static IndexSet from_generators(std::vector<IndexTerm> gens);  // normalizes
  static IndexSet single(const Q& re, unsigned p = 0) { return from_generators({{CQ(re), p}}); }

  const std::vector<IndexTerm>& generators() const { return gens_; }
  bool empty() const { return gens_.empty(); }

  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.gens_ == b.gens_; }

 private:
  std::vector<IndexTerm> gens_;
};

using IndexFamily = std::map<std::string, IndexSet>;
using WeightVector = std::map<std::string, ExtQ>;

IndexSet normalize(std::vector<IndexTerm> terms);
bool contains(const IndexSet& g, const IndexTerm& t);
ExtQ inf_re(const IndexSet& g);
IndexSet add(const IndexSet& g, const IndexSet& h);
IndexSet ext_union(const IndexSet& g, const IndexSet& h);
IndexSet shift(const IndexSet& g, const ExtQ& w);

// true when t - s lies in N0 (same imaginary part)
bool z_dominates(const CQ& t, const CQ& s);

IndexFamily pullback_family(const BMap& f, const IndexFamily& e);

struct PushforwardResult {
  IndexFamily family;
  std::vector<std::string> violations;
};
PushforwardResult pushforward_family(const BMap& f, const IndexFamily& e);

ExtQ weight_at(const WeightVector& w, const std::string& face);
IndexFamily shift_family(const IndexFamily& e, const WeightVector& w);

// closure of g restricted to Re z <= re_max, p <= p_max, as (im, re, p) triples
std::set<std::tuple<Q, Q, unsigned>> window(const IndexSet& g, const Q& re_max, unsigned p_max);
bool window_equal(const IndexSet& a, const IndexSet& b, const Q& re_max, unsigned p_max);

std::string to_string(const IndexSet& g);
inline std::ostream& operator<<(std::ostream& os, const IndexSet& g) { return os << to_string(g); }

}  // namespace acalc
