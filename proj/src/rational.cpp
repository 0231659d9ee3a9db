#include "acalc/rational.hpp"

#include <stdexcept>

namespace acalc {

std::string to_string(const Q& q) {
  Q c(q);
  c.canonicalize();
  return c.get_str();
}

Q parse_q(const std::string& s) {
  Q q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("not a rational: '" + s + "'");
  q.canonicalize();
  return q;
}

bool operator==(const ExtQ& a, const ExtQ& b) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return a.v == b.v;
}

bool operator<(const ExtQ& a, const ExtQ& b) {
  if (a.inf) return false;
  if (b.inf) return true;
  return a.v < b.v;
}

ExtQ operator+(const ExtQ& a, const ExtQ& b) {
  if (a.inf || b.inf) return ExtQ::infinity();
  return ExtQ(Q(a.v + b.v));
}

std::string to_string(const ExtQ& e) { return e.inf ? "inf" : to_string(e.v); }

ExtQ parse_extq(const std::string& s) {
  if (s == "inf" || s == "+inf") return ExtQ::infinity();
  return ExtQ(parse_q(s));
}

}  // namespace acalc
