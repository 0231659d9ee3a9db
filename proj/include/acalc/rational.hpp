#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace acalc {

using Q = mpq_class;

// "n/d" text form; integers print without the denominator
std::string to_string(const Q& q);
Q parse_q(const std::string& s);

// canonical n/d (gmp's two-argument constructor does not reduce)
inline Q qq(long n, long d = 1) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

// rational extended by a +infinity sentinel (x^infinity weights)
struct ExtQ {
  Q v;
  bool inf = false;

  ExtQ() = default;
  ExtQ(const Q& q) : v(q) {}
  ExtQ(long n) : v(n) {}
  static ExtQ infinity() {
    ExtQ e;
    e.inf = true;
    return e;
  }
};

bool operator==(const ExtQ& a, const ExtQ& b);
bool operator<(const ExtQ& a, const ExtQ& b);
ExtQ operator+(const ExtQ& a, const ExtQ& b);
std::string to_string(const ExtQ& e);
ExtQ parse_extq(const std::string& s);

struct CQ {
  Q re;
  Q im;

  CQ() = default;
  CQ(const Q& r) : re(r) {}
  CQ(const Q& r, const Q& i) : re(r), im(i) {}
};

inline bool operator==(const CQ& a, const CQ& b) { return a.re == b.re && a.im == b.im; }
inline CQ operator+(const CQ& a, const CQ& b) { return {a.re + b.re, a.im + b.im}; }
inline CQ operator-(const CQ& a, const CQ& b) { return {a.re - b.re, a.im - b.im}; }
inline CQ operator*(const Q& s, const CQ& a) { return {s * a.re, s * a.im}; }

}  // namespace acalc
