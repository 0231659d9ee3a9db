#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "acalc/a_spaces.hpp"
#include "acalc/rational.hpp"

namespace acalc {

CQ operator*(const CQ& a, const CQ& b);
CQ conj(const CQ& a);
std::string to_string(const CQ& z);

// ---- exact Laurent polynomials for the vector-field lifts ----

using Monomial = std::map<std::string, int>;

struct Poly {
  std::map<Monomial, Q> terms;

  static Poly constant(const Q& c);
  static Poly var(const std::string& v, int e = 1, const Q& c = 1);
  bool zero() const { return terms.empty(); }
  Poly operator+(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly diff(const std::string& v) const;
  Poly subst(const std::string& v, const Poly& by) const;
  // keep the part regular at v = 0 and set v = 0; nullopt if a negative power remains
  std::optional<Poly> at_zero(const std::string& v) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }
};

std::string to_string(const Poly& p);

// coordinate vector field: coordinate name -> component
using VField = std::map<std::string, Poly>;
std::string to_string(const VField& v);
VField clean(VField v);

enum class Dir { X, Y, Z, W };
enum class Stage { Base, X, Y, Z };

// left lift of x^power d/d(dir_index) through beta_x, beta_y, beta_z up to `stage`
VField lift_vf(const Tower& t, Dir dir, int index, int x_power, Stage stage);
// restriction to the front face created at `stage` (x = 0)
std::optional<VField> at_front_face(const VField& v);
// the basis field x^{1+a1+a2} d_x, x^{a1+a2} d_y, x^{a2} d_z or d_w
VField lifted_basis(const Tower& t, Dir dir, int index);

bool transversality_check(const Tower& t, bool with_w = true);

// ---- a-differential operators with trig-polynomial coefficients ----

// (x power, power of pi, Fourier frequency over (y, z, w)) -> coefficient;
// the term is c pi^p x^n exp(2 pi i f.(y,z,w))
struct CoeffKey {
  int xpow = 0;
  int pipow = 0;
  std::vector<int> freq;
  auto operator<=>(const CoeffKey&) const = default;
};

struct Coeff {
  std::map<CoeffKey, CQ> terms;

  static Coeff constant(const CQ& c, int nvars);
  static Coeff monomial(const CQ& c, int xpow, std::vector<int> freq, int pipow = 0);
  bool zero() const { return terms.empty(); }
  Coeff operator+(const Coeff& o) const;
  Coeff operator*(const Coeff& o) const;
  Coeff scaled(const CQ& s) const;
  Coeff conjugate() const;
  Coeff at_x0() const;
  int w_degree(int first_w) const;  // max |f_w|_inf
  friend bool operator==(const Coeff& a, const Coeff& b) { return a.terms == b.terms; }
};

struct ModelShape {
  int a1 = 1, a2 = 1, b = 0, f1 = 0, f2 = 0;
  int nvars() const { return 1 + b + f1 + f2; }
  int weight(int v) const;  // x power of the basis field for variable v (0 = x)
};

ModelShape model_shape(const Tower& t);

// sum over multi-indices A = (alpha, I, J, K) of c_A V_x^alpha V_y^I V_z^J D_w^K
struct ADiffOp {
  ModelShape shape;
  std::map<std::vector<int>, Coeff> terms;

  int order() const;
  void add(const std::vector<int>& idx, const Coeff& c);
};

ADiffOp op_constant(const ModelShape& s, const CQ& c);
ADiffOp op_field(const ModelShape& s, int var);                // V_var
ADiffOp op_multiply(const ModelShape& s, const Coeff& c);
ADiffOp model_laplacian(const ModelShape& s, const CQ& lambda = CQ());  // sum V_j^2 - lambda
ADiffOp operator+(const ADiffOp& a, const ADiffOp& b);
ADiffOp compose(const ADiffOp& p, const ADiffOp& q);
ADiffOp formal_adjoint(const ADiffOp& p);  // with respect to |dx dy dz dw|

// fiber-variable monomial exponents -> coefficient
using SymbolPoly = std::map<std::vector<int>, Coeff>;
SymbolPoly principal_symbol(const ADiffOp& p);
SymbolPoly symbol_degree(const ADiffOp& p, int m);
SymbolPoly multiply(const SymbolPoly& a, const SymbolPoly& b);
std::string to_string(const SymbolPoly& s, const ModelShape& shape);

struct BasePoint {
  std::vector<double> yz;  // b + f1 values
};

std::vector<std::vector<int>> fiber_modes(int f2, int n);
// rows and columns ordered as fiber_modes
Eigen::MatrixXcd normal_family_matrix(const ADiffOp& p, const BasePoint& pt, const std::vector<double>& mu, int n);
bool w_independent(const ADiffOp& p);

struct Grid {
  double radius = 10;
  double step = 0.5;
  std::vector<std::vector<double>> points(int dim) const;
};

struct GridMin {
  double value = 0;
  std::vector<double> mu;
  std::vector<int> mode;  // set for diagonal families
};

// min over the grid of the smallest singular value
GridMin sweep_serial(const ADiffOp& p, const BasePoint& pt, const Grid& g, int n);
GridMin sweep_parallel(const ADiffOp& p, const BasePoint& pt, const Grid& g, int n);

struct Certificate {
  bool symbol_elliptic = false;
  double min_singular = 0;
  std::vector<double> argmin_mu;
  std::vector<int> argmin_mode;
  std::string tail;
  bool fully_elliptic = false;
};

// tail_bound: a lower bound for the normal family outside the grid, when known
Certificate fully_elliptic_check(const ADiffOp& p, const Grid& g, int n, std::optional<double> tail_bound = {},
                                 const std::vector<BasePoint>& base = {});

struct ResolventReport {
  bool ok = false;
  double bound = 0;    // dist(lambda, [0, inf))
  double margin = 0;   // min |eigenvalue - lambda|
  std::vector<double> witness_mu;
  std::vector<int> witness_mode;
};

ResolventReport resolvent_model_check(const ModelShape& s, const CQ& lambda, int n, const Grid& g);
// lambda as an exact constant, possibly carrying a power of pi
ResolventReport resolvent_model_check(const ModelShape& s, const Coeff& lambda, int n, const Grid& g);

struct MultiplicativityReport {
  bool symbol_ok = false;
  bool normal_ok = false;
  double normal_err = 0;
};

MultiplicativityReport multiplicativity_check(const ADiffOp& p, const ADiffOp& q, int samples, std::mt19937& rng,
                                              int n = 4);

struct KernelCoeff {
  std::vector<int> index;
  Coeff a0;  // operator coefficient at x = 0
  Coeff b;   // lifted-kernel coefficient at ff_z
};

struct KernelReport {
  bool ok = false;
  long density_exponent = 0;  // gamma of the identity kernel, from the coordinate change
  std::vector<KernelCoeff> coeffs;
};

KernelReport kernel_coeff_check(const Tower& t, const ADiffOp& p);

ADiffOp random_op(const ModelShape& s, int max_order, std::mt19937& rng);

}  // namespace acalc
