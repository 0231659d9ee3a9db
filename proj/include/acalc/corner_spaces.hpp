#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acalc/bmap.hpp"
#include "acalc/rational.hpp"

namespace acalc {

struct SpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coordinates of the valuation model: one boundary coordinate per factor,
// then per level and per factor pair one interior difference label.
// Level 0 labels measure the excess order of x_i - x_j over min(x_i, x_j).
struct Layout {
  int n = 0;
  int k = -1;
  std::vector<std::string> base_faces;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> triangles;        // label indices, one group per level (n = 3)
  std::vector<std::array<int, 3>> level0;          // (label index, factor i, factor j)

  int label_index(const std::string& l) const;
  int dim() const { return n + int(labels.size()); }
};

std::string level_name(int level, int k);
std::string pair_label(int level, int k, int i, int j);  // factors 1-based, i < j

// p-submanifold: vanishing of boundary faces and interior labels, to an order
// (order 0 marks an exact interior submanifold, defined to every order)
struct PSub {
  std::set<std::string> faces;
  std::set<std::string> interior;
  int order = 0;
};

bool operator==(const PSub& a, const PSub& b);
std::string to_string(const PSub& p);

struct Step {
  PSub center;
  int order = 1;
  std::string name;
};

struct Face {
  std::string name;
  std::vector<long> ray;  // valuation vector over the layout coordinates
  int step = -1;          // creating step, -1 for base faces
};

struct Decomp {
  std::vector<Q> c;         // per face
  std::vector<Q> residual;  // per interior label
  std::vector<int> support() const;
};

struct CompiledStep {
  std::vector<int> faces;
  std::vector<int> labels;
  int order = 1;
  int ff = -1;
};

class Space {
 public:
  std::string name;
  std::shared_ptr<const Layout> layout;
  std::vector<Face> faces;
  std::vector<Step> history;
  std::vector<std::pair<std::string, PSub>> registry;
  std::vector<CompiledStep> compiled;

  int face_index(const std::string& f) const;
  const Face& face(const std::string& f) const { return faces.at(face_index(f)); }
  std::vector<std::string> bhs() const;
  const PSub* registered(const std::string& n) const;

  Decomp peel(const std::vector<Q>& w) const;
  std::vector<Q> center_point(const PSub& c, long big) const;
  bool locus_nonempty(const PSub& c) const;
  // both blowups would act at a common point
  bool centers_meet(const Step& s, const Step& t) const;
  bool meets(const std::vector<int>& faces) const;
  std::vector<std::vector<int>> cones() const;  // all meeting face sets, sorted
  std::vector<std::string> faces_meeting(const PSub& p) const;

 private:
  void close_point(std::vector<Q>& w) const;
};

struct FactorDesc {
  std::string bhs;
};

Space product_space(const std::vector<FactorDesc>& factors, int k, std::string name = "");

struct BlowupResult {
  Space space;
  BMap blowdown;
};

// center must be registered (or carry no interior labels) and be defined to order >= a
BlowupResult blowup(const Space& x, const PSub& center, int a, const std::string& ff_name);
// unchecked against the registry; locus and order checks only
Space apply_step(const Space& x, const Step& s);
BMap blowdown_map(const Space& before, const Space& after);

// lift of p through the blowup of `blown` whose front face is `ff`; nullopt if p is the center itself
std::optional<PSub> lift(const Step& blown, const PSub& p);

BMap compose(const BMap& f, const BMap& g);  // f : X -> Y, g : Y -> Z
bool is_b_fibration(const BMap& f);

// total exponent matrix to the base space: the boundary part of every ray
BMap total_blowdown(const Space& x);

struct BlowupSeq {
  Space base;
  std::vector<Step> steps;
};

Space replay(const BlowupSeq& seq);

struct RewriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RewriteOp {
  int rule = 1;
  size_t pos = 0;
};

BlowupSeq rewrite_step(const BlowupSeq& seq, int rule, size_t pos);
BlowupSeq run_script(const BlowupSeq& seq, const std::vector<RewriteOp>& script);

// face bijection X -> Y preserving incidence, rays and registry incidence
std::optional<std::map<std::string, std::string>> isomorphic(const Space& x, const Space& y);

std::string export_dot(const Space& x);

}  // namespace acalc
