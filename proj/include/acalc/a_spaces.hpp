#pragma once

#include <map>
#include <string>
#include <vector>

#include "acalc/corner_spaces.hpp"

namespace acalc {

struct TowerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tower {
  int k = 0;
  std::vector<int> a;  // a_0 .. a_k
  int b = 0;
  std::vector<int> f;  // f_1 .. f_k

  int dim_m() const;
  void validate() const;  // throws TowerError
};

Tower make_tower(std::vector<int> a, int b, std::vector<int> f);

// names of the double-space faces in report order (rf, lf, front faces by level)
std::vector<std::string> double_face_names(int k);

struct ASpaceDouble {
  Space space;
  PSub diag;
  BMap proj_l;
  BMap proj_r;
  std::vector<BMap> blowdowns;
};

ASpaceDouble double_space(const Tower& t);
std::pair<BMap, BMap> double_projections(const Tower& t);

std::string tri_face(const std::string& kind, int i, char level);  // e.g. ("E", 1, 'x') -> "E_{1,x}"
std::string relabel_face(const std::string& face, const std::array<int, 4>& sigma);
PSub relabel(const PSub& p, const Layout& layout, const std::array<int, 4>& sigma);
BlowupSeq relabel(const BlowupSeq& s, const std::array<int, 4>& sigma);

// the symmetric construction of M^3_z; `levels` = 0, 1, 2 truncates after the x-, y-, z-stage
BlowupSeq triple_sequence(const Tower& t, int levels = 2);
// the rewrite script taking the symmetric sequence for pi_1 to one starting with
// blowups of M x M^2 at the given level
std::vector<RewriteOp> commutation_script(int levels);
// sigma mapping factor 1 to factor i, order preserving on the remaining pair
std::array<int, 4> projection_relabel(int i);

struct ASpaceTriple {
  Space space;
  BlowupSeq sequence;
  std::vector<BMap> projections;  // pi_1, pi_2, pi_3
};

ASpaceTriple triple_space(const Tower& t);

// pi^3_i built from the commuted construction (blowdowns composed with the product projection)
BMap triple_projection(const Tower& t, int i, int levels = 2);
// pi^3_i read off by projecting face valuations into the double space
BMap triple_projection_by_rays(const Tower& t, int i, int levels = 2);
BMap triple_projection(const Tower& t, int i, int levels, bool by_rays);

// preimage classes of a face map: codomain face (or "interior") -> domain faces
std::map<std::string, std::vector<std::string>> preimages(const BMap& f);

struct FacemapReport {
  int tables = 0;
  int mismatches = 0;
  std::vector<std::string> lines;
};

FacemapReport verify_facemaps(const Tower& t);

// reference tables for pi^3_{*,1}, keyed by level 0/1/2
const std::map<std::string, std::vector<std::string>>& reference_facemap(int level);

Tower reduce(const Tower& t, int l);
int normal_bundle_rank(const Tower& t, int l);

struct CrossTerm {
  int source_level;  // i > j
  int x_power;
};

struct CoordChangeSpec {
  // row j + 1 for target level j = -1 .. k
  std::vector<std::vector<CrossTerm>> cross;
  std::vector<int> remainder;
};

bool check_coord_change(const Tower& t, const CoordChangeSpec& c);

struct SeriesTerm {
  int x_power;
  int level;  // deepest level the coefficient depends on, -1 for none
};

bool a_function_member(const Tower& t, const std::vector<SeriesTerm>& s);

}  // namespace acalc
