#pragma once

#include <map>
#include <string>
#include <vector>

namespace acalc {

inline constexpr int kInterior = -1;
inline constexpr int kCorner = -2;

// b-map between corner spaces, recorded by its exponent matrix
struct BMap {
  std::string domain;
  std::string codomain;
  std::vector<std::string> dom_faces;
  std::vector<std::string> cod_faces;
  std::vector<std::vector<int>> exps;  // exps[G][H]
  std::vector<int> face_map;           // codomain index, kInterior or kCorner
  // vanishing order of pulled back interior labels at each domain face
  std::map<std::string, std::map<std::string, int>> interior_orders;

  int dom_index(const std::string& f) const;
  int cod_index(const std::string& f) const;
  int e(const std::string& g, const std::string& h) const;
};

BMap make_bmap(std::string domain, std::string codomain, std::vector<std::string> dom_faces,
               std::vector<std::string> cod_faces, std::vector<std::vector<int>> exps);
BMap identity_bmap(const std::string& space, const std::vector<std::string>& faces);

}  // namespace acalc
