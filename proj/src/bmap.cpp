#include "acalc/bmap.hpp"

#include <algorithm>
#include <stdexcept>

namespace acalc {

namespace {
int find_name(const std::vector<std::string>& v, const std::string& s) {
  auto it = std::find(v.begin(), v.end(), s);
  return it == v.end() ? -1 : int(it - v.begin());
}
}  // namespace

int BMap::dom_index(const std::string& f) const { return find_name(dom_faces, f); }
int BMap::cod_index(const std::string& f) const { return find_name(cod_faces, f); }

int BMap::e(const std::string& g, const std::string& h) const {
  int i = dom_index(g), j = cod_index(h);
  if (i < 0 || j < 0) throw std::out_of_range("unknown face " + g + " / " + h);
  return exps[i][j];
}

BMap make_bmap(std::string domain, std::string codomain, std::vector<std::string> dom_faces,
               std::vector<std::string> cod_faces, std::vector<std::vector<int>> exps) {
  BMap f;
  f.domain = std::move(domain);
  f.codomain = std::move(codomain);
  f.dom_faces = std::move(dom_faces);
  f.cod_faces = std::move(cod_faces);
  f.exps = std::move(exps);
  for (const auto& row : f.exps) {
    if (row.size() != f.cod_faces.size()) throw std::invalid_argument("exponent row size");
    int hit = kInterior;
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j] < 0) throw std::invalid_argument("negative exponent");
      if (row[j] > 0) hit = hit == kInterior ? int(j) : kCorner;
    }
    f.face_map.push_back(hit);
  }
  if (f.exps.size() != f.dom_faces.size()) throw std::invalid_argument("exponent row count");
  return f;
}

BMap identity_bmap(const std::string& space, const std::vector<std::string>& faces) {
  std::vector<std::vector<int>> m(faces.size(), std::vector<int>(faces.size(), 0));
  for (size_t i = 0; i < faces.size(); ++i) m[i][i] = 1;
  return make_bmap(space, space, faces, faces, m);
}

}  // namespace acalc
