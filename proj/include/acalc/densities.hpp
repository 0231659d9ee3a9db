#pragma once

#include <vector>

#include "acalc/a_spaces.hpp"
#include "acalc/index_algebra.hpp"

namespace acalc {

// gamma_l for l = 1..k, stored at index l - 1
std::vector<long> gamma(const Tower& t);

// dimension of the level-l interior directions: 1, b, f_1, f_2, ...
long level_dim(const Tower& t, int level);

// density exponent of every face read off from its valuation ray:
// each level contributes dim * (sum - min) over its pair labels
WeightVector blowup_weights(const Space& x, const Tower& t);

// (f^# w)(G) = sum_H e(G,H) w(H)
WeightVector pullback_weight(const BMap& f, const WeightVector& w);
WeightVector add_weights(const WeightVector& a, const WeightVector& b);
WeightVector scale_weights(const WeightVector& a, const Q& s);

struct DoubleWeights {
  WeightVector w_a0;
  WeightVector w_a;
  WeightVector w_tilde;
  WeightVector w_a0_computed;  // from blowup data
  WeightVector w0;             // (w_a - w_a0) / 2
};

DoubleWeights double_weights(const Tower& t);

struct TripleWeights {
  WeightVector W_a0;           // closed form
  WeightVector W_a0_computed;  // from blowup data
  WeightVector W_a;            // W_a0 + sum_i (pi_i)^# w0
  WeightVector W_a_displayed;  // the printed closed form, kept for comparison
  std::vector<std::string> order;
};

TripleWeights triple_weights(const Tower& t, const ASpaceTriple& tr);
TripleWeights triple_weights(const Tower& t);

}  // namespace acalc
