#pragma once

#include <json.hpp>

#include "acalc/model_symbols.hpp"
#include "acalc/op_calculus.hpp"

namespace acalc {

using json = nlohmann::ordered_json;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const Q& q);
json to_json(const ExtQ& e);
json to_json(const IndexSet& g);  // [[re, im, p], ...]
json to_json(const IndexFamily& f);
json to_json(const WeightVector& w);
json to_json(const Tower& t);
json to_json(const BMap& f);
json to_json(const PSub& p);
json to_json(const BlowupSeq& s);
json to_json(const std::vector<RewriteOp>& script);
json to_json(const OperatorClass& p);
json to_json(const Ledger& l);
json to_json(const Coeff& c);
json to_json(const ADiffOp& p);
json to_json(const Certificate& c);
json to_json(const ResolventReport& r);

Q q_from_json(const json& j);
ExtQ extq_from_json(const json& j);
IndexSet index_set_from_json(const json& j);
IndexFamily family_from_json(const json& j);
Tower tower_from_json(const json& j);
PSub psub_from_json(const json& j);
std::vector<RewriteOp> script_from_json(const json& j);
OperatorClass class_from_json(const json& j);
// canonical {"terms": [...]} or the product form {"x_poly": [...], "trig": [...]}
Coeff coeff_from_json(const json& j, int nvars);
ADiffOp op_from_json(const json& j, const ModelShape& s);
// "-1", "i", "-3+2i", "4pi^2"
Coeff lambda_from_string(const std::string& s, int nvars);

json read_json_file(const std::string& path);

}  // namespace acalc
