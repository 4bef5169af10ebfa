#pragma once

#include <json.hpp>

#include "horolab/empirical.hpp"
#include "horolab/engine.hpp"
#include "horolab/functional.hpp"
#include "horolab/invariance.hpp"
#include "horolab/map_expr.hpp"
#include "horolab/seq_vector.hpp"
#include "horolab/space.hpp"

namespace horolab {

using nlohmann::json;

// encoding: {"coeffs":[...], "tail": null} for a zero tail, number otherwise
json to_json(const SeqVector& v);
SeqVector seq_vector_from_json(const json& j);

// {"kind":"lp","p":2} | {"kind":"c0"} | {"kind":"linfty"}
// | {"kind":"dsum","p":1|"inf","left":...,"right":...}
json to_json(const SpaceSpec& s);
SpaceSpec space_from_json(const json& j);

// {"op":"prepend_shift","value":1} and friends, mirroring the constructor tree
json to_json(const MapExpr& m);
MapExpr map_from_json(const json& j);

json to_json(const FamilySpec& f);
FamilySpec family_from_json(const json& j);

// {"variant":"shift_l1"} and friends
json to_json(const Functional& f);
Functional functional_from_json(const json& j);

// report encodings
json to_json(const DefectReport& r);
json to_json(const CommutationReport& r);
json to_json(const NonexpansiveReport& r);
json to_json(const MatchReport& r);
json to_json(const EmpiricalFunctional& e);
json to_json(const TranslationEstimate& t);
json to_json(const CenterReport& c);
json to_json(const OpialReport& o);
json to_json(const ZfpScan& z);
json to_json(const FixedPointCheck& f);
json to_json(const L2Counterexample& c);
json to_json(const BusemannResult& b);
json to_json(const CommonFixedPointResult& r);
json to_json(const UmpResult& r);

}  // namespace horolab
