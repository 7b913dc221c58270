#pragma once

// Tree encoding for machine-readable output. Every node is an object with a
// "kind" discriminator; naturals are decimal strings so big values survive.

#include "hoarith/alpha.hpp"
#include "hoarith/hierarchy.hpp"
#include "hoarith/proof.hpp"
#include "hoarith/xrec.hpp"

#include <json.hpp>

namespace hoarith::cli {

using json = nlohmann::ordered_json;

json to_json(const Term& t);
json to_json(const Formula& f);
json to_json(const BoolExpr& b);
json to_json(const Program& p);
json to_json(const Schema& h);
json to_json(const HierarchyLevel& l);
json to_json(const ProgState& s);
json to_json(const VarAssignment& a);
json to_json(const TriState& t);
json to_json(const Verdict& v);
json to_json(const CheckReport& r);

}  // namespace hoarith::cli
