#pragma once

// JSON encodings shared by the CLI and the reports. Every number travels
// as a string: a decimal or "p/q" literal for rationals, the shortest
// round-trip decimal for floats.

#include <string>

#include "json.hpp"

#include "rlab/instance.hpp"
#include "rlab/norms.hpp"
#include "rlab/oscillation.hpp"
#include "rlab/rearrange.hpp"

namespace rlab {

using Json = nlohmann::json;

// Pretty-printed with sorted keys and a trailing newline.
std::string dump_canonical(const Json& j);

// Parses text, mapping syntax errors to InvalidInput.
Json parse_json(const std::string& text);

template <Scalar T>
Json scalar_to_json(const T& value) {
  return to_string(value);
}

// Accepts string literals and JSON integers.
template <Scalar T>
T scalar_from_json(const Json& j);

// {"space":{"weights":[...]},"functions":{"f":[...],...}}
Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

// {"segments":[["3","0.2"],...]}
template <Scalar T>
Json profile_to_json(const StepProfile<T>& profile);
template <Scalar T>
StepProfile<T> profile_from_json(const Json& j);

// {"blocks":[{"a":"1","A":[0,1],"b":"1","B":[2,3]},...]}
Json decomposition_to_json(const BlockDecomposition& decomposition);
BlockDecomposition decomposition_from_json(const Json& j, SpacePtr<Rational> space);

// {"kind":"lp","p":"2"}, {"kind":"lorentz","phi":[["0","0"],...]},
// {"kind":"associate","base":{...}}, {"kind":"generated","base":{...},"p":"2"}
Json norm_to_json(const RINorm& norm);
RINorm norm_from_json(const Json& j);

}  // namespace rlab
