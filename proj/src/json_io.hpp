#pragma once

#include <json.hpp>
#include <string>

#include "ring.hpp"

namespace pa {

using Json = nlohmann::json;

Json to_json(const GroupDescriptor& g);
GroupDescriptor group_from_json(const Json& j);
/// "z", "z2", "z3", "h", "heisenberg", "lattice:4", ...
GroupDescriptor group_from_name(const std::string& name);

Json to_json(const GroupElement& g);
GroupElement element_from_json(const GroupDescriptor& group, const Json& j);

Json to_json(const ExactElement& e);
Json to_json(const RealElement& e);
/// Reads either coefficient flavor; float coefficients become exact dyadic rationals.
ExactElement exact_from_json(const Json& j);
RealElement real_from_json(const Json& j);

Json to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const Json& j);

Json to_json(const Window& w);
Window window_from_json(const Json& j);

Json to_json(const Configuration& c);
Configuration configuration_from_json(const Json& j);

/// A polynomial given either as ring-element JSON (leading '{') or as an
/// infix expression over the given group.
ExactElement parse_polynomial(const std::string& text, const GroupDescriptor& group);

}  // namespace pa
