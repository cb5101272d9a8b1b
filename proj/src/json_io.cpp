#include "json_io.hpp"

#include <algorithm>
#include <cctype>

#include "expr.hpp"

namespace pa {

Json to_json(const GroupDescriptor& g) {
  if (g.is_heisenberg()) return Json{{"kind", "heisenberg"}};
  return Json{{"kind", "lattice"}, {"d", g.rank}};
}

GroupDescriptor group_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("group descriptor needs a \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "heisenberg") return GroupDescriptor::heisenberg();
  if (kind == "lattice") {
    if (!j.contains("d") || !j.at("d").is_number_integer()) throw InvalidArgument("lattice descriptor needs integer \"d\"");
    return GroupDescriptor::lattice(j.at("d").get<int>());
  }
  throw InvalidArgument("unknown group kind '" + kind + "'");
}

GroupDescriptor group_from_name(const std::string& raw) {
  std::string name = raw;
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (name == "h" || name == "heisenberg") return GroupDescriptor::heisenberg();
  if (name == "z") return GroupDescriptor::lattice(1);
  if (name.size() == 2 && name[0] == 'z' && std::isdigit(static_cast<unsigned char>(name[1]))) {
    return GroupDescriptor::lattice(name[1] - '0');
  }
  if (name.rfind("lattice:", 0) == 0) return GroupDescriptor::lattice(std::stoi(name.substr(8)));
  throw InvalidArgument("unknown group '" + raw + "' (use z, z2, z3 or h)");
}

Json to_json(const GroupElement& g) {
  Json a = Json::array();
  for (auto e : g.exponents()) a.push_back(e);
  return a;
}

GroupElement element_from_json(const GroupDescriptor& group, const Json& j) {
  if (!j.is_array()) throw InvalidArgument("group element must be an integer array");
  std::vector<std::int64_t> e;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InvalidArgument("group element entries must be integers");
    e.push_back(v.get<std::int64_t>());
  }
  return GroupElement(group, e);
}

Json to_json(const ExactElement& e) {
  Json terms = Json::array();
  for (const auto& [g, c] : e.terms()) terms.push_back(Json{{"g", to_json(g)}, {"c", c.get_str()}});
  return Json{{"group", to_json(e.group())}, {"coefficients", "exact"}, {"terms", terms}};
}

Json to_json(const RealElement& e) {
  Json terms = Json::array();
  for (const auto& [g, c] : e.terms()) terms.push_back(Json{{"g", to_json(g)}, {"c", c}});
  return Json{{"group", to_json(e.group())}, {"coefficients", "float"}, {"terms", terms}};
}

namespace {

mpq_class coefficient_from_json(const Json& c) {
  if (c.is_string()) {
    try {
      mpq_class q(c.get<std::string>());
      q.canonicalize();
      if (q.get_den() == 0) throw InvalidArgument("zero denominator");
      return q;
    } catch (const std::invalid_argument&) {
      throw InvalidArgument("bad rational coefficient '" + c.get<std::string>() + "'");
    }
  }
  if (c.is_number_integer()) return mpq_class(mpz_class(std::to_string(c.get<std::int64_t>())));
  if (c.is_number()) return mpq_class(c.get<double>());
  throw InvalidArgument("coefficient must be a number or a \"num/den\" string");
}

}  // namespace

ExactElement exact_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("terms")) {
    throw InvalidArgument("ring element needs \"group\" and \"terms\"");
  }
  auto group = group_from_json(j.at("group"));
  ExactElement e(group);
  for (const auto& t : j.at("terms")) e.add_term(element_from_json(group, t.at("g")), coefficient_from_json(t.at("c")));
  return e;
}

RealElement real_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("terms")) {
    throw InvalidArgument("ring element needs \"group\" and \"terms\"");
  }
  auto group = group_from_json(j.at("group"));
  RealElement e(group);
  for (const auto& t : j.at("terms")) {
    const auto& c = t.at("c");
    double v = c.is_string() ? coefficient_from_json(c).get_d() : c.get<double>();
    e.add_term(element_from_json(group, t.at("g")), v);
  }
  return e;
}

Json to_json(const TruncatedSeries& s) {
  return Json{{"value", to_json(s.value)}, {"l1_error", s.l1_error}, {"provenance", s.provenance}};
}

TruncatedSeries series_from_json(const Json& j) {
  TruncatedSeries s;
  s.value = real_from_json(j.at("value"));
  s.l1_error = j.value("l1_error", 0.0);
  s.provenance = j.value("provenance", std::string());
  return s;
}

Json to_json(const Window& w) {
  Json sites = Json::array();
  for (const auto& g : w.elements()) sites.push_back(to_json(g));
  return Json{{"group", to_json(w.group())}, {"radii", w.radii()}, {"sites", sites}};
}

Window window_from_json(const Json& j) {
  auto group = group_from_json(j.at("group"));
  std::vector<std::int64_t> radii;
  if (j.contains("radii")) radii = j.at("radii").get<std::vector<std::int64_t>>();
  if (!j.contains("sites")) {
    if (radii.empty()) throw InvalidArgument("window needs \"sites\" or \"radii\"");
    return box_radii(group, radii);
  }
  std::vector<GroupElement> sites;
  for (const auto& s : j.at("sites")) sites.push_back(element_from_json(group, s));
  return Window(group, std::move(sites), std::move(radii));
}

Json to_json(const Configuration& c) {
  Json values = Json::array();
  for (double v : c.values) {
    if (c.kind == ValueKind::integer) {
      values.push_back(static_cast<std::int64_t>(std::llround(v)));
    } else {
      values.push_back(v);
    }
  }
  return Json{{"window", to_json(c.window)}, {"values", values}, {"kind", value_kind_name(c.kind)}};
}

Configuration configuration_from_json(const Json& j) {
  Configuration c;
  c.window = window_from_json(j.at("window"));
  const auto kind = j.value("kind", std::string("real"));
  if (kind == "torus") {
    c.kind = ValueKind::torus;
  } else if (kind == "integer") {
    c.kind = ValueKind::integer;
  } else if (kind == "real") {
    c.kind = ValueKind::real;
  } else {
    throw InvalidArgument("unknown configuration kind '" + kind + "'");
  }
  c.values = j.at("values").get<std::vector<double>>();
  if (c.values.size() != c.window.size()) throw InvalidArgument("configuration has " + std::to_string(c.values.size()) +
                                                                " values for " + std::to_string(c.window.size()) + " sites");
  return c;
}

ExactElement parse_polynomial(const std::string& text, const GroupDescriptor& group) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(e.byte > 0 ? e.byte - 1 : 0, "invalid JSON ring element");
    }
    ExactElement e = exact_from_json(j);
    if (e.group() != group) throw InvalidArgument("ring element is over " + e.group().name() + ", expected " + group.name());
    return e;
  }
  return parse_expression(text, group);
}

}  // namespace pa
