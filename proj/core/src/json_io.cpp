#include "rlab/json_io.hpp"

namespace rlab {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

const Json& array_field(const Json& j, const char* key, const char* what) {
  const Json& a = field(j, key, what);
  if (!a.is_array()) throw InvalidInput(std::string(what) + " field \"" + key + "\" must be an array");
  return a;
}

std::string literal_of(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.dump();
  throw InvalidInput("numbers must be string literals, got " + j.dump());
}

std::vector<Rational> rational_list(const Json& a, bool& fraction_seen) {
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& item : a) {
    const std::string text = literal_of(item);
    fraction_seen = fraction_seen || is_fraction_literal(text);
    out.push_back(parse_rational(text));
  }
  return out;
}

AtomSet atom_set_from_json(const Json& a, std::size_t universe) {
  if (!a.is_array()) throw InvalidInput("atom set must be an array of indices");
  AtomSet out(universe);
  for (const auto& item : a) {
    if (!item.is_number_unsigned()) throw InvalidInput("atom index must be a nonnegative integer");
    const auto i = item.get<std::size_t>();
    if (i >= universe) throw InvalidInput("atom index " + std::to_string(i) + " out of range");
    out.insert(i);
  }
  return out;
}

Exponent exponent_from_json(const Json& j) { return Exponent::parse(literal_of(j)); }

}  // namespace

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

template <Scalar T>
T scalar_from_json(const Json& j) {
  return parse_scalar<T>(literal_of(j));
}

Json instance_to_json(const Instance& instance) {
  Json weights = Json::array();
  for (const auto& w : instance.weights) weights.push_back(to_string(w));
  Json functions = Json::object();
  for (const auto& [name, values] : instance.functions) {
    Json v = Json::array();
    for (const auto& x : values) v.push_back(to_string(x));
    functions[name] = std::move(v);
  }
  return Json{{"space", {{"weights", std::move(weights)}}}, {"functions", std::move(functions)}};
}

Instance instance_from_json(const Json& j) {
  Instance out;
  const Json& space = field(j, "space", "instance");
  out.weights = rational_list(array_field(space, "weights", "space"), out.fraction_literals);
  const Json& functions = field(j, "functions", "instance");
  if (!functions.is_object()) throw InvalidInput("instance \"functions\" must be an object");
  for (const auto& [name, values] : functions.items()) {
    if (!values.is_array()) throw InvalidInput("function '" + name + "' must be an array");
    auto parsed = rational_list(values, out.fraction_literals);
    if (parsed.size() != out.weights.size()) {
      throw InvalidInput("function '" + name + "' has " + std::to_string(parsed.size()) + " values for " +
                         std::to_string(out.weights.size()) + " atoms");
    }
    out.functions.emplace(name, std::move(parsed));
  }
  return out;
}

template <Scalar T>
Json profile_to_json(const StepProfile<T>& profile) {
  Json segments = Json::array();
  for (const auto& s : profile.segments()) segments.push_back({to_string(s.value), to_string(s.length)});
  return Json{{"segments", std::move(segments)}};
}

template <Scalar T>
StepProfile<T> profile_from_json(const Json& j) {
  std::vector<Segment<T>> segments;
  for (const auto& item : array_field(j, "segments", "profile")) {
    if (!item.is_array() || item.size() != 2) throw InvalidInput("segment must be a [value, length] pair");
    segments.push_back({scalar_from_json<T>(item[0]), scalar_from_json<T>(item[1])});
  }
  return StepProfile<T>::from_segments(std::move(segments));
}

Json decomposition_to_json(const BlockDecomposition& decomposition) {
  Json blocks = Json::array();
  for (const auto& block : decomposition.blocks) {
    blocks.push_back({{"a", to_string(block.a)},
                      {"A", block.A.indices()},
                      {"b", to_string(block.b)},
                      {"B", block.B.indices()}});
  }
  return Json{{"blocks", std::move(blocks)}};
}

BlockDecomposition decomposition_from_json(const Json& j, SpacePtr<Rational> space) {
  BlockDecomposition out;
  const std::size_t n = space->size();
  out.space = std::move(space);
  for (const auto& item : array_field(j, "blocks", "decomposition")) {
    ZeroMeanBlock block;
    block.a = scalar_from_json<Rational>(field(item, "a", "block"));
    block.A = atom_set_from_json(field(item, "A", "block"), n);
    block.b = scalar_from_json<Rational>(field(item, "b", "block"));
    block.B = atom_set_from_json(field(item, "B", "block"), n);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

Json norm_to_json(const RINorm& norm) {
  switch (norm.kind()) {
    case RINorm::Kind::Lp:
      return Json{{"kind", "lp"}, {"p", norm.exponent().to_string()}};
    case RINorm::Kind::Lorentz: {
      Json phi = Json::array();
      for (const auto& pt : norm.weight().points()) phi.push_back({to_string(pt.t), to_string(pt.phi)});
      return Json{{"kind", "lorentz"}, {"phi", std::move(phi)}};
    }
    case RINorm::Kind::Generated:
      return Json{{"kind", "generated"}, {"base", norm_to_json(norm.base())}, {"p", norm.exponent().to_string()}};
    case RINorm::Kind::Associate:
      return Json{{"kind", "associate"}, {"base", norm_to_json(norm.base())}};
  }
  throw InvalidInput("unknown norm kind");
}

RINorm norm_from_json(const Json& j) {
  const Json& kind_field = field(j, "kind", "norm descriptor");
  if (!kind_field.is_string()) throw InvalidInput("norm \"kind\" must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "lp") return RINorm::lp(exponent_from_json(field(j, "p", "lp norm")));
  if (kind == "lorentz") {
    std::vector<ConcaveWeight::Point> points;
    for (const auto& item : array_field(j, "phi", "lorentz norm")) {
      if (!item.is_array() || item.size() != 2) throw InvalidInput("phi breakpoint must be a [t, phi] pair");
      points.push_back({scalar_from_json<Rational>(item[0]), scalar_from_json<Rational>(item[1])});
    }
    return RINorm::lorentz(ConcaveWeight(std::move(points)));
  }
  if (kind == "associate") return RINorm::associate(norm_from_json(field(j, "base", "associate norm")));
  if (kind == "generated") {
    return RINorm::generated(norm_from_json(field(j, "base", "generated norm")),
                             exponent_from_json(field(j, "p", "generated norm")));
  }
  throw InvalidInput("unknown norm kind '" + kind + "'");
}

#define RLAB_INSTANTIATE(T)                                      \
  template T scalar_from_json<T>(const Json&);                   \
  template Json profile_to_json(const StepProfile<T>&);          \
  template StepProfile<T> profile_from_json<T>(const Json&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)
RLAB_INSTANTIATE(Quad)

#undef RLAB_INSTANTIATE

}  // namespace rlab
