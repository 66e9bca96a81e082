#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "msk/fibred.hpp"
#include "msk/groupoid.hpp"
#include "msk/setsystem.hpp"

namespace msk {

/// A kernel entry remembers the document name of its base map, so the
/// object graph can be serialized by reference.
struct NamedKernel {
  std::string map_name;
  Kernel kernel;

  friend bool operator==(const NamedKernel& a, const NamedKernel& b) {
    return a.map_name == b.map_name && a.kernel == b.kernel;
  }
};

inline bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  if (a.arrows() != b.arrows() || a.unit_count() != b.unit_count()) return false;
  for (int u = 0; u < static_cast<int>(a.unit_count()); ++u)
    if (a.unit_arrow(u) != b.unit_arrow(u)) return false;
  for (int x = 0; x < static_cast<int>(a.arrow_count()); ++x) {
    if (a.range_of(x) != b.range_of(x) || a.source_of(x) != b.source_of(x) ||
        a.inverse_of(x) != b.inverse_of(x))
      return false;
    for (int y = 0; y < static_cast<int>(a.arrow_count()); ++y)
      if (a.compose_idx(x, y) != b.compose_idx(x, y)) return false;
  }
  return true;
}

/// One self-contained tree of named objects: the unit of CLI input and
/// output. All cross-references are by name; rationals ride as strings.
struct Document {
  std::string format_version = "1";
  std::map<std::string, FiniteSpace> spaces;
  std::map<std::string, SpaceMap> maps;
  std::map<std::string, Measure> measures;
  std::map<std::string, NamedKernel> kernels;
  std::map<std::string, FiniteGroupoid> groupoids;
  std::map<std::string, SetFamily> families;

  const FiniteSpace& space(const std::string& name) const {
    auto it = spaces.find(name);
    if (it == spaces.end()) throw InputError("no space named '" + name + "'");
    return it->second;
  }
  const SpaceMap& map_named(const std::string& name) const {
    auto it = maps.find(name);
    if (it == maps.end()) throw InputError("no map named '" + name + "'");
    return it->second;
  }
  const Measure& measure(const std::string& name) const {
    auto it = measures.find(name);
    if (it == measures.end()) throw InputError("no measure named '" + name + "'");
    return it->second;
  }
  const NamedKernel& kernel(const std::string& name) const {
    auto it = kernels.find(name);
    if (it == kernels.end()) throw InputError("no kernel named '" + name + "'");
    return it->second;
  }
  const FiniteGroupoid& groupoid(const std::string& name) const {
    auto it = groupoids.find(name);
    if (it == groupoids.end()) throw InputError("no groupoid named '" + name + "'");
    return it->second;
  }
  const SetFamily& family(const std::string& name) const {
    auto it = families.find(name);
    if (it == families.end()) throw InputError("no set family named '" + name + "'");
    return it->second;
  }

  friend bool operator==(const Document& a, const Document& b) {
    return a.format_version == b.format_version && a.spaces == b.spaces &&
           a.maps == b.maps && a.measures == b.measures && a.kernels == b.kernels &&
           a.groupoids == b.groupoids && a.families == b.families;
  }
};

namespace doc_detail {

using nlohmann::json;

inline const json& expect(const json& j, const char* type_name, bool ok,
                          const std::string& where) {
  if (!ok) throw ParseError(where + ": expected " + type_name);
  return j;
}

inline const json& as_object(const json& j, const std::string& where) {
  return expect(j, "an object", j.is_object(), where);
}
inline const json& as_array(const json& j, const std::string& where) {
  return expect(j, "an array", j.is_array(), where);
}
inline std::string as_string(const json& j, const std::string& where) {
  expect(j, "a string", j.is_string(), where);
  return j.get<std::string>();
}

inline Rational as_rational(const json& j, const std::string& where) {
  if (!j.is_string())
    throw ParseError(where + ": rationals must be strings like \"3/4\", not numbers");
  auto r = Rational::try_parse(j.get<std::string>());
  if (!r) throw ParseError(where + ": malformed rational '" + j.get<std::string>() + "'");
  return *r;
}

inline std::map<std::string, std::string> as_label_map(const json& j, const std::string& where) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : as_object(j, where).items())
    out[k] = as_string(v, where + "." + k);
  return out;
}

/// Total mass map over the points of a space; every point must appear.
inline Measure as_measure_on(const json& j, const FiniteSpace& space, const std::string& where) {
  const json& obj = as_object(j, where);
  std::vector<Rational> mass(space.size());
  std::size_t seen = 0;
  for (const auto& [k, v] : obj.items()) {
    if (!space.contains(k))
      throw ParseError(where + ": unknown point '" + k + "' for space '" + space.id() + "'");
    mass[static_cast<std::size_t>(space.index_of(k))] = as_rational(v, where + "." + k);
    ++seen;
  }
  if (seen != space.size())
    for (const auto& p : space.points())
      if (obj.find(p) == obj.end())
        throw ParseError(where + ": mass map is not total, point '" + p + "' missing");
  return Measure(space, std::move(mass));
}

inline json measure_to_json(const Measure& m) {
  json out = json::object();
  for (std::size_t i = 0; i < m.space().size(); ++i)
    out[m.space().label(static_cast<int>(i))] = m.mass(static_cast<int>(i)).str();
  return out;
}

} // namespace doc_detail

/// Reads and fully validates a document: structure, references, totality and
/// the rational grammar raise ParseError/InputError; violated mathematical
/// invariants (kernel concentration, groupoid axioms) raise their dedicated
/// error types so callers can distinguish a malformed file from a false
/// property.
inline Document parse_document(const std::string& text) {
  using doc_detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("document is not valid JSON: ") + e.what());
  }
  doc_detail::as_object(root, "document");

  static const char* known[] = {"format_version", "spaces", "maps",
                                "measures", "kernels", "groupoids", "families"};
  for (const auto& [k, v] : root.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw ParseError("unknown document section '" + k + "'");
  }

  Document doc;
  if (!root.contains("format_version"))
    throw ParseError("document is missing format_version");
  doc.format_version = doc_detail::as_string(root["format_version"], "format_version");
  if (doc.format_version != "1")
    throw ParseError("unsupported format_version '" + doc.format_version + "'");

  if (root.contains("spaces"))
    for (const auto& [name, j] : doc_detail::as_object(root["spaces"], "spaces").items()) {
      const auto& jj = doc_detail::as_object(j, "space '" + name + "'");
      if (!jj.contains("points"))
        throw ParseError("space '" + name + "' is missing its points");
      std::vector<std::string> points;
      for (const auto& p : doc_detail::as_array(jj["points"], "space '" + name + "'.points"))
        points.push_back(doc_detail::as_string(p, "space '" + name + "' point"));
      doc.spaces.emplace(name, FiniteSpace(name, std::move(points)));
    }

  if (root.contains("maps"))
    for (const auto& [name, j] : doc_detail::as_object(root["maps"], "maps").items()) {
      const auto& jj = doc_detail::as_object(j, "map '" + name + "'");
      for (const char* field : {"domain", "codomain", "assignment"})
        if (!jj.contains(field))
          throw ParseError("map '" + name + "' is missing '" + field + "'");
      const FiniteSpace& dom =
          doc.space(doc_detail::as_string(jj["domain"], "map '" + name + "'.domain"));
      const FiniteSpace& cod =
          doc.space(doc_detail::as_string(jj["codomain"], "map '" + name + "'.codomain"));
      doc.maps.emplace(name, SpaceMap(dom, cod,
          doc_detail::as_label_map(jj["assignment"], "map '" + name + "'.assignment")));
    }

  if (root.contains("measures"))
    for (const auto& [name, j] : doc_detail::as_object(root["measures"], "measures").items()) {
      const auto& jj = doc_detail::as_object(j, "measure '" + name + "'");
      for (const char* field : {"space", "mass"})
        if (!jj.contains(field))
          throw ParseError("measure '" + name + "' is missing '" + field + "'");
      const FiniteSpace& sp =
          doc.space(doc_detail::as_string(jj["space"], "measure '" + name + "'.space"));
      doc.measures.emplace(name,
          doc_detail::as_measure_on(jj["mass"], sp, "measure '" + name + "'.mass"));
    }

  if (root.contains("kernels"))
    for (const auto& [name, j] : doc_detail::as_object(root["kernels"], "kernels").items()) {
      const auto& jj = doc_detail::as_object(j, "kernel '" + name + "'");
      for (const char* field : {"map", "measures"})
        if (!jj.contains(field))
          throw ParseError("kernel '" + name + "' is missing '" + field + "'");
      std::string map_name = doc_detail::as_string(jj["map"], "kernel '" + name + "'.map");
      const SpaceMap& base = doc.map_named(map_name);
      std::map<std::string, Measure> family;
      for (const auto& [y, jm] :
           doc_detail::as_object(jj["measures"], "kernel '" + name + "'.measures").items())
        family.emplace(y, doc_detail::as_measure_on(
                              jm, base.domain(), "kernel '" + name + "'.measures." + y));
      try {
        doc.kernels.emplace(name, NamedKernel{map_name, Kernel::from_family(base, family)});
      } catch (const ConcentrationError& e) {
        throw ConcentrationError(name, e.codomain_point, e.atom, e.mass);
      }
    }

  if (root.contains("groupoids"))
    for (const auto& [name, j] : doc_detail::as_object(root["groupoids"], "groupoids").items()) {
      const auto& jj = doc_detail::as_object(j, "groupoid '" + name + "'");
      for (const char* field : {"arrows", "units", "range", "source", "compose", "inverse"})
        if (!jj.contains(field))
          throw ParseError("groupoid '" + name + "' is missing '" + field + "'");
      const FiniteSpace& arrows =
          doc.space(doc_detail::as_string(jj["arrows"], "groupoid '" + name + "'.arrows"));
      std::vector<std::string> units;
      for (const auto& u : doc_detail::as_array(jj["units"], "groupoid '" + name + "'.units"))
        units.push_back(doc_detail::as_string(u, "groupoid '" + name + "' unit"));
      // Canonical unit order is arrow-space order.
      std::sort(units.begin(), units.end(), [&](const std::string& a, const std::string& b) {
        return arrows.index_of(a) < arrows.index_of(b);
      });
      std::vector<std::array<std::string, 3>> triples;
      for (const auto& t :
           doc_detail::as_array(jj["compose"], "groupoid '" + name + "'.compose")) {
        const auto& ta = doc_detail::as_array(t, "groupoid '" + name + "' compose entry");
        if (ta.size() != 3)
          throw ParseError("groupoid '" + name + "': compose entries are [x, y, xy] triples");
        triples.push_back({doc_detail::as_string(ta[0], "compose.x"),
                           doc_detail::as_string(ta[1], "compose.y"),
                           doc_detail::as_string(ta[2], "compose.xy")});
      }
      FiniteGroupoid g(arrows, units,
                       doc_detail::as_label_map(jj["range"], "groupoid '" + name + "'.range"),
                       doc_detail::as_label_map(jj["source"], "groupoid '" + name + "'.source"),
                       triples,
                       doc_detail::as_label_map(jj["inverse"], "groupoid '" + name + "'.inverse"));
      GroupoidReport rep = g.validate();
      if (!rep.ok) {
        std::string msg = "groupoid '" + name + "' violates the groupoid axioms:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw GroupoidAxiomError(msg);
      }
      doc.groupoids.emplace(name, std::move(g));
    }

  if (root.contains("families"))
    for (const auto& [name, j] : doc_detail::as_object(root["families"], "families").items()) {
      const auto& jj = doc_detail::as_object(j, "family '" + name + "'");
      for (const char* field : {"ground", "members"})
        if (!jj.contains(field))
          throw ParseError("family '" + name + "' is missing '" + field + "'");
      const FiniteSpace& ground =
          doc.space(doc_detail::as_string(jj["ground"], "family '" + name + "'.ground"));
      std::vector<std::vector<std::string>> members;
      for (const auto& m : doc_detail::as_array(jj["members"], "family '" + name + "'.members")) {
        std::vector<std::string> labels;
        for (const auto& l : doc_detail::as_array(m, "family '" + name + "' member"))
          labels.push_back(doc_detail::as_string(l, "family '" + name + "' member label"));
        members.push_back(std::move(labels));
      }
      doc.families.emplace(name, SetFamily(ground, members));
    }

  return doc;
}

/// Canonical serialization: sections in fixed order with alphabetically
/// sorted names, members in canonical order, two-space indent, trailing
/// newline. parse ∘ serialize is the identity on documents, and serialize ∘
/// parse is byte-identical on canonical input.
inline std::string serialize_document(const Document& doc) {
  using doc_detail::json;
  json root;
  root["format_version"] = doc.format_version;

  auto require_space = [&](const std::string& id, const std::string& from) {
    auto it = doc.spaces.find(id);
    if (it == doc.spaces.end() || !(it->second.id() == id))
      throw InputError("cannot serialize " + from + ": it references space '" + id +
                       "' which is not in the document");
  };

  if (!doc.spaces.empty()) {
    json out = json::object();
    for (const auto& [name, s] : doc.spaces) out[name]["points"] = s.points();
    root["spaces"] = std::move(out);
  }
  if (!doc.maps.empty()) {
    json out = json::object();
    for (const auto& [name, m] : doc.maps) {
      require_space(m.domain().id(), "map '" + name + "'");
      require_space(m.codomain().id(), "map '" + name + "'");
      json assignment = json::object();
      for (std::size_t i = 0; i < m.domain().size(); ++i)
        assignment[m.domain().label(static_cast<int>(i))] =
            m.codomain().label(m.apply_index(static_cast<int>(i)));
      out[name] = {{"domain", m.domain().id()},
                   {"codomain", m.codomain().id()},
                   {"assignment", std::move(assignment)}};
    }
    root["maps"] = std::move(out);
  }
  if (!doc.measures.empty()) {
    json out = json::object();
    for (const auto& [name, m] : doc.measures) {
      require_space(m.space().id(), "measure '" + name + "'");
      out[name] = {{"space", m.space().id()},
                   {"mass", doc_detail::measure_to_json(m)}};
    }
    root["measures"] = std::move(out);
  }
  if (!doc.kernels.empty()) {
    json out = json::object();
    for (const auto& [name, nk] : doc.kernels) {
      auto it = doc.maps.find(nk.map_name);
      if (it == doc.maps.end() || it->second != nk.kernel.base_map())
        throw InputError("cannot serialize kernel '" + name + "': its base map '" +
                         nk.map_name + "' is not in the document");
      json fibers = json::object();
      for (std::size_t y = 0; y < nk.kernel.codomain().size(); ++y)
        fibers[nk.kernel.codomain().label(static_cast<int>(y))] =
            doc_detail::measure_to_json(nk.kernel.at(static_cast<int>(y)));
      out[name] = {{"map", nk.map_name}, {"measures", std::move(fibers)}};
    }
    root["kernels"] = std::move(out);
  }
  if (!doc.groupoids.empty()) {
    json out = json::object();
    for (const auto& [name, g] : doc.groupoids) {
      require_space(g.arrows().id(), "groupoid '" + name + "'");
      json units = json::array();
      for (int u = 0; u < static_cast<int>(g.unit_count()); ++u)
        units.push_back(g.arrows().label(g.unit_arrow(u)));
      json range = json::object(), source = json::object(), inverse = json::object();
      json compose = json::array();
      for (int x = 0; x < static_cast<int>(g.arrow_count()); ++x) {
        const std::string& lx = g.arrows().label(x);
        range[lx] = g.arrows().label(g.unit_arrow(g.range_of(x)));
        source[lx] = g.arrows().label(g.unit_arrow(g.source_of(x)));
        inverse[lx] = g.arrows().label(g.inverse_of(x));
        for (int y = 0; y < static_cast<int>(g.arrow_count()); ++y)
          if (g.compose_idx(x, y) >= 0)
            compose.push_back({lx, g.arrows().label(y), g.arrows().label(g.compose_idx(x, y))});
      }
      out[name] = {{"arrows", g.arrows().id()}, {"units", std::move(units)},
                   {"range", std::move(range)}, {"source", std::move(source)},
                   {"compose", std::move(compose)}, {"inverse", std::move(inverse)}};
    }
    root["groupoids"] = std::move(out);
  }
  if (!doc.families.empty()) {
    json out = json::object();
    for (const auto& [name, f] : doc.families) {
      require_space(f.ground().id(), "family '" + name + "'");
      json members = json::array();
      for (const auto& labels : f.member_labels()) members.push_back(labels);
      out[name] = {{"ground", f.ground().id()}, {"members", std::move(members)}};
    }
    root["families"] = std::move(out);
  }

  return root.dump(2) + "\n";
}

} // namespace msk
