#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cycleforge/coxeter.hpp"
#include "cycleforge/realization.hpp"
#include "cycleforge/simplicial.hpp"
#include "cycleforge/small_cover.hpp"
#include "cycleforge/sphere_maps.hpp"

namespace cycleforge::io {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

struct ComplexFile {
  simplicial::AbstractComplex complex;
  std::optional<simplicial::VertexColoring> coloring;
  std::optional<std::vector<int>> orientation;
};

// {"kind":"complex","dim":n,"vertex_count":m,"top_simplices":[[...]],
//  "coloring":[...], "orientation":[...]} - the last two optional
inline ComplexFile parse_complex(const json& j) {
  try {
    if (j.value("kind", "") != "complex") throw ParseError("expected kind \"complex\"");
    ComplexFile out;
    std::vector<simplicial::Simplex> tops;
    for (const auto& s : j.at("top_simplices")) tops.push_back(s.get<simplicial::Simplex>());
    out.complex =
        simplicial::AbstractComplex::from_top(j.at("vertex_count").get<int>(), std::move(tops));
    if (j.contains("dim") && j.at("dim").get<int>() != out.complex.dim)
      throw ParseError("declared dim disagrees with the top simplices");
    if (j.contains("coloring")) {
      simplicial::VertexColoring col;
      col.colors = j.at("coloring").get<std::vector<int>>();
      if (static_cast<int>(col.colors.size()) != out.complex.vertex_count)
        throw ParseError("coloring has the wrong length");
      col.regular = simplicial::coloring_is_regular(out.complex, col.colors);
      out.coloring = std::move(col);
    }
    if (j.contains("orientation")) {
      auto o = j.at("orientation").get<std::vector<int>>();
      if (o.size() != out.complex.top_simplices.size())
        throw ParseError("orientation has the wrong length");
      out.orientation = std::move(o);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("complex file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("complex file: ") + e.what());
  }
}

inline json complex_to_json(const simplicial::AbstractComplex& k,
                            const std::optional<simplicial::VertexColoring>& col = std::nullopt,
                            const std::optional<std::vector<int>>& orient = std::nullopt) {
  json j;
  j["kind"] = "complex";
  j["dim"] = k.dim;
  j["vertex_count"] = k.vertex_count;
  j["top_simplices"] = k.top_simplices;
  if (col) j["coloring"] = col->colors;
  if (orient) j["orientation"] = *orient;
  return j;
}

// {"kind":"poset","elements":k,"less":[[i,j],...]}
inline coxeter::Poset parse_poset(const json& j) {
  try {
    if (j.value("kind", "") != "poset") throw ParseError("expected kind \"poset\"");
    int k = j.at("elements").get<int>();
    std::vector<std::pair<int, int>> rel;
    for (const auto& e : j.at("less")) rel.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return coxeter::Poset::from_relations(k, rel);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("poset file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("poset file: ") + e.what());
  }
}

// {"kind":"lambda","rank":n,"values":[bitmask,...]}
inline small_cover::CharacteristicFunction parse_lambda(const json& j) {
  try {
    if (j.value("kind", "") != "lambda") throw ParseError("expected kind \"lambda\"");
    small_cover::CharacteristicFunction lam;
    lam.rank = j.at("rank").get<int>();
    for (const auto& v : j.at("values")) lam.values.push_back(v.get<uint32_t>());
    return lam;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("lambda file: ") + e.what());
  }
}

// {"kind":"map","source":{complex},"target":{complex},"vertex_map":[...]}
inline simplicial::SimplicialMap parse_map(const json& j) {
  try {
    if (j.value("kind", "") != "map") throw ParseError("expected kind \"map\"");
    simplicial::SimplicialMap f;
    f.source = parse_complex(j.at("source")).complex;
    f.target = parse_complex(j.at("target")).complex;
    f.vertex_map = j.at("vertex_map").get<std::vector<int>>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("map file: ") + e.what());
  }
}

// {"complex":{...},"vectors":[[...],...],"exact":bool}
struct PlacementFile {
  simplicial::AbstractComplex complex;
  std::vector<sphere_maps::Vec> vectors;
  std::optional<std::vector<RationalVec>> exact;
};

inline PlacementFile parse_placement(const json& j) {
  try {
    PlacementFile out;
    out.complex = parse_complex(j.at("complex")).complex;
    // coordinates may be numbers or exact strings like "15/17"
    for (const auto& v : j.at("vectors")) {
      sphere_maps::Vec vec;
      for (const auto& x : v)
        vec.push_back(x.is_string() ? to_double(parse_rational(x.get<std::string>()))
                                    : x.get<double>());
      out.vectors.push_back(std::move(vec));
    }
    if (j.value("exact", false)) {
      std::vector<RationalVec> ex;
      for (const auto& v : j.at("vectors")) {
        RationalVec rv;
        for (const auto& x : v) {
          if (x.is_string())
            rv.push_back(parse_rational(x.get<std::string>()));
          else
            rv.push_back(parse_rational(x.dump()));
        }
        ex.push_back(std::move(rv));
      }
      out.exact = std::move(ex);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("placement file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("placement file: ") + e.what());
  }
}

// {"kind":"pairings","n":n,"perms":[[...],...]} in ascending omega-mask order
inline realization::PairingFamily parse_pairings(const json& j, int n) {
  try {
    if (j.value("kind", "") != "pairings") throw ParseError("expected kind \"pairings\"");
    realization::PairingFamily fam;
    fam.n = j.value("n", n);
    if (fam.n != n) throw ParseError("pairings dimension disagrees with the input");
    fam.omegas = realization::omega_masks(n);
    for (const auto& p : j.at("perms")) fam.lambda.push_back(p.get<std::vector<int>>());
    if (fam.lambda.size() != fam.omegas.size())
      throw ParseError("pairings file must list one permutation per omega");
    return fam;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pairings file: ") + e.what());
  }
}

}  // namespace cycleforge::io
