#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge::simplicial {

// A simplex is a sorted list of distinct 0-based vertex ids.
using Simplex = std::vector<int>;

inline Simplex sorted_simplex(Simplex s) {
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw std::invalid_argument("simplex has repeated vertices");
  return s;
}

/// Pure abstract simplicial complex stored as its sorted list of top
/// simplices; all lower faces are derived on demand. The canonical storage
/// order (lexicographic on vertex tuples) doubles as the canonical index of
/// a top simplex everywhere downstream.
struct AbstractComplex {
  int vertex_count = 0;
  std::vector<Simplex> top_simplices;
  int dim = -1;

  static AbstractComplex from_top(int vertex_count, std::vector<Simplex> tops) {
    AbstractComplex k;
    k.vertex_count = vertex_count;
    for (auto& s : tops) s = sorted_simplex(std::move(s));
    std::sort(tops.begin(), tops.end());
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());
    if (tops.empty()) throw std::invalid_argument("complex has no top simplices");
    k.dim = static_cast<int>(tops.front().size()) - 1;
    for (const auto& s : tops) {
      if (static_cast<int>(s.size()) != k.dim + 1)
        throw std::invalid_argument("complex is not pure");
      if (s.front() < 0 || s.back() >= vertex_count)
        throw std::invalid_argument("vertex id out of range");
    }
    k.top_simplices = std::move(tops);
    return k;
  }

  int top_index(const Simplex& s) const {
    auto it = std::lower_bound(top_simplices.begin(), top_simplices.end(), s);
    if (it == top_simplices.end() || *it != s) return -1;
    return static_cast<int>(it - top_simplices.begin());
  }

  // All faces of dimension k, sorted and de-duplicated.
  std::vector<Simplex> faces(int k) const {
    std::set<Simplex> out;
    std::vector<int> idx(k + 1);
    for (const auto& top : top_simplices) {
      // iterate over (k+1)-subsets of top
      const int n = static_cast<int>(top.size());
      if (k + 1 > n) continue;
      for (int i = 0; i <= k; ++i) idx[i] = i;
      while (true) {
        Simplex f(k + 1);
        for (int i = 0; i <= k; ++i) f[i] = top[idx[i]];
        out.insert(std::move(f));
        int pos = k;
        while (pos >= 0 && idx[pos] == n - (k + 1 - pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i <= k; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
    return {out.begin(), out.end()};
  }

  // All nonempty faces ordered by (dimension, lexicographic).
  std::vector<Simplex> all_faces() const {
    std::vector<Simplex> out;
    for (int k = 0; k <= dim; ++k) {
      auto fk = faces(k);
      out.insert(out.end(), fk.begin(), fk.end());
    }
    return out;
  }

  bool has_face(const Simplex& s) const {
    for (const auto& top : top_simplices)
      if (std::includes(top.begin(), top.end(), s.begin(), s.end())) return true;
    return false;
  }

  bool operator==(const AbstractComplex& o) const {
    return vertex_count == o.vertex_count && top_simplices == o.top_simplices;
  }
};

/// Vertex coloring in colors 1..c; `regular` means endpoints of every edge
/// receive distinct colors.
struct VertexColoring {
  std::vector<int> colors;  // indexed by vertex id, values 1-based
  bool regular = false;
};

inline bool coloring_is_regular(const AbstractComplex& k, const std::vector<int>& colors) {
  for (const auto& top : k.top_simplices)
    for (std::size_t i = 0; i < top.size(); ++i)
      for (std::size_t j = i + 1; j < top.size(); ++j)
        if (colors[top[i]] == colors[top[j]]) return false;
  return true;
}

/// Oriented pseudo-manifold: a pure complex where every ridge lies in exactly
/// two top simplices, plus a sign per top simplex. The sign convention: +1
/// means the sorted vertex list is positively oriented.
struct OrientedPseudoManifold {
  AbstractComplex complex;
  std::vector<int> orientation;  // +1/-1 per top simplex, canonical order
  bool strongly_connected = false;

  int dim() const { return complex.dim; }
};

enum class PmViolation { NonPseudoManifold, NotStronglyConnected, NonOrientable };

inline const char* to_string(PmViolation v) {
  switch (v) {
    case PmViolation::NonPseudoManifold: return "NonPseudoManifold";
    case PmViolation::NotStronglyConnected: return "NotStronglyConnected";
    case PmViolation::NonOrientable: return "NonOrientable";
  }
  return "?";
}

struct PmReport {
  bool pseudo_manifold = false;
  bool strongly_connected = false;
  bool orientable = false;  // meaningful only when pseudo_manifold
  std::vector<PmViolation> violations;
  std::vector<Simplex> bad_ridges;  // ridges contained in != 2 top simplices
  std::optional<OrientedPseudoManifold> value;

  bool ok() const { return value.has_value(); }
};

namespace detail {

// ridge -> (top index, vertex position dropped) incidences
inline std::map<Simplex, std::vector<std::pair<int, int>>> ridge_incidence(
    const AbstractComplex& k) {
  std::map<Simplex, std::vector<std::pair<int, int>>> inc;
  for (int t = 0; t < static_cast<int>(k.top_simplices.size()); ++t) {
    const auto& top = k.top_simplices[t];
    for (int drop = 0; drop < static_cast<int>(top.size()); ++drop) {
      Simplex r;
      r.reserve(top.size() - 1);
      for (int i = 0; i < static_cast<int>(top.size()); ++i)
        if (i != drop) r.push_back(top[i]);
      inc[r].emplace_back(t, drop);
    }
  }
  return inc;
}

}  // namespace detail

/// Checks the pseudo-manifold conditions and, when `orient` is set, computes
/// a consistent orientation by sign propagation over the ridge-adjacency
/// graph (anchor: first top simplex gets +1 per component).
inline PmReport validate_pseudo_manifold(const AbstractComplex& k, bool orient = true) {
  PmReport rep;
  const int tops = static_cast<int>(k.top_simplices.size());
  auto inc = detail::ridge_incidence(k);

  rep.pseudo_manifold = true;
  for (const auto& [ridge, cof] : inc) {
    if (cof.size() != 2) {
      rep.pseudo_manifold = false;
      rep.bad_ridges.push_back(ridge);
    }
  }
  if (!rep.pseudo_manifold) {
    rep.violations.push_back(PmViolation::NonPseudoManifold);
    return rep;
  }

  // connectivity and sign propagation over ridge adjacency
  std::vector<int> sign(tops, 0);
  int components = 0;
  bool orientable = true;
  for (int seed = 0; seed < tops; ++seed) {
    if (sign[seed] != 0) continue;
    ++components;
    sign[seed] = 1;
    std::vector<int> stack{seed};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      const auto& top = k.top_simplices[t];
      for (int drop = 0; drop < static_cast<int>(top.size()); ++drop) {
        Simplex r;
        for (int i = 0; i < static_cast<int>(top.size()); ++i)
          if (i != drop) r.push_back(top[i]);
        const auto& cof = inc[r];
        auto other = cof[0].first == t ? cof[1] : cof[0];
        // boundary signs must cancel: sign[t]*(-1)^drop + sign[u]*(-1)^drop_u = 0
        int forced = -sign[t] * ((drop % 2 == 0) ? 1 : -1) * ((other.second % 2 == 0) ? 1 : -1);
        if (sign[other.first] == 0) {
          sign[other.first] = forced;
          stack.push_back(other.first);
        } else if (sign[other.first] != forced) {
          orientable = false;
        }
      }
    }
  }
  rep.strongly_connected = components == 1;
  rep.orientable = orientable;
  if (!rep.strongly_connected) rep.violations.push_back(PmViolation::NotStronglyConnected);
  if (!orientable) rep.violations.push_back(PmViolation::NonOrientable);
  if (!orient) return rep;
  if (!orientable) return rep;
  rep.value = OrientedPseudoManifold{k, std::move(sign), rep.strongly_connected};
  return rep;
}

/// True when the given sign vector is a consistent orientation: induced
/// boundary signs cancel over every ridge.
inline bool is_valid_orientation(const AbstractComplex& k, const std::vector<int>& signs) {
  if (signs.size() != k.top_simplices.size()) return false;
  for (int s : signs)
    if (s != 1 && s != -1) return false;
  auto inc = detail::ridge_incidence(k);
  for (const auto& [ridge, cof] : inc) {
    (void)ridge;
    if (cof.size() != 2) return false;
    auto sgn = [&](std::pair<int, int> c) {
      return signs[c.first] * (c.second % 2 == 0 ? 1 : -1);
    };
    if (sgn(cof[0]) + sgn(cof[1]) != 0) return false;
  }
  return true;
}

/// Barycentric subdivision. Vertices of the output are the nonempty faces of
/// the input (ordered by dimension, then lexicographically); top simplices
/// are the full flags. The canonical coloring assigns color dim+1 to the
/// vertex sitting on a face; it is regular by construction.
inline std::pair<AbstractComplex, VertexColoring> barycentric_subdivide(
    const AbstractComplex& k) {
  auto faces = k.all_faces();
  std::map<Simplex, int> id;
  for (int i = 0; i < static_cast<int>(faces.size()); ++i) id[faces[i]] = i;

  std::vector<Simplex> tops;
  const int d = k.dim;
  for (const auto& top : k.top_simplices) {
    Simplex perm = top;
    std::sort(perm.begin(), perm.end());
    do {
      Simplex flag(d + 1);
      Simplex partial;
      for (int i = 0; i <= d; ++i) {
        partial.push_back(perm[i]);
        Simplex key = partial;
        std::sort(key.begin(), key.end());
        flag[i] = id.at(key);
      }
      std::sort(flag.begin(), flag.end());
      tops.push_back(std::move(flag));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  auto out = AbstractComplex::from_top(static_cast<int>(faces.size()), std::move(tops));

  VertexColoring col;
  col.colors.resize(faces.size());
  for (int i = 0; i < static_cast<int>(faces.size()); ++i)
    col.colors[i] = static_cast<int>(faces[i].size());  // dim+1
  col.regular = true;
  return {std::move(out), std::move(col)};
}

inline int permutation_parity(std::vector<int> p) {
  // sign of the permutation sorting p ascending
  int swaps = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (static_cast<std::size_t>(p[i]) != i) {
      std::swap(p[i], p[p[i]]);
      ++swaps;
    }
  }
  return swaps % 2 == 0 ? 1 : -1;
}

/// Chess coloring of the top simplices of an oriented pseudo-manifold with a
/// regular (n+1)-coloring: a simplex is white (+1) when ordering its vertices
/// by color yields its positive orientation, black (-1) otherwise.
struct ChessColoring {
  std::vector<int> color;  // +1 white / -1 black, per top simplex
  std::vector<int> whites, blacks;
};

inline ChessColoring chess_coloring(const OrientedPseudoManifold& z,
                                    const VertexColoring& col) {
  const auto& k = z.complex;
  if (!coloring_is_regular(k, col.colors))
    throw std::invalid_argument("chess_coloring: coloring is not regular");
  ChessColoring out;
  out.color.resize(k.top_simplices.size());
  for (int t = 0; t < static_cast<int>(k.top_simplices.size()); ++t) {
    const auto& top = k.top_simplices[t];
    // rank vertices by color; regularity makes colors distinct within top
    std::vector<std::pair<int, int>> by_color;
    for (std::size_t i = 0; i < top.size(); ++i)
      by_color.emplace_back(col.colors[top[i]], static_cast<int>(i));
    std::sort(by_color.begin(), by_color.end());
    std::vector<int> perm(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) perm[i] = by_color[i].second;
    int c = z.orientation[t] * permutation_parity(perm);
    out.color[t] = c;
    (c > 0 ? out.whites : out.blacks).push_back(t);
  }
  // adjacent top simplices must receive opposite colors
  auto inc = detail::ridge_incidence(k);
  for (const auto& [ridge, cof] : inc) {
    (void)ridge;
    if (cof.size() == 2 && out.color[cof[0].first] == out.color[cof[1].first])
      throw std::logic_error("chess_coloring: adjacent simplices share a color");
  }
  return out;
}

/// Simplicial map given by its vertex map; images of simplices may be
/// degenerate (they then contribute 0 to any degree count).
struct SimplicialMap {
  AbstractComplex source, target;
  std::vector<int> vertex_map;  // indexed by source vertex id
};

struct NotSimplicialError : std::runtime_error {
  explicit NotSimplicialError(const std::string& m) : std::runtime_error(m) {}
};
struct InconsistentDegreeError : std::runtime_error {
  explicit InconsistentDegreeError(const std::string& m) : std::runtime_error(m) {}
};

inline void check_simplicial(const SimplicialMap& f) {
  if (static_cast<int>(f.vertex_map.size()) != f.source.vertex_count)
    throw NotSimplicialError("vertex map has the wrong size");
  for (const auto& top : f.source.top_simplices) {
    Simplex image;
    for (int v : top) image.push_back(f.vertex_map[v]);
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    if (!f.target.has_face(image))
      throw NotSimplicialError("image of a simplex does not span a simplex");
  }
}

/// Degree by signed preimage count, verified identical over every target top
/// simplex. Degenerate preimages contribute nothing.
inline int map_degree(const SimplicialMap& f, const OrientedPseudoManifold& z1,
                      const OrientedPseudoManifold& z2) {
  if (z1.dim() != z2.dim()) throw std::invalid_argument("map_degree: dimension mismatch");
  check_simplicial(f);
  std::vector<long long> count(z2.complex.top_simplices.size(), 0);
  for (int t = 0; t < static_cast<int>(z1.complex.top_simplices.size()); ++t) {
    const auto& top = z1.complex.top_simplices[t];
    std::vector<int> image;
    for (int v : top) image.push_back(f.vertex_map[v]);
    Simplex key = image;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end()) continue;  // degenerate
    int ti = z2.complex.top_index(key);
    if (ti < 0) throw NotSimplicialError("nondegenerate image is not a top simplex");
    // parity of image sequence relative to sorted target order
    std::vector<int> rank(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
      rank[i] = static_cast<int>(std::lower_bound(key.begin(), key.end(), image[i]) - key.begin());
    count[ti] += z1.orientation[t] * permutation_parity(rank) * z2.orientation[ti];
  }
  for (std::size_t i = 1; i < count.size(); ++i)
    if (count[i] != count[0])
      throw InconsistentDegreeError("signed preimage count differs between target simplices");
  return static_cast<int>(count[0]);
}

struct DegenerateBaseError : std::runtime_error {
  explicit DegenerateBaseError(const std::string& m) : std::runtime_error(m) {}
};

inline AbstractComplex boundary_of_simplex(int n) {
  // boundary of the n-simplex on vertices 0..n
  std::vector<Simplex> tops;
  for (int drop = 0; drop <= n; ++drop) {
    Simplex s;
    for (int v = 0; v <= n; ++v)
      if (v != drop) s.push_back(v);
    tops.push_back(std::move(s));
  }
  return AbstractComplex::from_top(n + 1, std::move(tops));
}

/// Collapse map onto the boundary of a simplex: the vertices of a base top
/// simplex receive the distinct labels 0..n-1 and every other vertex the
/// label n. The base facet is then the unique nondegenerate preimage of one
/// target facet, which pins |degree| = 1; the degree is re-verified.
struct CollapseResult {
  SimplicialMap map;
  int degree = 0;
};

inline CollapseResult collapse_to_boundary_simplex(const OrientedPseudoManifold& l,
                                                   int base_top = 0) {
  const auto& k = l.complex;
  const int n = k.dim + 1;
  const auto& base = k.top_simplices.at(base_top);
  for (int t = 0; t < static_cast<int>(k.top_simplices.size()); ++t)
    if (t != base_top && k.top_simplices[t] == base)
      throw DegenerateBaseError("two top simplices share the base vertex set");

  SimplicialMap f;
  f.source = k;
  f.target = boundary_of_simplex(n);
  f.vertex_map.assign(k.vertex_count, n);
  for (int i = 0; i < n; ++i) f.vertex_map[base[i]] = i;

  auto target_pm = validate_pseudo_manifold(f.target, true);
  CollapseResult out;
  out.map = f;
  out.degree = map_degree(out.map, l, *target_pm.value);
  return out;
}

/// The unique face of a top simplex whose vertex colors are exactly `colors`.
inline Simplex type_face(const Simplex& top, const std::vector<int>& colors,
                         const VertexColoring& col) {
  Simplex face;
  for (int v : top)
    if (std::find(colors.begin(), colors.end(), col.colors[v]) != colors.end())
      face.push_back(v);
  if (face.size() != colors.size())
    throw std::invalid_argument("type_face: simplex does not carry all requested colors");
  return face;
}

}  // namespace cycleforge::simplicial
