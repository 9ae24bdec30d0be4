#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cycleforge/simplicial.hpp"

namespace cycleforge::small_cover {

using simplicial::AbstractComplex;
using simplicial::Simplex;

/// Dual simple cell input: a pure (n-1)-complex K (facets of the cell are
/// the vertices of K, faces its simplices) plus its pseudo-manifold status.
struct SimpleCellInput {
  AbstractComplex K;
  int n = 0;  // dimension of the dual cell
  simplicial::PmReport pm;

  static SimpleCellInput analyze(AbstractComplex k) {
    SimpleCellInput in;
    in.n = k.dim + 1;
    in.pm = simplicial::validate_pseudo_manifold(k, true);
    in.K = std::move(k);
    return in;
  }
};

// --- Z2 linear algebra on bitmasks -------------------------------------------

struct Gf2Basis {
  std::vector<uint32_t> rows;  // row-echelon, distinct leading bits

  // rows stay sorted by descending leading bit; reduce() then yields the
  // minimum of the coset, which is the canonical representative
  bool insert(uint32_t v) {  // returns false when v was already in the span
    for (uint32_t r : rows) v = std::min(v, v ^ r);
    if (!v) return false;
    rows.push_back(v);
    std::sort(rows.begin(), rows.end(), std::greater<>());
    return true;
  }

  uint32_t reduce(uint32_t v) const {
    for (uint32_t r : rows) v = std::min(v, v ^ r);
    return v;
  }

  int rank() const { return static_cast<int>(rows.size()); }
  bool contains(uint32_t v) const { return reduce(v) == 0; }
};

/// Characteristic function: one nonzero Z2^rank vector per facet; on every
/// top simplex the attached vectors must span.
struct CharacteristicFunction {
  int rank = 0;
  std::vector<uint32_t> values;  // indexed by vertex of K
};

struct CharacteristicCheck {
  bool ok = false;
  Simplex offending;  // first rank-deficient top simplex when !ok
};

inline CharacteristicCheck validate_characteristic(const SimpleCellInput& cell,
                                                   const CharacteristicFunction& lambda) {
  CharacteristicCheck out;
  if (static_cast<int>(lambda.values.size()) != cell.K.vertex_count)
    throw std::invalid_argument("characteristic function not total on facets");
  for (const auto& top : cell.K.top_simplices) {
    Gf2Basis b;
    for (int v : top) b.insert(lambda.values[v]);
    if (b.rank() != cell.n) {
      out.offending = top;
      return out;
    }
  }
  out.ok = true;
  return out;
}

// --- quotient construction ----------------------------------------------------

struct InvalidCharacteristicError : std::runtime_error {
  explicit InvalidCharacteristicError(const std::string& m) : std::runtime_error(m) {}
};

/// Cell complex of (P x Z2^r)/~ : one cell per (face of the dual cell,
/// canonical coset representative). Face index 0 is the empty face (the
/// body); faces follow K.all_faces() order shifted by one.
struct QuotientComplex {
  int rank = 0;  // r
  int n = 0;     // top cell dimension
  std::vector<uint32_t> assignment;        // generator per facet
  std::vector<Simplex> faces;              // faces[0] = {} (body)
  std::vector<Gf2Basis> span;              // face subgroup, echelonized
  std::vector<std::vector<uint32_t>> cells;  // canonical reps, sorted, per face
  bool orientable_by_parity = false;       // all generators have odd popcount

  int cell_dim(std::size_t face_idx) const {
    return n - static_cast<int>(faces[face_idx].size());
  }

  uint64_t total_cells() const {
    uint64_t s = 0;
    for (const auto& c : cells) s += c.size();
    return s;
  }

  std::vector<uint64_t> f_vector() const {
    std::vector<uint64_t> f(n + 1, 0);
    for (std::size_t i = 0; i < faces.size(); ++i) f[cell_dim(i)] += cells[i].size();
    return f;
  }

  long long euler() const {
    long long chi = 0;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      long long c = static_cast<long long>(cells[i].size());
      chi += (cell_dim(i) % 2 == 0) ? c : -c;
    }
    return chi;
  }
};

inline QuotientComplex build_quotient(const SimpleCellInput& cell,
                                      const std::vector<uint32_t>& assignment, int rank,
                                      uint64_t max_cells = uint64_t(1) << 24) {
  if (static_cast<int>(assignment.size()) != cell.K.vertex_count)
    throw std::invalid_argument("assignment not total on facets");
  if (rank < 1 || rank > 30) throw std::invalid_argument("rank out of range");
  if (rank == cell.n) {
    CharacteristicFunction lam{rank, assignment};
    if (!validate_characteristic(cell, lam).ok)
      throw InvalidCharacteristicError("assignment violates the spanning condition");
  }

  QuotientComplex q;
  q.rank = rank;
  q.n = cell.n;
  q.assignment = assignment;
  q.faces.push_back({});
  auto all = cell.K.all_faces();
  q.faces.insert(q.faces.end(), all.begin(), all.end());

  uint64_t budget = 0;
  q.span.resize(q.faces.size());
  q.cells.resize(q.faces.size());
  for (std::size_t fi = 0; fi < q.faces.size(); ++fi) {
    for (int v : q.faces[fi]) q.span[fi].insert(assignment[v]);
    uint64_t count = uint64_t(1) << (rank - q.span[fi].rank());
    budget += count;
    if (budget > max_cells) throw std::length_error("quotient exceeds the cell budget");
    // canonical representatives: exactly the vectors vanishing on the span's
    // leading bits, generated by spreading a counter over the free bits
    std::vector<uint32_t>& reps = q.cells[fi];
    uint32_t lead = 0;
    for (uint32_t row : q.span[fi].rows) lead |= (uint32_t(1) << (31 - std::countl_zero(row)));
    std::vector<int> free_bits;
    for (int b = 0; b < rank; ++b)
      if (!(lead >> b & 1u)) free_bits.push_back(b);
    for (uint64_t c = 0; c < (uint64_t(1) << free_bits.size()); ++c) {
      uint32_t g = 0;
      for (std::size_t i = 0; i < free_bits.size(); ++i)
        if (c >> i & 1u) g |= uint32_t(1) << free_bits[i];
      reps.push_back(g);
    }
    if (reps.size() != count) throw std::logic_error("coset enumeration mismatch");
  }

  q.orientable_by_parity = true;
  for (uint32_t a : assignment)
    if (std::popcount(a) % 2 == 0) q.orientable_by_parity = false;
  return q;
}

// real moment-angle construction: one standard generator per facet
inline QuotientComplex build_real_moment_angle(const SimpleCellInput& cell,
                                               uint64_t max_cells = uint64_t(1) << 24) {
  std::vector<uint32_t> gens(cell.K.vertex_count);
  for (int i = 0; i < cell.K.vertex_count; ++i) gens[i] = uint32_t(1) << i;
  return build_quotient(cell, gens, cell.K.vertex_count, max_cells);
}

struct LocalCheck {
  long long euler = 0;
  bool local_ok = false;  // every vertex in exactly 2^n top cells
  uint64_t vertices_checked = 0;
  std::vector<std::pair<Simplex, uint32_t>> violations;
};

/// Euler characteristic plus the vertex-local standardness diagnostic,
/// counted by honest enumeration over the top cells.
inline LocalCheck euler_and_local_check(const QuotientComplex& q) {
  LocalCheck out;
  out.euler = q.euler();
  out.local_ok = true;
  const uint64_t expected = uint64_t(1) << q.n;
  for (std::size_t fi = 0; fi < q.faces.size(); ++fi) {
    if (q.cell_dim(fi) != 0) continue;  // vertices only
    for (uint32_t rep : q.cells[fi]) {
      ++out.vertices_checked;
      uint64_t touching = 0;
      for (uint32_t g = 0; g < (uint32_t(1) << q.rank); ++g)
        if (q.span[fi].contains(g ^ rep)) ++touching;
      if (touching != expected) {
        out.local_ok = false;
        out.violations.emplace_back(q.faces[fi], rep);
      }
    }
  }
  return out;
}

// --- induced domination -----------------------------------------------------------

struct ZeroDegreeInputError : std::runtime_error {
  ZeroDegreeInputError() : std::runtime_error("induced_domination: map has degree zero") {}
};

struct DominationResult {
  int phi_degree = 0;
  long long cell_degree = 0;              // signed fiber count, constant over targets
  std::vector<uint32_t> top_cell_map;     // source coset -> target coset (mu)
};

/// Lifts a nonzero-degree simplicial map of the dual complexes to the cell
/// map [p,g] -> [phi(p), mu(g)] of the real moment-angle quotients and
/// computes the total degree by a signed fiber count over every target top
/// cell. With coset-parity orientations the count is 2^(m1-m2) * deg(phi).
inline DominationResult induced_domination(const simplicial::SimplicialMap& phi,
                                           const simplicial::OrientedPseudoManifold& z1,
                                           const simplicial::OrientedPseudoManifold& z2) {
  DominationResult out;
  out.phi_degree = simplicial::map_degree(phi, z1, z2);
  if (out.phi_degree == 0) throw ZeroDegreeInputError();
  const int m1 = z1.complex.vertex_count;
  const int m2 = z2.complex.vertex_count;
  if (m1 > 22) throw std::length_error("induced_domination: source rank too large");

  out.top_cell_map.resize(uint64_t(1) << m1);
  for (uint32_t g = 0; g < (uint32_t(1) << m1); ++g) {
    uint32_t h = 0;
    for (int i = 0; i < m1; ++i)
      if (g >> i & 1u) h ^= uint32_t(1) << phi.vertex_map[i];
    out.top_cell_map[g] = h;
  }

  std::vector<long long> fiber(uint64_t(1) << m2, 0);
  for (uint32_t g = 0; g < (uint32_t(1) << m1); ++g) {
    uint32_t h = out.top_cell_map[g];
    int sign = ((std::popcount(g) + std::popcount(h)) % 2 == 0) ? 1 : -1;
    fiber[h] += sign * out.phi_degree;
  }
  for (std::size_t h = 1; h < fiber.size(); ++h)
    if (fiber[h] != fiber[0])
      throw simplicial::InconsistentDegreeError("cell fiber count not constant");
  out.cell_degree = fiber[0];
  return out;
}

// --- flag and empty-square predicates --------------------------------------------

struct FlagSquareReport {
  bool is_flag = false;
  bool has_empty_4_circuit = false;
  Simplex flag_witness;           // a minimal clique that spans no simplex
  std::vector<int> square_witness;  // u1 u2 u3 u4 of an empty 4-circuit
};

inline FlagSquareReport flag_square_predicates(const AbstractComplex& k) {
  FlagSquareReport rep;
  const int m = k.vertex_count;
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (const auto& e : k.faces(1)) adj[e[0]][e[1]] = adj[e[1]][e[0]] = 1;

  // flag test: grow cliques; every clique must span a simplex
  rep.is_flag = true;
  std::vector<int> clique;
  auto extend = [&](auto&& self, int start) -> bool {
    if (clique.size() >= 3 && !k.has_face(clique)) {
      rep.is_flag = false;
      rep.flag_witness = clique;
      return false;
    }
    for (int v = start; v < m; ++v) {
      bool joined = true;
      for (int u : clique)
        if (!adj[u][v]) {
          joined = false;
          break;
        }
      if (!joined) continue;
      clique.push_back(v);
      if (!self(self, v + 1)) return false;
      clique.pop_back();
    }
    return true;
  };
  extend(extend, 0);

  // empty 4-circuits: chordless u1 u2 u3 u4
  for (int u1 = 0; u1 < m && !rep.has_empty_4_circuit; ++u1)
    for (int u3 = u1 + 1; u3 < m && !rep.has_empty_4_circuit; ++u3) {
      if (adj[u1][u3]) continue;
      std::vector<int> common;
      for (int v = 0; v < m; ++v)
        if (v != u1 && v != u3 && adj[u1][v] && adj[u3][v]) common.push_back(v);
      for (std::size_t a = 0; a < common.size() && !rep.has_empty_4_circuit; ++a)
        for (std::size_t b = a + 1; b < common.size(); ++b)
          if (!adj[common[a]][common[b]]) {
            rep.has_empty_4_circuit = true;
            rep.square_witness = {u1, common[a], u3, common[b]};
            break;
          }
    }
  return rep;
}

/// Deterministic lexicographic backtracking search for a regular coloring of
/// the facets (vertices of K) in `ncolors` colors.
inline std::optional<std::vector<int>> facet_coloring_search(const AbstractComplex& k,
                                                             int ncolors) {
  const int m = k.vertex_count;
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (const auto& e : k.faces(1)) adj[e[0]][e[1]] = adj[e[1]][e[0]] = 1;
  std::vector<int> color(m, 0);
  auto rec = [&](auto&& self, int v) -> bool {
    if (v == m) return true;
    for (int c = 1; c <= ncolors; ++c) {
      bool fits = true;
      for (int u = 0; u < v; ++u)
        if (adj[u][v] && color[u] == c) {
          fits = false;
          break;
        }
      if (!fits) continue;
      color[v] = c;
      if (self(self, v + 1)) return true;
      color[v] = 0;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return color;
}

}  // namespace cycleforge::small_cover
