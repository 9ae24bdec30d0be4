#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cycleforge/coxeter.hpp"
#include "cycleforge/parallel.hpp"
#include "cycleforge/rational.hpp"
#include "cycleforge/simplicial.hpp"

namespace cycleforge::permutahedron {

// Facets of the n-permutahedron are indexed by nonempty proper subsets of
// {1,...,n+1}, encoded as bitmasks over bits 0..n. The canonical order is
// ascending mask value.

inline std::vector<uint32_t> omega_elements(int n) {
  std::vector<uint32_t> out;
  uint32_t full = (1u << (n + 1)) - 1;
  for (uint32_t m = 1; m < full; ++m) out.push_back(m);
  return out;
}

inline int omega_index(uint32_t mask) { return static_cast<int>(mask) - 1; }

inline bool strict_subset(uint32_t a, uint32_t b) { return a != b && (a & b) == a; }

/// Poset of nonempty proper subsets ordered by strict inclusion; element ids
/// follow the canonical mask order.
inline coxeter::Poset omega_poset(int n) {
  auto elems = omega_elements(n);
  coxeter::Poset p = coxeter::Poset::empty(static_cast<int>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (strict_subset(elems[i], elems[j])) p.less[i][j] = 1;
  return p;
}

/// K of the permutahedron: vertex set = subsets, simplices = inclusion
/// chains. Comes with the explicit vertex bijection onto the barycentric
/// subdivision of the simplex boundary.
struct DualComplex {
  int n = 0;
  simplicial::AbstractComplex complex;         // on |Omega| vertices, mask order
  simplicial::AbstractComplex delta_boundary;  // boundary of the n-simplex
  simplicial::AbstractComplex delta_prime;     // its barycentric subdivision
  std::vector<int> iso;                        // omega id -> vertex of delta_prime
  bool iso_verified = false;
};

inline DualComplex dual_complex(int n) {
  DualComplex out;
  out.n = n;
  auto elems = omega_elements(n);

  // top simplices: maximal chains w1 c w2 c ... c wn
  std::vector<simplicial::Simplex> tops;
  std::vector<int> chain;
  auto grow = [&](auto&& self, uint32_t mask) -> void {
    chain.push_back(omega_index(mask));
    if (static_cast<int>(chain.size()) == n) {
      simplicial::Simplex s = chain;
      std::sort(s.begin(), s.end());
      tops.push_back(std::move(s));
    } else {
      for (uint32_t next : elems)
        if (strict_subset(mask, next)) self(self, next);
    }
    chain.pop_back();
  };
  for (uint32_t m : elems)
    if (std::popcount(m) == 1) grow(grow, m);
  out.complex = simplicial::AbstractComplex::from_top(static_cast<int>(elems.size()),
                                                      std::move(tops));

  out.delta_boundary = simplicial::boundary_of_simplex(n);
  auto [prime, col] = simplicial::barycentric_subdivide(out.delta_boundary);
  (void)col;
  out.delta_prime = std::move(prime);

  // vertex rule: omega -> face of the simplex with vertices {i-1 : i in omega}
  auto faces = out.delta_boundary.all_faces();
  std::map<simplicial::Simplex, int> face_id;
  for (int i = 0; i < static_cast<int>(faces.size()); ++i) face_id[faces[i]] = i;
  out.iso.resize(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    simplicial::Simplex f;
    for (int b = 0; b <= n; ++b)
      if (elems[i] >> b & 1u) f.push_back(b);
    out.iso[i] = face_id.at(f);
  }

  // verify the bijection is a simplicial isomorphism onto delta_prime
  std::vector<simplicial::Simplex> mapped;
  for (const auto& s : out.complex.top_simplices) {
    simplicial::Simplex im;
    for (int v : s) im.push_back(out.iso[v]);
    std::sort(im.begin(), im.end());
    mapped.push_back(std::move(im));
  }
  std::sort(mapped.begin(), mapped.end());
  out.iso_verified = mapped == out.delta_prime.top_simplices &&
                     out.complex.vertex_count == out.delta_prime.vertex_count;
  return out;
}

/// Exact coordinates: all (n+1)! permutations of (1,...,n+1), the center,
/// and the facet right-hand sides.
struct PermGeometry {
  int n = 0;
  std::vector<std::vector<int>> vertices;  // lexicographic order
  RationalVec center;
  Rational squared_circumradius;  // n(n+1)(n+2)/12

  Rational facet_rhs(uint32_t mask) const {
    int k = std::popcount(mask);
    return Rational((n + 1) * (n + 2) - (n - k + 1) * (n - k + 2), 2);
  }

  bool vertex_on_facet(const std::vector<int>& v, uint32_t mask) const {
    long long s = 0;
    for (int b = 0; b <= n; ++b)
      if (mask >> b & 1u) s += v[b];
    return Rational(s) == facet_rhs(mask);
  }

  std::vector<int> vertices_on_facet(uint32_t mask) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
      if (vertex_on_facet(vertices[i], mask)) out.push_back(i);
    return out;
  }
};

inline PermGeometry build_geometry(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("build_geometry: n out of supported range");
  PermGeometry g;
  g.n = n;
  std::vector<int> perm(n + 1);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    g.vertices.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  g.center.assign(n + 1, Rational(n + 2, 2));
  g.squared_circumradius = Rational(n * (n + 1) * (n + 2), 12);
  return g;
}

/// Constants of the fine/sparse machinery. All trigonometric values are
/// evaluated in extended precision; the exact squared radii accompany them.
struct ConstantsTable {
  int n = 0;
  long double eps = 0;  // arccos(1 - 12/(n(n+1)(n+2)))
  long double rho = 0;  // log(sqrt(T) + sqrt(T-1)), T = n(n+1)(n+2)/6
  long double circumradius = 0;
  long double facet_inradius = 0;  // sqrt(n(n+1))/2
  long double identity_residual = 0;  // |rho - arsinh cot(eps/2)|
  Rational squared_circumradius;
  Rational squared_facet_inradius;
};

inline ConstantsTable constants(int n) {
  if (n < 1) throw std::invalid_argument("constants: n must be >= 1");
  ConstantsTable t;
  t.n = n;
  const long double prod = static_cast<long double>(n) * (n + 1) * (n + 2);
  t.eps = std::acos(1.0L - 12.0L / prod);
  const long double bigT = prod / 6.0L;
  t.rho = std::log(std::sqrt(bigT) + std::sqrt(bigT - 1.0L));
  t.circumradius = std::sqrt(prod / 12.0L);
  t.facet_inradius = 0.5L * std::sqrt(static_cast<long double>(n) * (n + 1));
  const long double cot_half = std::cos(t.eps / 2) / std::sin(t.eps / 2);
  t.identity_residual = std::fabs(t.rho - std::asinh(cot_half));
  t.squared_circumradius = Rational(n * (n + 1) * (n + 2), 12);
  t.squared_facet_inradius = Rational(n * (n + 1), 4);
  return t;
}

// --- sparseness certificate --------------------------------------------------

struct SparseViolation {
  uint32_t omega1 = 0, omega2 = 0;
  std::string kind;  // "vertex_pair", "sample_pair", "diameter"
};

struct SparseReport {
  int n = 0;
  uint64_t vertex_pairs_checked = 0;
  uint64_t sample_pairs_checked = 0;
  int facets_checked = 0;
  std::vector<SparseViolation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

// exact test: cos dist(h(x), h(y)) <= 1 - 1/R^2 for xi = x-o, eta = y-o
inline bool cos_bound_holds(const RationalVec& xi, const RationalVec& eta,
                            const Rational& r2) {
  Rational c = 1 - Rational(1) / r2;
  Rational d = dot(xi, eta);
  if (d <= 0 && c >= 0) return true;
  Rational lhs = d * d;
  Rational rhs = c * c * dot(xi, xi) * dot(eta, eta);
  if (d > 0 && c < 0) return false;
  if (d <= 0 && c < 0) return lhs >= rhs;  // both negative: |d| >= |c| |xi||eta|
  return lhs <= rhs;
}

inline RationalVec vertex_offset(const PermGeometry& g, int vi) {
  RationalVec xi(g.n + 1);
  for (int b = 0; b <= g.n; ++b) xi[b] = Rational(g.vertices[vi][b]) - g.center[b];
  return xi;
}

// random rational point on facet F_mask: convex combination of its vertices
inline RationalVec random_facet_point(const PermGeometry& g, uint32_t mask,
                                      const std::vector<int>& facet_vertices,
                                      std::mt19937_64& rng) {
  (void)mask;
  int take = 2 + static_cast<int>(rng() % std::min<std::size_t>(3, facet_vertices.size()));
  take = std::min<int>(take, static_cast<int>(facet_vertices.size()));
  RationalVec pt(g.n + 1, Rational(0));
  Rational total = 0;
  for (int s = 0; s < take; ++s) {
    int vi = facet_vertices[rng() % facet_vertices.size()];
    Rational w(1 + static_cast<long long>(rng() % 63), 64);
    for (int b = 0; b <= g.n; ++b) pt[b] += w * Rational(g.vertices[vi][b]);
    total += w;
  }
  for (auto& c : pt) c /= total;
  return pt;
}

}  // namespace detail

// squared distance from the center to the affine hull of F_omega, exact:
// k(n+1-k)(n+1)/4 for k = |omega|
inline Rational squared_facet_plane_distance(int n, uint32_t mask) {
  int k = std::popcount(mask);
  return Rational(static_cast<long long>(k) * (n + 1 - k) * (n + 1), 4);
}

/// Exact certificate that the permutahedron is eps_n-sparse under the radial
/// chart: every pair of points on non-intersecting facets has
/// cos dist <= 1 - 1/R^2, and every facet image has diameter <= pi - eps_n
/// (checked through the per-facet plane distance; equality accepted).
inline SparseReport sparse_certificate(int n, int samples, uint64_t seed) {
  SparseReport rep;
  rep.n = n;
  PermGeometry g = build_geometry(n);
  auto elems = omega_elements(n);
  const Rational r2 = g.squared_circumradius;

  // vertex pairs, exhaustive over incomparable facet pairs
  std::vector<std::vector<int>> on_facet(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) on_facet[i] = g.vertices_on_facet(elems[i]);

  std::vector<std::pair<int, int>> facet_pairs;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j)
      if (!strict_subset(elems[i], elems[j]) && !strict_subset(elems[j], elems[i]))
        facet_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));

  std::vector<std::vector<SparseViolation>> slots(facet_pairs.size());
  std::vector<uint64_t> counts(facet_pairs.size(), 0);
  parallel_blocks(facet_pairs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t fp = lo; fp < hi; ++fp) {
      auto [i, j] = facet_pairs[fp];
      for (int u : on_facet[i])
        for (int v : on_facet[j]) {
          // vertices lie at exact distance R: the bound is (xi,eta) <= R^2 - 1
          auto xi = detail::vertex_offset(g, u);
          auto eta = detail::vertex_offset(g, v);
          ++counts[fp];
          if (dot(xi, eta) > r2 - 1)
            slots[fp].push_back({elems[i], elems[j], "vertex_pair"});
        }
    }
  });
  for (std::size_t fp = 0; fp < facet_pairs.size(); ++fp) {
    rep.vertex_pairs_checked += counts[fp];
    for (auto& v : slots[fp]) rep.violations.push_back(v);
  }

  // random rational boundary points on incomparable facet pairs
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto [i, j] = facet_pairs[rng() % facet_pairs.size()];
    auto x = detail::random_facet_point(g, elems[i], on_facet[i], rng);
    auto y = detail::random_facet_point(g, elems[j], on_facet[j], rng);
    auto xi = sub(x, g.center);
    auto eta = sub(y, g.center);
    ++rep.sample_pairs_checked;
    if (!detail::cos_bound_holds(xi, eta, r2))
      rep.violations.push_back({elems[i], elems[j], "sample_pair"});
  }

  // diameter bound: 2 arccos(r_omega / R) <= pi - eps_n  <=>  r_omega^2 >= R^2/T
  // with T = n(n+1)(n+2)/6; R^2/T = 1/2 exactly.
  for (uint32_t mask : elems) {
    ++rep.facets_checked;
    if (squared_facet_plane_distance(n, mask) < Rational(1, 2))
      rep.violations.push_back({mask, 0, "diameter"});
  }
  return rep;
}

// --- the projection pi -------------------------------------------------------

/// Barycentric-subdivision model of the solid permutahedron, the solid
/// simplex, and the face-collapsing projection between them. Faces of the
/// permutahedron are inclusion chains of subsets; the projection sends the
/// barycenter of a face to the barycenter of the simplex face indexed by the
/// chain minimum. Orientations are geometric (exact determinant signs in the
/// ambient hyperplane), which pins degree +1 rather than just |degree| = 1.
struct PiProjection {
  int n = 0;
  simplicial::AbstractComplex perm_prime;    // subdivision of the solid permutahedron
  simplicial::AbstractComplex delta_prime;   // subdivision of the solid simplex
  std::vector<std::vector<uint32_t>> chains; // vertex of perm_prime -> chain (apex: empty)
  simplicial::SimplicialMap map;
  int degree = 0;
  bool containment_verified = false;
};

namespace detail {

inline int geometric_sign(const std::vector<RationalVec>& pts) {
  // sign of det[p1-p0, ..., pn-p0, 1] in R^{n+1}
  const std::size_t n1 = pts[0].size();
  std::vector<RationalVec> m(n1, RationalVec(n1));
  for (std::size_t c = 0; c + 1 < pts.size(); ++c)
    for (std::size_t r = 0; r < n1; ++r) m[r][c] = pts[c + 1][r] - pts[0][r];
  for (std::size_t r = 0; r < n1; ++r) m[r][n1 - 1] = 1;
  return det_sign(std::move(m));
}

}  // namespace detail

inline PiProjection pi_projection(int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("pi_projection: n out of supported range");
  PiProjection out;
  out.n = n;
  PermGeometry g = build_geometry(n);
  auto elems = omega_elements(n);

  // enumerate all nonempty chains, ordered by (length, lex); apex goes last
  std::vector<std::vector<uint32_t>> chains;
  std::vector<uint32_t> cur;
  auto grow = [&](auto&& self, uint32_t mask) -> void {
    cur.push_back(mask);
    chains.push_back(cur);
    for (uint32_t next : elems)
      if (strict_subset(mask, next)) self(self, next);
    cur.pop_back();
  };
  for (uint32_t m : elems) grow(grow, m);
  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  chains.erase(std::unique(chains.begin(), chains.end()), chains.end());
  const int apex = static_cast<int>(chains.size());
  std::map<std::vector<uint32_t>, int> chain_id;
  for (int i = 0; i < apex; ++i) chain_id[chains[i]] = i;

  // top simplices of the subdivision: maximal chains refined one element at
  // a time down to a singleton, plus the apex
  std::vector<simplicial::Simplex> tops;
  std::vector<std::vector<uint32_t>> maximal;
  std::vector<uint32_t> mc;
  auto grow_max = [&](auto&& self, uint32_t mask) -> void {
    mc.push_back(mask);
    if (static_cast<int>(mc.size()) == n)
      maximal.push_back(mc);
    else
      for (uint32_t next : elems)
        if (strict_subset(mask, next)) self(self, next);
    mc.pop_back();
  };
  for (uint32_t m : elems)
    if (std::popcount(m) == 1) grow_max(grow_max, m);

  std::vector<int> order(n);
  for (const auto& full : maximal) {
    std::iota(order.begin(), order.end(), 0);
    do {
      // delete elements of the full chain in this order; prefixes of the
      // deletion give the flag of faces from vertex to facet
      simplicial::Simplex flag;
      std::vector<uint32_t> remaining = full;
      flag.push_back(chain_id.at(remaining));
      for (int step = 0; step + 1 < n; ++step) {
        remaining.erase(std::find(remaining.begin(), remaining.end(), full[order[step]]));
        flag.push_back(chain_id.at(remaining));
      }
      flag.push_back(apex);
      std::sort(flag.begin(), flag.end());
      tops.push_back(std::move(flag));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  out.perm_prime = simplicial::AbstractComplex::from_top(apex + 1, std::move(tops));
  out.chains = chains;
  out.chains.push_back({});  // apex

  // barycenter coordinates of every subdivision vertex, exact
  std::vector<RationalVec> coords(out.chains.size());
  for (std::size_t c = 0; c < out.chains.size(); ++c) {
    RationalVec p(n + 1, Rational(0));
    if (out.chains[c].empty()) {
      p = g.center;
    } else {
      std::vector<int> vs = g.vertices_on_facet(out.chains[c][0]);
      for (uint32_t mask : out.chains[c]) {
        std::vector<int> filtered;
        for (int vi : vs)
          if (g.vertex_on_facet(g.vertices[vi], mask)) filtered.push_back(vi);
        vs = std::move(filtered);
      }
      for (int vi : vs)
        for (int b = 0; b <= n; ++b) p[b] += Rational(g.vertices[vi][b]);
      for (auto& x : p) x /= static_cast<int>(vs.size());
    }
    coords[c] = std::move(p);
  }

  // solid simplex subdivision: single top simplex on vertices 0..n
  simplicial::AbstractComplex solid =
      simplicial::AbstractComplex::from_top(n + 1, {[&] {
        simplicial::Simplex s(n + 1);
        std::iota(s.begin(), s.end(), 0);
        return s;
      }()});
  auto [dp, dcol] = simplicial::barycentric_subdivide(solid);
  (void)dcol;
  out.delta_prime = std::move(dp);
  auto dfaces = solid.all_faces();  // vertex c of delta_prime = dfaces[c]
  std::vector<RationalVec> dcoords(dfaces.size());
  for (std::size_t c = 0; c < dfaces.size(); ++c) {
    RationalVec p(n + 1, Rational(0));
    for (int v : dfaces[c]) p[v] += 1;
    for (auto& x : p) x /= static_cast<int>(dfaces[c].size());
    dcoords[c] = std::move(p);
  }
  std::map<simplicial::Simplex, int> dface_id;
  for (int i = 0; i < static_cast<int>(dfaces.size()); ++i) dface_id[dfaces[i]] = i;

  // vertex rule: chain -> barycenter of Delta_{min chain}; apex -> barycenter
  out.map.source = out.perm_prime;
  out.map.target = out.delta_prime;
  out.map.vertex_map.resize(out.chains.size());
  simplicial::Simplex full_face(n + 1);
  std::iota(full_face.begin(), full_face.end(), 0);
  for (std::size_t c = 0; c < out.chains.size(); ++c) {
    simplicial::Simplex f;
    if (out.chains[c].empty()) {
      f = full_face;
    } else {
      uint32_t m = out.chains[c][0];
      for (int b = 0; b <= n; ++b)
        if (m >> b & 1u) f.push_back(b);
    }
    out.map.vertex_map[c] = dface_id.at(f);
  }
  simplicial::check_simplicial(out.map);

  // geometric orientations and the signed preimage count
  auto orient = [&](const simplicial::AbstractComplex& k,
                    const std::vector<RationalVec>& cs) {
    std::vector<int> sign(k.top_simplices.size());
    for (std::size_t t = 0; t < k.top_simplices.size(); ++t) {
      std::vector<RationalVec> pts;
      for (int v : k.top_simplices[t]) pts.push_back(cs[v]);
      sign[t] = detail::geometric_sign(pts);
      if (sign[t] == 0) throw std::logic_error("pi_projection: degenerate cell");
    }
    return sign;
  };
  auto src_sign = orient(out.perm_prime, coords);
  auto tgt_sign = orient(out.delta_prime, dcoords);

  std::vector<long long> count(out.delta_prime.top_simplices.size(), 0);
  for (std::size_t t = 0; t < out.perm_prime.top_simplices.size(); ++t) {
    const auto& top = out.perm_prime.top_simplices[t];
    std::vector<int> image;
    for (int v : top) image.push_back(out.map.vertex_map[v]);
    simplicial::Simplex key = image;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end()) continue;
    int ti = out.delta_prime.top_index(key);
    if (ti < 0) throw simplicial::NotSimplicialError("pi image misses the target");
    std::vector<int> rank(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
      rank[i] = static_cast<int>(std::lower_bound(key.begin(), key.end(), image[i]) -
                                 key.begin());
    count[ti] += src_sign[t] * simplicial::permutation_parity(rank) * tgt_sign[ti];
  }
  for (std::size_t i = 1; i < count.size(); ++i)
    if (count[i] != count[0])
      throw simplicial::InconsistentDegreeError("pi: preimage count not constant");
  out.degree = static_cast<int>(count[0]);

  // containment pi(F_omega) in Delta_omega: min(chain) is a subset of every
  // chain member
  out.containment_verified = true;
  for (const auto& chain : chains)
    for (uint32_t m : chain)
      if (!(chain[0] == m || strict_subset(chain[0], m))) out.containment_verified = false;
  return out;
}

// --- hyperplane frame and geometric orientation --------------------------------

// rational spanning basis of the hyperplane sum t = 0: rows e_i - e_{i+1}
inline std::vector<RationalVec> hyperplane_basis(int n) {
  std::vector<RationalVec> rows(n, RationalVec(n + 1, Rational(0)));
  for (int i = 0; i < n; ++i) {
    rows[i][i] = 1;
    rows[i][i + 1] = -1;
  }
  return rows;
}

// orthonormalized version (same orientation class: Gram-Schmidt is an upper
// triangular change of basis with positive diagonal)
inline std::vector<std::vector<double>> hyperplane_frame(int n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    rows[i][i] = 1;
    rows[i][i + 1] = -1;
    for (int j = 0; j < i; ++j) {
      double d = 0;
      for (int k = 0; k <= n; ++k) d += rows[i][k] * rows[j][k];
      for (int k = 0; k <= n; ++k) rows[i][k] -= d * rows[j][k];
    }
    double norm = 0;
    for (int k = 0; k <= n; ++k) norm += rows[i][k] * rows[i][k];
    norm = std::sqrt(norm);
    for (int k = 0; k <= n; ++k) rows[i][k] /= norm;
  }
  return rows;
}

inline RationalVec facet_direction(const PermGeometry& g, uint32_t mask) {
  auto vs = g.vertices_on_facet(mask);
  RationalVec dir(g.n + 1, Rational(0));
  for (int vi : vs)
    for (int b = 0; b <= g.n; ++b) dir[b] += Rational(g.vertices[vi][b]);
  for (auto& x : dir) x /= static_cast<int>(vs.size());
  return sub(dir, g.center);
}

/// K of the permutahedron with the geometric orientation induced by the
/// radial sphere chart in the canonical hyperplane frame: the sign of a top
/// chain is the determinant sign of its facet barycenter directions written
/// in the frame. This pins degree signs against spherical winding numbers.
inline simplicial::OrientedPseudoManifold oriented_dual_pm(int n) {
  auto d = dual_complex(n);
  PermGeometry g = build_geometry(n);
  auto elems = omega_elements(n);
  auto basis = hyperplane_basis(n);
  std::vector<RationalVec> dirs(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) dirs[i] = facet_direction(g, elems[i]);

  std::vector<int> sign(d.complex.top_simplices.size());
  for (std::size_t t = 0; t < d.complex.top_simplices.size(); ++t) {
    const auto& top = d.complex.top_simplices[t];
    std::vector<RationalVec> m(n, RationalVec(n));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m[r][c] = dot(basis[r], dirs[top[c]]);
    sign[t] = det_sign(std::move(m));
    if (sign[t] == 0) throw std::logic_error("degenerate chain simplex");
  }
  auto rep = simplicial::validate_pseudo_manifold(d.complex, true);
  if (!rep.ok()) throw std::logic_error("dual complex failed validation");
  // the geometric signs must agree with sign propagation up to a global flip
  bool same = true, flipped = true;
  for (std::size_t t = 0; t < sign.size(); ++t) {
    if (sign[t] != rep.value->orientation[t]) same = false;
    if (sign[t] != -rep.value->orientation[t]) flipped = false;
  }
  if (!same && !flipped) throw std::logic_error("geometric orientation inconsistent");
  return simplicial::OrientedPseudoManifold{d.complex, std::move(sign), true};
}

// --- radial chart -------------------------------------------------------------

struct ZeroDirectionError : std::runtime_error {
  ZeroDirectionError() : std::runtime_error("radial chart: zero direction") {}
};

/// Radial projection chart from the boundary of the permutahedron to the
/// sphere around the center. Directions stand in for sphere points; all
/// region tests reduce to exact ray/facet-hyperplane intersections.
struct RadialChart {
  int n = 0;
  PermGeometry geometry;
  std::vector<uint32_t> elems;

  // minimal positive ray parameter and the set of facets met there
  struct Hit {
    Rational t;
    RationalVec point;
    std::vector<uint32_t> facets;
  };

  RationalVec project_direction(RationalVec d) const {
    if (static_cast<int>(d.size()) != n + 1)
      throw std::invalid_argument("direction has wrong dimension");
    Rational mean = 0;
    for (const auto& x : d) mean += x;
    mean /= (n + 1);
    for (auto& x : d) x -= mean;
    if (is_zero(d)) throw ZeroDirectionError();
    return d;
  }

  Hit ray_hit(const RationalVec& direction) const {
    RationalVec d = project_direction(direction);
    Hit best;
    bool found = false;
    for (uint32_t mask : elems) {
      Rational slope = 0;
      Rational level = 0;
      for (int b = 0; b <= n; ++b)
        if (mask >> b & 1u) {
          slope += d[b];
          level += geometry.center[b];
        }
      if (slope <= 0) continue;  // ray moves away from or parallel to this facet
      Rational t = (geometry.facet_rhs(mask) - level) / slope;
      if (!found || t < best.t) {
        best.t = t;
        best.facets.clear();
        best.facets.push_back(mask);
        found = true;
      } else if (t == best.t) {
        best.facets.push_back(mask);
      }
    }
    if (!found) throw std::logic_error("ray misses the boundary");
    best.point.resize(n + 1);
    for (int b = 0; b <= n; ++b) best.point[b] = geometry.center[b] + best.t * d[b];
    return best;
  }

  bool member(const RationalVec& direction, uint32_t mask) const {
    auto hit = ray_hit(direction);
    return std::find(hit.facets.begin(), hit.facets.end(), mask) != hit.facets.end();
  }

  // float-mode membership: facets whose hit parameter is within rel_tol of
  // the minimum
  std::vector<uint32_t> regions_containing(const std::vector<double>& direction,
                                           double rel_tol = 1e-9) const {
    std::vector<double> d(direction);
    if (static_cast<int>(d.size()) != n + 1)
      throw std::invalid_argument("direction has wrong dimension");
    double mean = 0;
    for (double x : d) mean += x;
    mean /= (n + 1);
    double norm = 0;
    for (auto& x : d) {
      x -= mean;
      norm += x * x;
    }
    if (norm < 1e-24) throw ZeroDirectionError();
    double o = to_double(geometry.center[0]);
    double best = 0;
    bool found = false;
    std::vector<double> ts(elems.size(), -1);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      double slope = 0;
      int k = std::popcount(elems[i]);
      for (int b = 0; b <= n; ++b)
        if (elems[i] >> b & 1u) slope += d[b];
      if (slope <= 0) continue;
      double rhs = to_double(geometry.facet_rhs(elems[i]));
      ts[i] = (rhs - k * o) / slope;
      if (!found || ts[i] < best) {
        best = ts[i];
        found = true;
      }
    }
    if (!found) throw std::logic_error("ray misses the boundary");
    std::vector<uint32_t> out;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (ts[i] >= 0 && ts[i] <= best * (1 + rel_tol)) out.push_back(elems[i]);
    return out;
  }

  // upper bound on the spherical diameter of region omega
  long double region_diameter_bound(uint32_t mask) const {
    long double ratio = std::sqrt(
        to_double(squared_facet_plane_distance(n, mask) / geometry.squared_circumradius));
    if (ratio > 1) ratio = 1;
    return 2 * std::acos(ratio);
  }

  long double min_region_gap() const { return constants(n).eps; }
};

inline RadialChart radial_chart(int n) {
  RadialChart c;
  c.n = n;
  c.geometry = build_geometry(n);
  c.elems = omega_elements(n);
  return c;
}

}  // namespace cycleforge::permutahedron
