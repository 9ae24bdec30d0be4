#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cycleforge/parallel.hpp"
#include "cycleforge/simplicial.hpp"

namespace cycleforge::realization {

using simplicial::AbstractComplex;
using simplicial::OrientedPseudoManifold;
using simplicial::Simplex;
using simplicial::VertexColoring;

/// Prepared input: an oriented, strongly connected n-pseudo-manifold with a
/// regular coloring in n+1 colors, its chess coloring, and the base white
/// simplex (the first one in canonical order).
struct ColoredCycleInput {
  OrientedPseudoManifold Z;
  VertexColoring col;
  int n = 0;
  simplicial::ChessColoring chess;
  int sigma0 = -1;

  int top_count() const { return static_cast<int>(Z.complex.top_simplices.size()); }

  static ColoredCycleInput prepare(OrientedPseudoManifold z, VertexColoring coloring) {
    ColoredCycleInput in;
    in.n = z.dim();
    if (!z.strongly_connected)
      throw std::invalid_argument("realization input must be strongly connected");
    for (int c : coloring.colors)
      if (c < 1 || c > in.n + 1)
        throw std::invalid_argument("coloring must use colors 1..n+1");
    in.chess = simplicial::chess_coloring(z, coloring);
    in.sigma0 = in.chess.whites.at(0);
    in.Z = std::move(z);
    in.col = std::move(coloring);
    return in;
  }
};

// Omega for dimension n: nonempty proper subsets of colors {1..n+1} as masks
// over bits 0..n, ascending.
inline std::vector<uint32_t> omega_masks(int n) {
  std::vector<uint32_t> out;
  for (uint32_t m = 1; m < (uint32_t(1) << (n + 1)) - 1; ++m) out.push_back(m);
  return out;
}

inline std::vector<int> mask_colors(uint32_t mask) {
  std::vector<int> colors;
  for (int b = 0; b < 32; ++b)
    if (mask >> b & 1u) colors.push_back(b + 1);
  return colors;
}

struct UnbalancedStarError : std::runtime_error {
  explicit UnbalancedStarError(const std::string& m) : std::runtime_error(m) {}
};

/// One involution of the top-simplex set per omega, swapping white and black
/// while fixing the shared face of type omega.
struct PairingFamily {
  int n = 0;
  std::vector<uint32_t> omegas;             // ascending masks
  std::vector<std::vector<int>> lambda;     // per omega: involution of A
};

/// Canonical pairing: within each star A(tau), sort whites and blacks by the
/// canonical simplex order and match positionally.
inline PairingFamily build_pairings(const ColoredCycleInput& in) {
  PairingFamily fam;
  fam.n = in.n;
  fam.omegas = omega_masks(in.n);
  const auto& tops = in.Z.complex.top_simplices;
  for (uint32_t mask : fam.omegas) {
    auto colors = mask_colors(mask);
    std::map<Simplex, std::pair<std::vector<int>, std::vector<int>>> stars;
    for (int t = 0; t < static_cast<int>(tops.size()); ++t) {
      Simplex tau = simplicial::type_face(tops[t], colors, in.col);
      auto& [whites, blacks] = stars[tau];
      (in.chess.color[t] > 0 ? whites : blacks).push_back(t);
    }
    std::vector<int> lam(tops.size());
    for (auto& [tau, wb] : stars) {
      auto& [whites, blacks] = wb;
      if (whites.size() != blacks.size())
        throw UnbalancedStarError("star of a type-" + std::to_string(mask) +
                                  " face is unbalanced");
      for (std::size_t i = 0; i < whites.size(); ++i) {
        lam[whites[i]] = blacks[i];
        lam[blacks[i]] = whites[i];
      }
    }
    fam.lambda.push_back(std::move(lam));
  }
  return fam;
}

struct PairingViolation {
  int sigma = -1;
  uint32_t omega = 0;
  std::string condition;
};

/// Checks the three pairing conditions for a (possibly user-supplied) family.
inline std::optional<PairingViolation> validate_pairings(const ColoredCycleInput& in,
                                                         const PairingFamily& fam) {
  const auto& tops = in.Z.complex.top_simplices;
  for (std::size_t oi = 0; oi < fam.omegas.size(); ++oi) {
    const auto& lam = fam.lambda[oi];
    auto colors = mask_colors(fam.omegas[oi]);
    if (lam.size() != tops.size()) return PairingViolation{-1, fam.omegas[oi], "size"};
    for (int t = 0; t < static_cast<int>(tops.size()); ++t) {
      if (lam[lam[t]] != t) return PairingViolation{t, fam.omegas[oi], "involution"};
      if (in.chess.color[t] == in.chess.color[lam[t]])
        return PairingViolation{t, fam.omegas[oi], "color_swap"};
      if (simplicial::type_face(tops[t], colors, in.col) !=
          simplicial::type_face(tops[lam[t]], colors, in.col))
        return PairingViolation{t, fam.omegas[oi], "type_face"};
    }
  }
  return std::nullopt;
}

/// Machine state: one permutation c(omega) per omega, the tracking
/// permutation a, and the small-cover coordinate r in Z2^n. One state is one
/// permutahedral cell of the constructed cover.
struct RealizationState {
  std::vector<std::vector<int>> c;
  std::vector<int> a;
  uint32_t r = 0;

  bool operator==(const RealizationState&) const = default;
};

inline RealizationState initial_state(const PairingFamily& fam, int top_count) {
  RealizationState s;
  s.c = fam.lambda;
  s.a.resize(top_count);
  for (int i = 0; i < top_count; ++i) s.a[i] = i;
  s.r = 0;
  return s;
}

/// One gluing step: a' = c(w) after a; c(g) conjugated by c(w) for g strictly
/// below w; r' flips the bit of |w|.
inline RealizationState transition(const RealizationState& s, std::size_t omega_idx,
                                   const PairingFamily& fam) {
  RealizationState out;
  out.c.resize(s.c.size());
  const auto& cw = s.c[omega_idx];
  const uint32_t w = fam.omegas[omega_idx];
  for (std::size_t g = 0; g < s.c.size(); ++g) {
    const uint32_t gm = fam.omegas[g];
    if (gm != w && (gm & w) == gm) {
      auto& dst = out.c[g];
      dst.resize(cw.size());
      for (std::size_t i = 0; i < cw.size(); ++i) dst[i] = cw[s.c[g][cw[i]]];
    } else {
      out.c[g] = s.c[g];
    }
  }
  out.a.resize(s.a.size());
  for (std::size_t i = 0; i < s.a.size(); ++i) out.a[i] = cw[s.a[i]];
  out.r = s.r ^ (uint32_t(1) << (std::popcount(w) - 1));
  return out;
}

inline RealizationState apply_word(RealizationState s, const std::vector<int>& omega_word,
                                   const PairingFamily& fam) {
  for (int oi : omega_word) s = transition(s, static_cast<std::size_t>(oi), fam);
  return s;
}

// --- enumeration ----------------------------------------------------------------

constexpr uint32_t kMissing = UINT32_MAX;

/// The BFS closure of the initial state under all transitions: states in
/// packed canonical encoding plus the transition table. `complete` is false
/// when the state budget cut the frontier.
struct CoveringAtlas {
  int n = 0;
  int points = 0;         // |A|
  int omega_count = 0;
  std::size_t stride = 0; // bytes per packed state
  std::vector<uint8_t> arena;
  std::vector<uint32_t> transitions;  // state * omega_count + omega
  uint32_t base = 0;
  bool complete = false;
  uint64_t budget_used = 0;

  uint64_t size() const { return arena.size() / stride; }
  const uint8_t* state(uint32_t idx) const { return arena.data() + std::size_t(idx) * stride; }
  uint32_t neighbor(uint32_t idx, int omega) const {
    return transitions[std::size_t(idx) * omega_count + omega];
  }
  // a(sigma0) of a packed state
  int image_of(uint32_t idx, int sigma0) const {
    return state(idx)[std::size_t(omega_count) * points + sigma0];
  }
  uint32_t r_of(uint32_t idx) const {
    return state(idx)[std::size_t(omega_count) * points + points];
  }
};

namespace detail {

inline void pack_state(const RealizationState& s, uint8_t* out, int points, int omegas) {
  for (int g = 0; g < omegas; ++g)
    for (int i = 0; i < points; ++i) *out++ = static_cast<uint8_t>(s.c[g][i]);
  for (int i = 0; i < points; ++i) *out++ = static_cast<uint8_t>(s.a[i]);
  *out = static_cast<uint8_t>(s.r);
}

inline uint64_t fnv1a(const uint8_t* p, std::size_t len) {
  uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

// open-addressing index over the packed arena
struct StateIndex {
  std::size_t stride;
  std::vector<uint8_t>& arena;
  std::vector<uint32_t> table;
  std::size_t count = 0;

  StateIndex(std::size_t stride_, std::vector<uint8_t>& arena_)
      : stride(stride_), arena(arena_), table(1024, kMissing) {}

  void rehash() {
    std::vector<uint32_t> next(table.size() * 2, kMissing);
    for (uint32_t idx : table) {
      if (idx == kMissing) continue;
      uint64_t h = fnv1a(arena.data() + std::size_t(idx) * stride, stride);
      std::size_t slot = h & (next.size() - 1);
      while (next[slot] != kMissing) slot = (slot + 1) & (next.size() - 1);
      next[slot] = idx;
    }
    table = std::move(next);
  }

  // returns (index, inserted); when insertion is allowed the key must already
  // sit in the arena scratch slot at position `count`
  std::pair<uint32_t, bool> find_or_insert(const uint8_t* key, bool allow_insert) {
    if (2 * (count + 1) > table.size()) rehash();
    uint64_t h = fnv1a(key, stride);
    std::size_t slot = h & (table.size() - 1);
    while (table[slot] != kMissing) {
      if (std::memcmp(arena.data() + std::size_t(table[slot]) * stride, key, stride) == 0)
        return {table[slot], false};
      slot = (slot + 1) & (table.size() - 1);
    }
    if (!allow_insert) return {kMissing, false};
    uint32_t idx = static_cast<uint32_t>(count);
    table[slot] = idx;
    ++count;
    return {idx, true};
  }
};

}  // namespace detail

inline CoveringAtlas enumerate_covering(const ColoredCycleInput& in, const PairingFamily& fam,
                                        uint64_t budget) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  const int points = in.top_count();
  if (points > 255) throw std::length_error("more than 255 top simplices");
  const int omegas = static_cast<int>(fam.omegas.size());

  CoveringAtlas atlas;
  atlas.n = in.n;
  atlas.points = points;
  atlas.omega_count = omegas;
  atlas.stride = std::size_t(omegas + 1) * points + 1;
  atlas.complete = true;

  detail::StateIndex index(atlas.stride, atlas.arena);
  auto push_packed = [&](const RealizationState& s) -> std::pair<uint32_t, bool> {
    atlas.arena.resize((index.count + 1) * atlas.stride);
    uint8_t* slot = atlas.arena.data() + index.count * atlas.stride;
    detail::pack_state(s, slot, points, omegas);
    bool allow = index.count < budget;
    auto [idx, inserted] = index.find_or_insert(slot, allow);
    if (!inserted) atlas.arena.resize(index.count * atlas.stride);
    return {idx, inserted};
  };

  push_packed(initial_state(fam, points));
  for (uint32_t cursor = 0; cursor < index.count; ++cursor) {
    // unpack the cursor state
    RealizationState s;
    const uint8_t* p = atlas.arena.data() + std::size_t(cursor) * atlas.stride;
    s.c.assign(omegas, std::vector<int>(points));
    for (int g = 0; g < omegas; ++g)
      for (int i = 0; i < points; ++i) s.c[g][i] = p[std::size_t(g) * points + i];
    s.a.assign(points, 0);
    for (int i = 0; i < points; ++i) s.a[i] = p[std::size_t(omegas) * points + i];
    s.r = p[std::size_t(omegas) * points + points];

    for (int oi = 0; oi < omegas; ++oi) {
      uint32_t idx = push_packed(transition(s, oi, fam)).first;
      if (idx == kMissing) atlas.complete = false;
      atlas.transitions.push_back(idx);
    }
  }
  atlas.budget_used = index.count;
  return atlas;
}

// --- certification ----------------------------------------------------------------

/// Certificate fields; `k` is the multiplicity N/|A| of the realized class.
struct RealizationCertificate {
  uint64_t cells = 0;
  uint64_t k = 0;
  uint64_t projection_fiber = 0;  // N / 2^n when complete
  bool complete = false;
  bool fiber_uniform = false;
  bool parity_coherent = false;
  bool typeface_coherent = false;
  bool codim2_commutes = false;
  bool projection_uniform = false;
  bool involutive = false;
  std::vector<std::string> witnesses;

  bool all_checks_pass() const {
    return fiber_uniform && parity_coherent && typeface_coherent && codim2_commutes &&
           projection_uniform && involutive;
  }
};

/// Runs the five certificate checks (plus transition involutivity) over a
/// complete atlas; partial atlases get every check that does not need global
/// counts, restricted to stored neighborhoods.
inline RealizationCertificate verify_certificate(const CoveringAtlas& atlas,
                                                 const ColoredCycleInput& in,
                                                 const PairingFamily& fam) {
  RealizationCertificate cert;
  const uint64_t n_states = atlas.size();
  const int points = atlas.points;
  const int omegas = atlas.omega_count;
  cert.cells = n_states;
  cert.complete = atlas.complete;

  // (ii) parity coherence, checked everywhere
  cert.parity_coherent = true;
  for (uint64_t s = 0; s < n_states && cert.parity_coherent; ++s) {
    int img = atlas.image_of(static_cast<uint32_t>(s), in.sigma0);
    bool white = in.chess.color[img] > 0;
    bool even = std::popcount(atlas.r_of(static_cast<uint32_t>(s))) % 2 == 0;
    if (white != even) {
      cert.parity_coherent = false;
      cert.witnesses.push_back("parity@state " + std::to_string(s));
    }
  }

  // (iii) type-face well-definedness + transition involutivity, where
  // neighbors are stored
  cert.typeface_coherent = true;
  cert.involutive = true;
  const auto& tops = in.Z.complex.top_simplices;
  for (uint64_t s = 0; s < n_states; ++s) {
    for (int oi = 0; oi < omegas; ++oi) {
      uint32_t t = atlas.neighbor(static_cast<uint32_t>(s), oi);
      if (t == kMissing) continue;
      if (t == s) {
        cert.involutive = false;
        cert.witnesses.push_back("fixed_point@state " + std::to_string(s));
        continue;
      }
      uint32_t back = atlas.neighbor(t, oi);
      if (back != kMissing && back != s) {
        cert.involutive = false;
        cert.witnesses.push_back("not_involutive@state " + std::to_string(s));
      }
      auto colors = mask_colors(fam.omegas[oi]);
      Simplex f1 = simplicial::type_face(tops[atlas.image_of(static_cast<uint32_t>(s), in.sigma0)],
                                         colors, in.col);
      Simplex f2 = simplicial::type_face(tops[atlas.image_of(t, in.sigma0)], colors, in.col);
      if (f1 != f2) {
        cert.typeface_coherent = false;
        if (cert.witnesses.size() < 16)
          cert.witnesses.push_back("typeface@state " + std::to_string(s) + " omega " +
                                   std::to_string(fam.omegas[oi]));
      }
    }
  }

  // (iv) codim-2 closure for comparable pairs, where all four states exist
  cert.codim2_commutes = true;
  for (uint64_t s = 0; s < n_states; ++s) {
    for (int oi = 0; oi < omegas && cert.codim2_commutes; ++oi)
      for (int oj = 0; oj < omegas; ++oj) {
        uint32_t wi = fam.omegas[oi], wj = fam.omegas[oj];
        if (wi == wj || (wi & wj) != wi) continue;  // need wi strictly inside wj
        uint32_t a = atlas.neighbor(static_cast<uint32_t>(s), oi);
        uint32_t b = atlas.neighbor(static_cast<uint32_t>(s), oj);
        if (a == kMissing || b == kMissing) continue;
        uint32_t ab = atlas.neighbor(a, oj);
        uint32_t ba = atlas.neighbor(b, oi);
        if (ab == kMissing || ba == kMissing) continue;
        if (ab != ba) {
          cert.codim2_commutes = false;
          cert.witnesses.push_back("codim2@state " + std::to_string(s));
          break;
        }
      }
  }

  // (i) fiber uniformity and (v) projection fibers need completeness
  if (atlas.complete) {
    std::vector<uint64_t> fiber(points, 0);
    std::vector<uint64_t> rfiber(uint64_t(1) << atlas.n, 0);
    for (uint64_t s = 0; s < n_states; ++s) {
      ++fiber[atlas.image_of(static_cast<uint32_t>(s), in.sigma0)];
      ++rfiber[atlas.r_of(static_cast<uint32_t>(s))];
    }
    cert.fiber_uniform = n_states % points == 0;
    for (uint64_t f : fiber)
      if (f != n_states / points) cert.fiber_uniform = false;
    if (cert.fiber_uniform) cert.k = n_states / points;
    cert.projection_uniform = n_states % (uint64_t(1) << atlas.n) == 0;
    for (uint64_t f : rfiber)
      if (f != n_states / (uint64_t(1) << atlas.n)) cert.projection_uniform = false;
    if (cert.projection_uniform) cert.projection_fiber = n_states >> atlas.n;
    if (!cert.fiber_uniform) cert.witnesses.push_back("fiber_nonuniform");
    if (!cert.projection_uniform) cert.witnesses.push_back("projection_nonuniform");
  }
  return cert;
}

/// Independent degree oracle for 1-dimensional atlases: walk the unique
/// cycle of segments, accumulate the signed motion of the image edge around
/// Z, and divide by the length of Z. Needs a complete atlas.
inline int64_t winding_oracle(const CoveringAtlas& atlas, const ColoredCycleInput& in) {
  if (in.n != 1) throw std::invalid_argument("winding oracle is 1-dimensional only");
  if (!atlas.complete) throw std::invalid_argument("winding oracle needs a complete atlas");
  const auto& tops = in.Z.complex.top_simplices;  // edges of the 2k-gon
  const int64_t edges = static_cast<int64_t>(tops.size());

  auto head_of = [&](int edge_idx) {
    // oriented edge (tail, head): +1 orientation means sorted order
    const auto& e = tops[edge_idx];
    return in.Z.orientation[edge_idx] > 0 ? e[1] : e[0];
  };
  auto shared_vertex = [&](int e1, int e2, int color) {
    for (int v : tops[e1])
      if (in.col.colors[v] == color)
        for (int u : tops[e2])
          if (u == v) return v;
    return -1;
  };

  int64_t displacement = 0;
  uint64_t steps = 0;
  uint32_t state = atlas.base;
  int op = 0;  // alternate the two omegas
  do {
    uint32_t next = atlas.neighbor(state, op);
    if (next == kMissing) throw std::logic_error("complete atlas missing a transition");
    int e1 = atlas.image_of(state, in.sigma0);
    int e2 = atlas.image_of(next, in.sigma0);
    int color = op + 1;  // omega masks ascending: {1} then {2}
    int v = shared_vertex(e1, e2, color);
    if (v < 0) throw std::logic_error("adjacent images do not share the type vertex");
    displacement += (head_of(e1) == v) ? 1 : -1;
    state = next;
    op = 1 - op;
    ++steps;
  } while (!(state == atlas.base && op == 0));
  if (steps != atlas.size()) throw std::logic_error("atlas cycle does not cover all states");
  if (displacement % edges != 0) throw std::logic_error("winding displacement not divisible");
  return displacement / edges;
}

}  // namespace cycleforge::realization
