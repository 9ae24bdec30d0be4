#include <doctest.h>

#include <numeric>
#include <random>

#include "cycleforge/coxeter.hpp"
#include "cycleforge/permutahedron.hpp"
#include "cycleforge/realization.hpp"

using namespace cycleforge;
namespace rz = cycleforge::realization;
using simplicial::AbstractComplex;
using simplicial::Simplex;

namespace {

rz::ColoredCycleInput polygon_input(int k) {
  // 2k-gon with alternating vertex colors 1,2
  std::vector<Simplex> edges;
  for (int i = 0; i < 2 * k; ++i) edges.push_back({i, (i + 1) % (2 * k)});
  auto c = AbstractComplex::from_top(2 * k, std::move(edges));
  auto pm = simplicial::validate_pseudo_manifold(c, true);
  REQUIRE(pm.ok());
  simplicial::VertexColoring col;
  col.colors.resize(2 * k);
  for (int i = 0; i < 2 * k; ++i) col.colors[i] = 1 + i % 2;
  col.regular = true;
  return rz::ColoredCycleInput::prepare(*pm.value, col);
}

rz::ColoredCycleInput octahedron_input() {
  // cross-polytope boundary, colored by antipodal class
  std::vector<Simplex> f;
  for (int a : {0, 3})
    for (int b : {1, 4})
      for (int c : {2, 5}) f.push_back({a, b, c});
  auto k = AbstractComplex::from_top(6, std::move(f));
  auto pm = simplicial::validate_pseudo_manifold(k, true);
  REQUIRE(pm.ok());
  simplicial::VertexColoring col;
  col.colors = {1, 2, 3, 1, 2, 3};
  col.regular = true;
  return rz::ColoredCycleInput::prepare(*pm.value, col);
}

rz::ColoredCycleInput subdivided_sphere_input() {
  auto [sub, col] = simplicial::barycentric_subdivide(simplicial::boundary_of_simplex(3));
  auto pm = simplicial::validate_pseudo_manifold(sub, true);
  REQUIRE(pm.ok());
  return rz::ColoredCycleInput::prepare(*pm.value, col);
}

}  // namespace

TEST_CASE("pairings on the hexagon are forced") {
  auto in = polygon_input(3);
  auto fam = rz::build_pairings(in);
  CHECK(fam.omegas == std::vector<uint32_t>{0b01, 0b10});
  CHECK_FALSE(rz::validate_pairings(in, fam).has_value());
  // each vertex of color c has exactly one white and one black edge, so the
  // pairing is the edge flip around that vertex
  for (std::size_t oi = 0; oi < 2; ++oi) {
    for (int t = 0; t < in.top_count(); ++t) {
      int other = fam.lambda[oi][t];
      CHECK(other != t);
      CHECK(in.chess.color[t] != in.chess.color[other]);
    }
  }
}

TEST_CASE("pairings on spheres validate") {
  for (auto in : {octahedron_input(), subdivided_sphere_input()}) {
    auto fam = rz::build_pairings(in);
    CHECK_FALSE(rz::validate_pairings(in, fam).has_value());
  }
}

TEST_CASE("adversarial pairing is rejected with a witness") {
  auto in = subdivided_sphere_input();
  auto fam = rz::build_pairings(in);
  // break condition (3): swap lambda values of two simplices from stars of
  // different type-omega faces
  auto& lam = fam.lambda[0];
  int a = 0;
  int b = -1;
  auto colors = rz::mask_colors(fam.omegas[0]);
  for (int t = 1; t < in.top_count(); ++t)
    if (simplicial::type_face(in.Z.complex.top_simplices[t], colors, in.col) !=
        simplicial::type_face(in.Z.complex.top_simplices[a], colors, in.col) &&
        in.chess.color[t] == in.chess.color[a]) {
      b = t;
      break;
    }
  REQUIRE(b >= 0);
  std::swap(lam[lam[a]], lam[lam[b]]);
  std::swap(lam[a], lam[b]);
  auto violation = rz::validate_pairings(in, fam);
  REQUIRE(violation.has_value());
  CHECK(violation->condition == "type_face");
}

TEST_CASE("initial state and single transitions") {
  auto in = polygon_input(3);
  auto fam = rz::build_pairings(in);
  auto s0 = rz::initial_state(fam, in.top_count());
  CHECK(s0.a[in.sigma0] == in.sigma0);
  CHECK(s0.r == 0);
  for (std::size_t oi = 0; oi < fam.omegas.size(); ++oi) CHECK(s0.c[oi] == fam.lambda[oi]);

  SUBCASE("one step from the start") {
    auto s1 = rz::transition(s0, 0, fam);
    CHECK(s1.a == fam.lambda[0]);
    CHECK(s1.r == 1);  // e_{|omega|} with |omega| = 1
  }
  SUBCASE("transitions are involutions and never fix a state") {
    std::mt19937_64 rng(5);
    auto s = s0;
    for (int step = 0; step < 30; ++step) {
      std::size_t oi = rng() % fam.omegas.size();
      auto t = rz::transition(s, oi, fam);
      CHECK_FALSE(t == s);
      CHECK(rz::transition(t, oi, fam) == s);
      s = t;
    }
  }
}

TEST_CASE("involutivity holds on arbitrary states with conjugated c") {
  auto in = octahedron_input();
  auto fam = rz::build_pairings(in);
  std::mt19937_64 rng(77);
  const int pts = in.top_count();
  for (int trial = 0; trial < 20; ++trial) {
    rz::RealizationState s;
    // random conjugating permutation per omega
    for (std::size_t oi = 0; oi < fam.omegas.size(); ++oi) {
      std::vector<int> p(pts);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      std::vector<int> conj(pts);
      for (int i = 0; i < pts; ++i) conj[p[i]] = p[fam.lambda[oi][i]];
      s.c.push_back(std::move(conj));
    }
    std::vector<int> a(pts);
    std::iota(a.begin(), a.end(), 0);
    std::shuffle(a.begin(), a.end(), rng);
    s.a = a;
    s.r = static_cast<uint32_t>(rng() % 4);
    for (std::size_t oi = 0; oi < fam.omegas.size(); ++oi) {
      auto t = rz::transition(s, oi, fam);
      CHECK_FALSE(t == s);
      CHECK(rz::transition(t, oi, fam) == s);
    }
  }
}

TEST_CASE("polygon enumerations close up and certify") {
  for (int k = 2; k <= 6; ++k) {
    auto in = polygon_input(k);
    auto fam = rz::build_pairings(in);
    auto atlas = rz::enumerate_covering(in, fam, 1000000);
    REQUIRE(atlas.complete);
    CHECK(atlas.size() % (2 * k) == 0);
    auto cert = rz::verify_certificate(atlas, in, fam);
    CHECK(cert.all_checks_pass());
    CHECK(cert.k >= 1);
    CHECK(cert.cells == cert.k * 2 * k);
    auto winding = rz::winding_oracle(atlas, in);
    CHECK(static_cast<uint64_t>(std::abs(winding)) == cert.k);
  }
}

TEST_CASE("budget semantics") {
  auto in = polygon_input(4);
  auto fam = rz::build_pairings(in);
  auto atlas = rz::enumerate_covering(in, fam, 3);
  CHECK_FALSE(atlas.complete);
  CHECK(atlas.size() == 3);
  auto cert = rz::verify_certificate(atlas, in, fam);
  // local checks on the stored states still pass
  CHECK(cert.parity_coherent);
  CHECK(cert.typeface_coherent);
  CHECK(cert.codim2_commutes);
  CHECK(cert.involutive);
}

TEST_CASE("octahedron enumeration") {
  auto in = octahedron_input();
  auto fam = rz::build_pairings(in);
  auto atlas = rz::enumerate_covering(in, fam, 300000);
  MESSAGE("octahedron atlas size: ", atlas.size(), " complete: ", atlas.complete);
  auto cert = rz::verify_certificate(atlas, in, fam);
  CHECK(cert.parity_coherent);
  CHECK(cert.typeface_coherent);
  CHECK(cert.codim2_commutes);
  CHECK(cert.involutive);
  if (atlas.complete) {
    CHECK(cert.all_checks_pass());
    CHECK(cert.cells % 8 == 0);
    CHECK(cert.cells % 4 == 0);  // 2^n divides N
  }
}

TEST_CASE("relator words return every probed state to itself") {
  auto in = octahedron_input();
  auto fam = rz::build_pairings(in);
  std::mt19937_64 rng(99);
  const int omegas = static_cast<int>(fam.omegas.size());
  auto s0 = rz::initial_state(fam, in.top_count());
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> prefix(rng() % 8);
    for (auto& l : prefix) l = static_cast<int>(rng() % omegas);
    auto s = rz::apply_word(s0, prefix, fam);
    // insert a relator: either ww or a commuting braid for comparable pair
    std::vector<int> relator;
    if (rng() % 2 == 0) {
      int w = static_cast<int>(rng() % omegas);
      relator = {w, w};
    } else {
      // find a comparable pair
      int a = -1, b = -1;
      for (int i = 0; i < omegas && a < 0; ++i)
        for (int j = 0; j < omegas; ++j) {
          uint32_t wi = fam.omegas[i], wj = fam.omegas[j];
          if (wi != wj && (wi & wj) == wi) {
            a = i;
            b = j;
            break;
          }
        }
      REQUIRE(a >= 0);
      relator = {a, b, a, b};
    }
    CHECK(rz::apply_word(s, relator, fam) == s);
  }
}

TEST_CASE("a non-spherical cycle: the subdivided 7-vertex torus") {
  std::vector<Simplex> f;
  for (int i = 0; i < 7; ++i) {
    f.push_back({i, (i + 1) % 7, (i + 3) % 7});
    f.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  auto torus = AbstractComplex::from_top(7, std::move(f));
  auto [sub, col] = simplicial::barycentric_subdivide(torus);
  auto pm = simplicial::validate_pseudo_manifold(sub, true);
  REQUIRE(pm.ok());
  auto in = rz::ColoredCycleInput::prepare(*pm.value, col);
  auto fam = rz::build_pairings(in);
  auto atlas = rz::enumerate_covering(in, fam, 100000);
  REQUIRE(atlas.complete);
  auto cert = rz::verify_certificate(atlas, in, fam);
  CHECK(cert.all_checks_pass());
  CHECK(cert.cells == 10584);
  CHECK(cert.k == 126);  // 10584 / 84
  CHECK(cert.cells % 4 == 0);
}

TEST_CASE("dimension three under a small budget: partial atlas, clean invariants") {
  // the state space over the subdivided 4-simplex boundary is far larger
  // than any practical budget; local invariants must still hold everywhere
  auto [sub, col] = simplicial::barycentric_subdivide(simplicial::boundary_of_simplex(4));
  auto pm = simplicial::validate_pseudo_manifold(sub, true);
  REQUIRE(pm.ok());
  auto in = rz::ColoredCycleInput::prepare(*pm.value, col);
  auto fam = rz::build_pairings(in);
  CHECK(fam.omegas.size() == 14);
  auto atlas = rz::enumerate_covering(in, fam, 3000);
  CHECK_FALSE(atlas.complete);
  CHECK(atlas.size() == 3000);
  auto cert = rz::verify_certificate(atlas, in, fam);
  CHECK(cert.parity_coherent);
  CHECK(cert.typeface_coherent);
  CHECK(cert.codim2_commutes);
  CHECK(cert.involutive);
}

TEST_CASE("the machine tracks the cocycle: a equals the action of theta") {
  // replaying s_{w1}...s_{wm} through transitions (left multiplications, so
  // letters run in reverse) must give a = Lambda(theta(word))
  auto in = octahedron_input();
  auto fam = rz::build_pairings(in);
  auto poset = permutahedron::omega_poset(in.n);  // same ascending mask order
  auto s0 = rz::initial_state(fam, in.top_count());
  coxeter::PermAction action{in.top_count(), fam.lambda, in.sigma0};
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<int> word(1 + rng() % 10);
    for (auto& l : word) l = static_cast<int>(rng() % poset.size);
    std::vector<int> reversed(word.rbegin(), word.rend());
    auto state = rz::apply_word(s0, reversed, fam);
    auto th = coxeter::theta(word, poset);
    for (int i = 0; i < in.top_count(); ++i)
      CHECK(state.a[i] == coxeter::act_word(action, th, i));
    // r tracks the small-cover homomorphism: bit |omega|-1 per letter
    uint32_t r = 0;
    for (int l : word) r ^= uint32_t(1) << (std::popcount(fam.omegas[l]) - 1);
    CHECK(state.r == r);
  }
}

TEST_CASE("the algebra suite accepts the realization quotient as its hook") {
  auto in = octahedron_input();
  auto fam = rz::build_pairings(in);
  auto poset = permutahedron::omega_poset(in.n);
  coxeter::PermAction action{in.top_count(), fam.lambda, in.sigma0};
  auto rep = coxeter::verify_semidirect_algebra(poset, 150, 10, 51, &action);
  CHECK(rep.ok());
}

TEST_CASE("corrupting a transition is caught by the certificate checks") {
  auto in = polygon_input(3);
  auto fam = rz::build_pairings(in);
  auto atlas = rz::enumerate_covering(in, fam, 1000);
  REQUIRE(atlas.complete);
  REQUIRE(rz::verify_certificate(atlas, in, fam).all_checks_pass());
  // redirect one transition to a wrong state
  auto corrupted = atlas;
  uint32_t orig = corrupted.transitions[0];
  corrupted.transitions[0] = (orig + 1) % corrupted.size() == 0
                                 ? (orig + 2) % corrupted.size()
                                 : (orig + 1) % corrupted.size();
  auto cert = rz::verify_certificate(corrupted, in, fam);
  CHECK_FALSE(cert.all_checks_pass());
  CHECK_FALSE(cert.witnesses.empty());
}
