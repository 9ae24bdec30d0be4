#include <doctest.h>

#include <cmath>
#include <random>

#include "cycleforge/sphere_maps.hpp"

using namespace cycleforge;
namespace sm = cycleforge::sphere_maps;
using simplicial::AbstractComplex;
using simplicial::Simplex;

namespace {

AbstractComplex cycle_complex(int k) {
  std::vector<Simplex> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
  return AbstractComplex::from_top(k, std::move(edges));
}

std::vector<sm::Vec> polygon_placement(int k, double offset = 0.0) {
  std::vector<sm::Vec> p(k);
  for (int i = 0; i < k; ++i) {
    double a = 2 * M_PI * i / k + offset;
    p[i] = {std::cos(a), std::sin(a)};
  }
  return p;
}

// icosahedron with the cap/band/cap labeling used across the test suite
AbstractComplex icosahedron() {
  std::vector<Simplex> f = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5}};
  for (int i = 0; i < 5; ++i) {
    int u = 1 + i, un = 1 + (i + 1) % 5, l = 6 + i, ln = 6 + (i + 1) % 5;
    f.push_back({u, un, l});
    f.push_back({un, l, ln});
    f.push_back({11, l, ln});
  }
  return AbstractComplex::from_top(12, std::move(f));
}

std::vector<sm::Vec> icosahedron_placement() {
  std::vector<sm::Vec> p(12);
  const double lat = std::atan(0.5);
  p[0] = {0, 0, 1};
  p[11] = {0, 0, -1};
  for (int i = 0; i < 5; ++i) {
    double au = 2 * M_PI * i / 5;
    double al = au + M_PI / 5;
    p[1 + i] = {std::cos(lat) * std::cos(au), std::cos(lat) * std::sin(au), std::sin(lat)};
    p[6 + i] = {std::cos(lat) * std::cos(al), std::cos(lat) * std::sin(al), -std::sin(lat)};
  }
  return p;
}

}  // namespace

TEST_CASE("spherical barycentric combinations") {
  SUBCASE("single vertex") {
    auto v = sm::spherical_barycentric({{0.0, 1.0}}, {1.0});
    CHECK(v[0] == doctest::Approx(0.0));
    CHECK(v[1] == doctest::Approx(1.0));
  }
  SUBCASE("orthogonal bisector") {
    auto v = sm::spherical_barycentric({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5});
    CHECK(v[0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(v[1] == doctest::Approx(std::sqrt(0.5)));
  }
  SUBCASE("antipodal pair degenerates") {
    CHECK_THROWS_AS(sm::spherical_barycentric({{1.0, 0.0}, {-1.0, 0.0}}, {0.5, 0.5}),
                    sm::ZeroNormError);
  }
  SUBCASE("stays within the hull of close points") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
      double base = static_cast<double>(rng() % 1000) / 1000 * 2 * M_PI;
      double spread = 0.8;  // < pi/2
      std::vector<sm::Vec> pts;
      double lo = 10, hi = -10;
      for (int i = 0; i < 3; ++i) {
        double a = base + spread * static_cast<double>(rng() % 1000) / 1000;
        pts.push_back({std::cos(a), std::sin(a)});
      }
      std::vector<double> w = {0.2, 0.3, 0.5};
      auto v = sm::spherical_barycentric(pts, w);
      // result within max pairwise distance of every input
      double maxpair = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          maxpair = std::max(maxpair, sm::angle_between(pts[i], pts[j]));
      for (int i = 0; i < 3; ++i) CHECK(sm::angle_between(v, pts[i]) <= maxpair + 1e-12);
      (void)lo;
      (void)hi;
    }
  }
}

TEST_CASE("fine certificate on polygons") {
  SUBCASE("regular 12-gon at eps = pi/3 passes with degree +-1") {
    auto data = sm::make_fine_data(cycle_complex(12), polygon_placement(12), M_PI / 3);
    auto cert = sm::fine_certificate(data);
    CHECK(cert.pass);
    CHECK(std::abs(cert.degree) == 1);
  }
  SUBCASE("doubled 12-gon: edge diameter equals eps, rejected") {
    std::vector<sm::Vec> p(12);
    for (int i = 0; i < 12; ++i) {
      double a = 2 * M_PI * (2 * i) / 12.0;
      p[i] = {std::cos(a), std::sin(a)};
    }
    auto data = sm::make_fine_data(cycle_complex(12), p, M_PI / 3);
    auto cert = sm::fine_certificate(data);
    CHECK_FALSE(cert.pass);
    CHECK_FALSE(cert.violations.empty());
  }
  SUBCASE("doubled 12-gon with room passes with degree +-2") {
    std::vector<sm::Vec> p(12);
    for (int i = 0; i < 12; ++i) {
      double a = 2 * M_PI * (2 * i) / 12.0;
      p[i] = {std::cos(a), std::sin(a)};
    }
    auto data = sm::make_fine_data(cycle_complex(12), p, M_PI / 2);
    auto cert = sm::fine_certificate(data);
    CHECK(cert.pass);
    CHECK(std::abs(cert.degree) == 2);
  }
}

TEST_CASE("fine certificate on the icosahedron") {
  auto data = sm::make_fine_data(icosahedron(), icosahedron_placement(), 1.2);
  auto cert = sm::fine_certificate(data);
  CHECK(cert.pass);
  CHECK(std::abs(cert.degree) == 1);
}

TEST_CASE("spherical degree is rotation invariant") {
  std::mt19937_64 rng(31);
  auto base = sm::make_fine_data(cycle_complex(12), polygon_placement(12), M_PI / 3);
  int d0 = sm::fine_certificate(base).degree;
  for (int t = 0; t < 20; ++t) {
    double a = static_cast<double>(rng() % 100000) / 100000 * 2 * M_PI;
    auto data = sm::make_fine_data(cycle_complex(12), polygon_placement(12, a), M_PI / 3);
    CHECK(sm::fine_certificate(data).degree == d0);
  }
}

TEST_CASE("exact-mode degree agrees with float mode") {
  // square placement with exact rational directions
  auto k = cycle_complex(4);
  std::vector<sm::Vec> p = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<RationalVec> exact = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  auto dataf = sm::make_fine_data(k, p, M_PI / 2);
  auto datae = sm::make_fine_data(k, p, M_PI / 2, exact);
  auto pm = simplicial::validate_pseudo_manifold(k, true);
  CHECK(sm::spherical_degree(dataf, pm.value->orientation) ==
        sm::spherical_degree(datae, pm.value->orientation));
}

TEST_CASE("inradius route") {
  SUBCASE("epsilon from sinh rho") {
    CHECK(sm::inradius_epsilon(1.0) == doctest::Approx(M_PI / 2));
    for (int n = 1; n <= 50; ++n) {
      auto t = permutahedron::constants(n);
      double cot_half = std::cos(static_cast<double>(t.eps) / 2) /
                        std::sin(static_cast<double>(t.eps) / 2);
      CHECK(std::fabs(sm::inradius_epsilon(cot_half) - static_cast<double>(t.eps)) < 1e-9);
    }
  }
  SUBCASE("emits fine data over the input complex") {
    auto fd = sm::inradius_fine(cycle_complex(12), polygon_placement(12), 1.0);
    CHECK(fd.eps == doctest::Approx(M_PI / 2));
    CHECK(fd.K.vertex_count == 12);
  }
  SUBCASE("far facet pair is rejected") {
    // pentagon with one vertex direction flipped far away
    auto p = polygon_placement(5);
    p[2] = {-p[2][0], -p[2][1]};
    CHECK_THROWS_AS(sm::inradius_fine(cycle_complex(5), p, 3.0), sm::BoundViolatedError);
  }
}

TEST_CASE("construct_phi: 12-gon into the hexagon chart") {
  auto chart = sm::permutahedron_chart(2);
  auto data = sm::make_fine_data(cycle_complex(12), polygon_placement(12, 0.05), M_PI / 3);
  auto fine = sm::fine_certificate(data);
  REQUIRE(fine.pass);
  auto res = sm::construct_phi(data, chart);
  CHECK(res.simplicial_ok);
  CHECK(res.homotopy_ok);
  CHECK(res.nonzero_degree);
  CHECK(std::abs(res.degree) == 1);
  CHECK(res.degree == fine.degree);
}

TEST_CASE("construct_phi degree matches the winding number over random rotations") {
  auto chart = sm::permutahedron_chart(2);
  std::mt19937_64 rng(2718);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    double a = static_cast<double>(rng() % 1000000) / 1000000 * 2 * M_PI;
    auto data = sm::make_fine_data(cycle_complex(12), polygon_placement(12, a), M_PI / 3);
    auto fine = sm::fine_certificate(data);
    REQUIRE(fine.pass);
    auto res = sm::construct_phi(data, chart);
    CHECK(res.simplicial_ok);
    CHECK(res.nonzero_degree);
    CHECK(res.degree == fine.degree);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("construct_phi rejects coarse data at the precondition") {
  auto chart = sm::permutahedron_chart(2);
  auto data = sm::make_fine_data(cycle_complex(4), polygon_placement(4), M_PI / 2);
  CHECK_THROWS_AS(sm::construct_phi(data, chart), std::invalid_argument);
}

TEST_CASE("a placement that is not actually fine fails simpliciality, not degree") {
  // the square placement's edges span 90 degrees; claiming eps = pi/3 passes
  // the precondition but its vertices land in regions that cannot intersect
  auto chart = sm::permutahedron_chart(2);
  auto data = sm::make_fine_data(cycle_complex(4), polygon_placement(4, 0.1), M_PI / 3);
  CHECK_FALSE(sm::fine_certificate(data).pass);
  auto res = sm::construct_phi(data, chart);
  CHECK_FALSE(res.simplicial_ok);
  CHECK_FALSE(res.nonzero_degree);
  CHECK_FALSE(res.diagnostics.empty());
}

TEST_CASE("identity-like synthesis from the chart's own facet directions") {
  auto chart = sm::permutahedron_chart(2);
  auto g = permutahedron::build_geometry(2);
  auto elems = permutahedron::omega_elements(2);
  auto frame = permutahedron::hyperplane_frame(2);
  std::vector<sm::Vec> place(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    auto dir = permutahedron::facet_direction(g, elems[i]);
    sm::Vec v(2, 0.0);
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k <= 2; ++k) v[r] += frame[r][k] * to_double(dir[k]);
    double nn = sm::norm(v);
    for (auto& x : v) x /= nn;
    place[i] = v;
  }
  auto dual = permutahedron::dual_complex(2);
  auto data = sm::make_fine_data(dual.complex, place, M_PI / 3);
  auto res = sm::construct_phi(data, chart);
  CHECK(res.simplicial_ok);
  CHECK(std::abs(res.degree) == 1);
  // each facet direction lands in its own region
  for (std::size_t i = 0; i < elems.size(); ++i) CHECK(res.phi[i] == static_cast<int>(i));
}

TEST_CASE("tie-breaks on region boundaries do not change the degree") {
  // the unrotated 12-gon parks several vertices on chart corners, where two
  // regions contain the preimage; any containing region is a legal choice
  auto chart = sm::permutahedron_chart(2);
  auto data = sm::make_fine_data(cycle_complex(12), polygon_placement(12), M_PI / 3);
  int corner_vertices = 0;
  std::vector<int> least(12), greatest(12);
  for (int v = 0; v < 12; ++v) {
    auto regions = chart.regions_containing(data.placement[v]);
    REQUIRE_FALSE(regions.empty());
    if (regions.size() > 1) ++corner_vertices;
    least[v] = *std::min_element(regions.begin(), regions.end());
    greatest[v] = *std::max_element(regions.begin(), regions.end());
  }
  CHECK(corner_vertices > 0);

  auto src = simplicial::validate_pseudo_manifold(data.K, true);
  simplicial::SimplicialMap lo{data.K, chart.target, least};
  simplicial::SimplicialMap hi{data.K, chart.target, greatest};
  int deg_lo = simplicial::map_degree(lo, *src.value, chart.target_pm);
  int deg_hi = simplicial::map_degree(hi, *src.value, chart.target_pm);
  CHECK(deg_lo == deg_hi);
  CHECK(deg_lo == sm::construct_phi(data, chart).degree);
}

TEST_CASE("full domination pipeline for the 12-gon") {
  auto data = sm::make_fine_data(cycle_complex(12), polygon_placement(12, 0.1), M_PI / 3);
  auto rep = sm::dominate_via_permutahedron(data);
  CHECK(rep.ok);
  CHECK(std::abs(rep.phi_degree) == 1);
  CHECK(std::abs(rep.phi_into_delta_prime_degree) == 1);
  CHECK(std::abs(rep.cell_degree) == 64);  // 2^(12-6) * 1
}

TEST_CASE("coarse input is rejected by the pipeline") {
  auto data = sm::make_fine_data(cycle_complex(4), polygon_placement(4), M_PI / 2);
  CHECK_THROWS_AS(sm::dominate_via_permutahedron(data), std::invalid_argument);
}

TEST_CASE("hyperbolic inradius route feeds the pipeline") {
  // foot-of-perpendicular directions for the 12-gon; sinh rho = cot(eps_2/2)
  // reproduces exactly the fineness the chart needs
  double eps2 = static_cast<double>(permutahedron::constants(2).eps);
  double sinh_rho = std::cos(eps2 / 2) / std::sin(eps2 / 2);
  auto fd = sm::inradius_fine(cycle_complex(12), polygon_placement(12, 0.2), sinh_rho);
  CHECK(fd.eps == doctest::Approx(eps2));
  auto rep = sm::dominate_via_permutahedron(fd);
  CHECK(rep.ok);
  CHECK(std::abs(rep.cell_degree) == 64);
}

TEST_CASE("synthesis in dimension three from a geodesic icosphere") {
  // two barycentric subdivisions of the icosahedron with vertices pushed to
  // normalized barycenters: 720 spherical triangles, fine at eps_3
  auto complex = icosahedron();
  auto place = icosahedron_placement();
  for (int level = 0; level < 2; ++level) {
    auto faces = complex.all_faces();
    auto [sub, col] = simplicial::barycentric_subdivide(complex);
    (void)col;
    std::vector<sm::Vec> next(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i) {
      sm::Vec v(3, 0.0);
      for (int vid : faces[i])
        for (int k = 0; k < 3; ++k) v[k] += place[vid][k];
      double nn = sm::norm(v);
      for (auto& x : v) x /= nn;
      next[i] = v;
    }
    complex = std::move(sub);
    place = std::move(next);
  }
  double eps3 = static_cast<double>(permutahedron::constants(3).eps);
  auto data = sm::make_fine_data(complex, place, eps3);
  auto fine = sm::fine_certificate(data);
  REQUIRE(fine.pass);
  CHECK(std::abs(fine.degree) == 1);
  auto chart = sm::permutahedron_chart(3);
  auto res = sm::construct_phi(data, chart);
  CHECK(res.simplicial_ok);
  CHECK(res.homotopy_ok);
  CHECK(res.degree == fine.degree);
}
