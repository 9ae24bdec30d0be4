#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cycleforge/permutahedron.hpp"
#include "cycleforge/rational.hpp"
#include "cycleforge/simplicial.hpp"
#include "cycleforge/small_cover.hpp"

namespace cycleforge::sphere_maps {

using simplicial::AbstractComplex;
using simplicial::OrientedPseudoManifold;
using simplicial::Simplex;

using Vec = std::vector<double>;

inline double norm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double angle_between(const Vec& a, const Vec& b) {
  double c = dot(a, b) / (norm(a) * norm(b));
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

struct ZeroNormError : std::runtime_error {
  ZeroNormError() : std::runtime_error("spherical combination has zero norm") {}
};

/// Normalized nonnegative combination of unit vectors (the f-tilde formula).
inline Vec spherical_barycentric(const std::vector<Vec>& xs, const std::vector<double>& betas) {
  if (xs.empty() || xs.size() != betas.size())
    throw std::invalid_argument("spherical_barycentric: size mismatch");
  Vec sum(xs[0].size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (betas[i] < -1e-15) throw std::invalid_argument("negative weight");
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += betas[i] * xs[i][k];
  }
  double n = norm(sum);
  if (n < 1e-12) throw ZeroNormError();
  for (auto& x : sum) x /= n;
  return sum;
}

/// Spherical placement of the vertices of an (n-1)-complex with the fineness
/// parameter; exact rational directions may ride along for exact sign tests.
struct FineData {
  AbstractComplex K;
  std::vector<Vec> placement;  // unit vectors in R^n
  double eps = 0;
  std::optional<std::vector<RationalVec>> exact;  // unnormalized directions
};

inline FineData make_fine_data(AbstractComplex k, std::vector<Vec> placement, double eps,
                               std::optional<std::vector<RationalVec>> exact = std::nullopt) {
  if (static_cast<int>(placement.size()) != k.vertex_count)
    throw std::invalid_argument("placement size mismatch");
  if (eps <= 0 || eps > M_PI / 2 + 1e-12)
    throw std::invalid_argument("fineness parameter must lie in (0, pi/2]");
  const std::size_t ambient = k.dim + 1;
  for (auto& v : placement) {
    if (v.size() != ambient) throw std::invalid_argument("placement vector has wrong dimension");
    double n = norm(v);
    if (std::fabs(n - 1.0) > 1e-9) throw std::invalid_argument("placement vector is not unit");
  }
  return {std::move(k), std::move(placement), eps, std::move(exact)};
}

// --- degree of a spherical vertex placement -----------------------------------

namespace detail {

inline uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double uniform01(uint64_t& s) {
  return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

inline Vec probe_direction(std::size_t dim, uint64_t& s) {
  // Box-Muller components, deterministic from the stream state
  Vec v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double u1 = uniform01(s), u2 = uniform01(s);
    if (u1 < 1e-300) u1 = 1e-300;
    v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * M_PI * u2);
  }
  double n = norm(v);
  if (n < 1e-9) return probe_direction(dim, s);
  for (auto& x : v) x /= n;
  return v;
}

// solve M c = rhs (column-major columns), also reporting sign(det M);
// returns false when nearly singular
inline bool solve_with_sign(std::vector<Vec> cols, Vec rhs, Vec& out, int& det_sign_out) {
  const std::size_t n = cols.size();
  // build row-major augmented matrix
  std::vector<Vec> m(n, Vec(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) m[r][c] = cols[c][r];
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (std::fabs(m[piv][col]) < 1e-12) return false;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(rhs[piv], rhs[col]);
      sign = -sign;
    }
    if (m[col][col] < 0) sign = -sign;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      if (f == 0) continue;
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  det_sign_out = sign;
  return true;
}

}  // namespace detail

struct DegenerateProbeError : std::runtime_error {
  DegenerateProbeError() : std::runtime_error("all probe directions were degenerate") {}
};

/// Degree of the induced map |K| -> S^{n-1} by a signed count of the
/// spherical simplices covering a probe direction. Probes come from a
/// canonical deterministic sequence; sign tests use exact rationals when the
/// data carries them, a 1e-9 margin otherwise. Three agreeing generic probes
/// are required.
inline int spherical_degree(const FineData& data, const std::vector<int>& orientation,
                            uint64_t seed = 0) {
  const auto& tops = data.K.top_simplices;
  const std::size_t ambient = data.K.dim + 1;
  uint64_t stream = seed ^ 0x5bf03635ull;
  constexpr int kNeeded = 3;
  constexpr int kMaxAttempts = 64;
  int found = 0;
  long long agreed = 0;

  for (int attempt = 0; attempt < kMaxAttempts && found < kNeeded; ++attempt) {
    Vec probe = detail::probe_direction(ambient, stream);
    bool degenerate = false;
    long long total = 0;
    if (data.exact) {
      RationalVec rprobe(ambient);
      for (std::size_t i = 0; i < ambient; ++i)
        rprobe[i] = Rational(static_cast<long long>(probe[i] * (1 << 30)), 1 << 30);
      for (std::size_t t = 0; t < tops.size() && !degenerate; ++t) {
        std::vector<RationalVec> m(ambient, RationalVec(ambient));
        for (std::size_t c = 0; c < ambient; ++c)
          for (std::size_t r = 0; r < ambient; ++r)
            m[r][c] = (*data.exact)[tops[t][c]][r];
        int ds = det_sign(m);
        if (ds == 0) continue;  // flat simplex never covers a generic probe
        RationalVec coeff;
        if (!solve_linear(m, rprobe, coeff)) continue;
        bool inside = true, boundary = false;
        for (const auto& c : coeff) {
          if (c < 0) inside = false;
          if (c == 0) boundary = true;
        }
        if (boundary) degenerate = true;
        if (inside && !boundary) total += orientation[t] * ds;
      }
    } else {
      for (std::size_t t = 0; t < tops.size() && !degenerate; ++t) {
        std::vector<Vec> cols;
        for (int v : tops[t]) cols.push_back(data.placement[v]);
        Vec coeff;
        int ds = 0;
        if (!detail::solve_with_sign(cols, probe, coeff, ds)) continue;
        bool inside = true;
        for (double c : coeff) {
          if (std::fabs(c) < 1e-9) {
            degenerate = true;
            break;
          }
          if (c < 0) inside = false;
        }
        if (degenerate) break;
        if (inside) total += orientation[t] * ds;
      }
    }
    if (degenerate) continue;
    if (found == 0)
      agreed = total;
    else if (total != agreed)
      throw std::logic_error("probe degree disagreement: placement is not a sphere map");
    ++found;
  }
  if (found < kNeeded) throw DegenerateProbeError();
  return static_cast<int>(agreed);
}

// --- fineness certificate -------------------------------------------------------

struct FineViolation {
  Simplex simplex;
  double diameter = 0;
};

struct FineCertificate {
  bool pass = false;
  int degree = 0;
  std::vector<FineViolation> violations;
};

/// Verifies all simplexwise pairwise spherical distances are strictly below
/// eps (the strictness guard is 1e-12) and computes the degree of the
/// induced sphere map.
inline FineCertificate fine_certificate(const FineData& data, uint64_t seed = 0) {
  auto pm = simplicial::validate_pseudo_manifold(data.K, true);
  if (!pm.ok())
    throw std::invalid_argument("fine_certificate: input is not an oriented pseudo-manifold");
  FineCertificate out;
  for (const auto& top : data.K.top_simplices) {
    double diam = 0;
    for (std::size_t i = 0; i < top.size(); ++i)
      for (std::size_t j = i + 1; j < top.size(); ++j)
        diam = std::max(diam, angle_between(data.placement[top[i]], data.placement[top[j]]));
    if (!(diam < data.eps - 1e-12)) out.violations.push_back({top, diam});
  }
  out.pass = out.violations.empty();
  if (out.pass) out.degree = spherical_degree(data, pm.value->orientation, seed);
  return out;
}

// --- hyperbolic inradius route ---------------------------------------------------

inline double inradius_epsilon(double sinh_rho) {
  if (sinh_rho <= 0) throw std::invalid_argument("sinh rho must be positive");
  return 2.0 * std::atan(1.0 / sinh_rho);
}

struct BoundViolatedError : std::runtime_error {
  int i, j;
  BoundViolatedError(int i_, int j_)
      : std::runtime_error("facet pair inconsistent with the claimed inradius"),
        i(i_), j(j_) {}
};

/// Fineness data from hyperbolic inradius input: one unit direction per
/// facet (foot of perpendicular) and sinh of the inradius. Intersecting
/// facets must satisfy the strict distance bound the inradius implies.
inline FineData inradius_fine(const AbstractComplex& k_p, std::vector<Vec> xi,
                              double sinh_rho) {
  double eps = inradius_epsilon(sinh_rho);
  for (const auto& e : k_p.faces(1))
    if (!(angle_between(xi[e[0]], xi[e[1]]) < eps - 1e-12))
      throw BoundViolatedError(e[0], e[1]);
  return make_fine_data(k_p, std::move(xi), eps);
}

// --- sparse chart and the map synthesis ------------------------------------------

/// Boundary chart of a sparse target: its nerve complex, region membership,
/// pairwise region intersection, and diameter bounds.
struct SparseChart {
  int n = 0;
  AbstractComplex target;
  OrientedPseudoManifold target_pm;
  double eps = 0;
  bool is_flag = false;
  std::vector<double> region_diameter;  // per target vertex id
  std::function<std::vector<int>(const Vec&)> regions_containing;  // target vertex ids
  std::function<bool(int, int)> regions_intersect;
};

/// The permutahedron radial chart as a SparseChart over K of the
/// permutahedron (vertex ids in canonical subset order). Sphere points
/// arrive as vectors in R^n and are embedded into the ambient hyperplane
/// through the canonical orthonormal frame; the target carries the matching
/// geometric orientation, so synthesized degrees compare sign-exactly with
/// spherical winding numbers.
inline SparseChart permutahedron_chart(int n, double membership_tol = 1e-9) {
  SparseChart chart;
  chart.n = n;
  chart.target_pm = permutahedron::oriented_dual_pm(n);
  chart.target = chart.target_pm.complex;
  chart.eps = static_cast<double>(permutahedron::constants(n).eps);
  chart.is_flag = true;  // chains of a poset: cliques are chains
  auto rc = permutahedron::radial_chart(n);
  auto elems = permutahedron::omega_elements(n);
  chart.region_diameter.resize(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i)
    chart.region_diameter[i] = static_cast<double>(rc.region_diameter_bound(elems[i]));
  auto frame = permutahedron::hyperplane_frame(n);
  chart.regions_containing = [rc, frame, n, membership_tol](const Vec& point) {
    if (static_cast<int>(point.size()) != n)
      throw std::invalid_argument("chart point must have sphere dimension");
    std::vector<double> dir(n + 1, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k <= n; ++k) dir[k] += point[i] * frame[i][k];
    auto masks = rc.regions_containing(dir, membership_tol);
    std::vector<int> ids;
    for (uint32_t m : masks) ids.push_back(permutahedron::omega_index(m));
    return ids;
  };
  chart.regions_intersect = [elems](int i, int j) {
    return i == j || permutahedron::strict_subset(elems[i], elems[j]) ||
           permutahedron::strict_subset(elems[j], elems[i]);
  };
  return chart;
}

struct NotFlagError : std::runtime_error {
  NotFlagError() : std::runtime_error("sparse target is not flag") {}
};

struct PhiResult {
  simplicial::SimplicialMap map;
  std::vector<int> phi;  // vertex -> region id
  int degree = 0;
  bool nonzero_degree = false;
  bool simplicial_ok = false;
  bool homotopy_ok = false;
  std::string diagnostics;
};

/// Vertex-by-vertex synthesis: send each vertex to a region containing its
/// chart preimage (least region id breaks ties), verify simpliciality
/// through flagness plus the complex itself, verify the vertexwise homotopy
/// inequalities, and compute the degree.
inline PhiResult construct_phi(const FineData& fine, const SparseChart& chart) {
  if (fine.eps > chart.eps + 1e-12)
    throw std::invalid_argument("construct_phi: fine data is coarser than the chart");
  if (!chart.is_flag) throw NotFlagError();

  PhiResult out;
  out.phi.resize(fine.K.vertex_count);
  for (int v = 0; v < fine.K.vertex_count; ++v) {
    auto regions = chart.regions_containing(fine.placement[v]);
    if (regions.empty()) throw std::logic_error("chart membership came back empty");
    out.phi[v] = *std::min_element(regions.begin(), regions.end());
  }

  // homotopy sufficient conditions at vertices: the chosen region contains
  // the placed point (by construction) and its diameter stays below pi - eps
  out.homotopy_ok = true;
  for (int v = 0; v < fine.K.vertex_count; ++v)
    if (!(chart.region_diameter[out.phi[v]] <= M_PI - chart.eps + 1e-9)) {
      out.homotopy_ok = false;
      out.diagnostics += "diameter bound fails at vertex " + std::to_string(v) + "; ";
    }

  // simpliciality: pairwise intersection within every top simplex, then the
  // flag property closes the simplex; re-checked against the actual complex
  out.simplicial_ok = true;
  for (const auto& top : fine.K.top_simplices) {
    for (std::size_t i = 0; i < top.size() && out.simplicial_ok; ++i)
      for (std::size_t j = i + 1; j < top.size(); ++j)
        if (!chart.regions_intersect(out.phi[top[i]], out.phi[top[j]])) {
          out.simplicial_ok = false;
          out.diagnostics += "regions of an edge do not intersect; ";
          break;
        }
  }
  out.map.source = fine.K;
  out.map.target = chart.target;
  out.map.vertex_map = out.phi;
  if (!out.simplicial_ok) return out;  // degree stays 0, diagnostics carry the reason
  simplicial::check_simplicial(out.map);

  auto src = simplicial::validate_pseudo_manifold(fine.K, true);
  if (!src.ok()) throw std::invalid_argument("construct_phi: source must be oriented");
  out.degree = simplicial::map_degree(out.map, *src.value, chart.target_pm);
  out.nonzero_degree = out.degree != 0;
  if (!out.nonzero_degree) out.diagnostics += "degree is zero; ";
  return out;
}

struct DominationPipelineReport {
  int n = 0;
  double fine_eps = 0;
  double eps_n = 0;
  int phi_degree = 0;
  int phi_into_delta_prime_degree = 0;  // after the dual-complex isomorphism
  long long cell_degree = 0;
  bool ok = false;
};

/// Full chain: fine placement -> permutahedron chart map -> dual-complex
/// relabeling -> induced cell map of the real moment-angle quotients.
inline DominationPipelineReport dominate_via_permutahedron(const FineData& fine,
                                                           double membership_tol = 1e-9) {
  DominationPipelineReport rep;
  rep.n = fine.K.dim + 1;
  rep.fine_eps = fine.eps;
  rep.eps_n = static_cast<double>(permutahedron::constants(rep.n).eps);
  if (fine.eps > rep.eps_n + 1e-12)
    throw std::invalid_argument("input is not fine enough for the permutahedron chart");

  SparseChart chart = permutahedron_chart(rep.n, membership_tol);
  PhiResult phi = construct_phi(fine, chart);
  rep.phi_degree = phi.degree;
  if (!phi.nonzero_degree) return rep;

  // relabel through the verified isomorphism onto the subdivided simplex
  // boundary and re-run the degree there
  auto dual = permutahedron::dual_complex(rep.n);
  if (!dual.iso_verified) throw std::logic_error("dual complex isomorphism failed");
  simplicial::SimplicialMap into_prime;
  into_prime.source = fine.K;
  into_prime.target = dual.delta_prime;
  into_prime.vertex_map.resize(fine.K.vertex_count);
  for (int v = 0; v < fine.K.vertex_count; ++v)
    into_prime.vertex_map[v] = dual.iso[phi.phi[v]];
  auto src = simplicial::validate_pseudo_manifold(fine.K, true);
  auto tgt = simplicial::validate_pseudo_manifold(dual.delta_prime, true);
  rep.phi_into_delta_prime_degree = simplicial::map_degree(into_prime, *src.value, *tgt.value);

  auto dom = small_cover::induced_domination(phi.map, *src.value, chart.target_pm);
  rep.cell_degree = dom.cell_degree;
  rep.ok = rep.cell_degree != 0;
  return rep;
}

}  // namespace cycleforge::sphere_maps
