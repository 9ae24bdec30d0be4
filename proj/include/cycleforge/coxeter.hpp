#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge::coxeter {

/// Finite strict partial order on elements 0..size-1.
struct Poset {
  int size = 0;
  std::vector<std::vector<char>> less;  // less[a][b]: a < b strictly

  bool lt(int a, int b) const { return less[a][b] != 0; }
  bool comparable(int a, int b) const { return a != b && (lt(a, b) || lt(b, a)); }

  bool valid() const {
    for (int a = 0; a < size; ++a) {
      if (less[a][a]) return false;
      for (int b = 0; b < size; ++b) {
        if (less[a][b] && less[b][a]) return false;
        for (int c = 0; c < size; ++c)
          if (less[a][b] && less[b][c] && !less[a][c]) return false;
      }
    }
    return true;
  }

  static Poset empty(int k) {
    Poset p;
    p.size = k;
    p.less.assign(k, std::vector<char>(k, 0));
    return p;
  }

  static Poset antichain(int k) { return empty(k); }

  static Poset chain(int k) {
    Poset p = empty(k);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) p.less[a][b] = 1;
    return p;
  }

  // Transitive closure of arbitrary acyclic cover relations.
  static Poset from_relations(int k, const std::vector<std::pair<int, int>>& rel) {
    Poset p = empty(k);
    for (auto [a, b] : rel) p.less.at(a).at(b) = 1;
    for (int m = 0; m < k; ++m)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          if (p.less[a][m] && p.less[m][b]) p.less[a][b] = 1;
    if (!p.valid()) throw std::invalid_argument("relations do not define a strict order");
    return p;
  }
};

/// Word in the involutive generators x_w of the free product of Z2 factors.
/// Reduced form (no equal adjacent letters) is the unique normal form.
struct InvolutionWord {
  std::vector<int> letters;
  bool operator==(const InvolutionWord&) const = default;
};

inline InvolutionWord reduce(const InvolutionWord& w) {
  InvolutionWord out;
  for (int l : w.letters) {
    if (!out.letters.empty() && out.letters.back() == l)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

inline InvolutionWord inverse(const InvolutionWord& w) {
  InvolutionWord out = w;
  std::reverse(out.letters.begin(), out.letters.end());
  return out;
}

inline InvolutionWord concat(const InvolutionWord& a, const InvolutionWord& b) {
  InvolutionWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return reduce(out);
}

/// One generator application: x_g -> x_w x_g x_w when g < w, fixed otherwise.
inline InvolutionWord apply_psi(int w, const InvolutionWord& word, const Poset& p) {
  InvolutionWord out;
  for (int g : word.letters) {
    if (p.lt(g, w)) {
      out.letters.push_back(w);
      out.letters.push_back(g);
      out.letters.push_back(w);
    } else {
      out.letters.push_back(g);
    }
  }
  return reduce(out);
}

/// Automorphism stored as a word in the involutive psi generators; equality
/// is semantic (images of all generators agree), inverse is the reversed
/// word.
struct AutWord {
  std::vector<int> letters;
};

inline AutWord aut_inverse(const AutWord& a) {
  AutWord out = a;
  std::reverse(out.letters.begin(), out.letters.end());
  return out;
}

inline AutWord aut_concat(const AutWord& a, const AutWord& b) {
  AutWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

// psi_{l1} (psi_{l2} (... psi_{lk}(w)))
inline InvolutionWord apply(const AutWord& a, InvolutionWord w, const Poset& p) {
  for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it)
    w = apply_psi(*it, w, p);
  return w;
}

inline bool aut_equal(const AutWord& a, const AutWord& b, const Poset& p) {
  for (int g = 0; g < p.size; ++g) {
    InvolutionWord x{{g}};
    if (!(apply(a, x, p) == apply(b, x, p))) return false;
  }
  return true;
}

/// Element of the semidirect product written psi * x (automorphism part
/// first). The x part is kept reduced.
struct SemiDirectElement {
  AutWord psi;
  InvolutionWord x;
};

inline SemiDirectElement identity_element() { return {}; }

// s_w = x_w psi_w; in psi-first form the parts are (psi_w, x_w).
inline SemiDirectElement s_element(int w) { return {AutWord{{w}}, InvolutionWord{{w}}}; }

// (psi1 x1)(psi2 x2) = (psi1 psi2) (psi2^{-1}(x1) x2)
inline SemiDirectElement multiply(const SemiDirectElement& g, const SemiDirectElement& h,
                                  const Poset& p) {
  SemiDirectElement out;
  out.psi = aut_concat(g.psi, h.psi);
  out.x = concat(apply(aut_inverse(h.psi), g.x, p), h.x);
  return out;
}

inline bool sd_equal(const SemiDirectElement& g, const SemiDirectElement& h, const Poset& p) {
  return reduce(g.x) == reduce(h.x) && aut_equal(g.psi, h.psi, p);
}

inline SemiDirectElement product_of_s(const std::vector<int>& sword, const Poset& p) {
  SemiDirectElement g = identity_element();
  for (int w : sword) g = multiply(g, s_element(w), p);
  return g;
}

/// The cocycle: x-part of the product of the s_w letters.
inline InvolutionWord theta(const std::vector<int>& sword, const Poset& p) {
  return product_of_s(sword, p).x;
}

// --- right-angled Coxeter normal forms -------------------------------------
//
// Generators s_w commute exactly for comparable pairs. A word is geodesic
// when no two equal letters can be brought together across commuting
// letters; two geodesics are equal iff they lie in the same commutation
// class, whose lexicographically least linearization is the normal form.

inline bool racg_commute(int a, int b, const Poset& p) { return p.comparable(a, b); }

inline std::vector<int> racg_normal_form(std::vector<int> w, const Poset& p) {
  // cancellation: delete pairs w[i] == w[j] with everything between commuting
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        if (w[j] == w[i]) {
          w.erase(w.begin() + j);
          w.erase(w.begin() + i);
          changed = true;
          break;
        }
        if (!racg_commute(w[i], w[j], p)) break;
      }
    }
  }
  // lexicographically least linearization of the commutation class
  std::vector<int> out;
  out.reserve(w.size());
  while (!w.empty()) {
    int best = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      bool movable = true;
      for (std::size_t j = 0; j < i; ++j)
        if (!racg_commute(w[j], w[i], p)) {
          movable = false;
          break;
        }
      if (movable && (best < 0 || w[i] < w[best])) best = static_cast<int>(i);
    }
    out.push_back(w[best]);
    w.erase(w.begin() + best);
  }
  return out;
}

inline bool racg_equal(const std::vector<int>& w1, const std::vector<int>& w2, const Poset& p) {
  return racg_normal_form(w1, p) == racg_normal_form(w2, p);
}

// --- structural checks ------------------------------------------------------

/// True when the reduced word has the shape y x_w y^{-1} with y supported on
/// the letters strictly above w.
inline bool is_conjugate_of_generator(const InvolutionWord& reduced_word, int w,
                                      const Poset& p) {
  const auto& l = reduced_word.letters;
  if (l.size() % 2 == 0) return false;
  std::size_t mid = l.size() / 2;
  if (l[mid] != w) return false;
  for (std::size_t i = 0; i < mid; ++i) {
    if (l[i] != l[l.size() - 1 - i]) return false;
    if (!p.lt(w, l[i])) return false;
  }
  return true;
}

/// Finite permutation action hook: one involution per poset element plus a
/// base point, as the realization machinery supplies.
struct PermAction {
  int points = 0;
  std::vector<std::vector<int>> gen_perms;  // indexed by poset element
  int base = 0;
};

inline int act_word(const PermAction& a, const InvolutionWord& w, int point) {
  // x-words act on the right of the product: letters apply left to right
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    point = a.gen_perms[*it][point];
  return point;
}

struct Counterexample {
  std::string check;
  std::vector<int> word;
  int omega = -1;
};

struct VerifyReport {
  long long trials = 0;
  std::vector<Counterexample> failures;
  bool ok() const { return failures.empty(); }
};

/// Randomized verification of the semidirect-product algebra: conjugate shape of
/// psi(x_w), the theta cocycle identity with conjugator support above w,
/// commutation for comparable pairs, agreement of the Coxeter normal form
/// with semidirect equality, the length-parity law, and (when a finite
/// action is supplied) invariance of theta-cosets under kernel elements.
inline VerifyReport verify_semidirect_algebra(const Poset& p, int trials, int max_len,
                                              uint64_t seed,
                                              const PermAction* quotient = nullptr) {
  VerifyReport rep;
  if (p.size == 0) return rep;
  std::mt19937_64 rng(seed);
  auto rand_letter = [&] { return static_cast<int>(rng() % p.size); };
  auto rand_word = [&](int cap) {
    std::vector<int> w(1 + rng() % static_cast<uint64_t>(cap));
    for (auto& l : w) l = rand_letter();
    return w;
  };

  for (int t = 0; t < trials; ++t) {
    ++rep.trials;
    // automorphism images: psi(x_w) = y x_w y^{-1}, y above w
    {
      AutWord psi{rand_word(max_len)};
      int w = rand_letter();
      auto img = apply(psi, InvolutionWord{{w}}, p);
      if (!is_conjugate_of_generator(img, w, p))
        rep.failures.push_back({"psi_conjugate_shape", psi.letters, w});
    }
    // cocycle identity: theta(s_w g) theta(g)^{-1} = y x_w y^{-1}
    {
      auto gword = rand_word(max_len);
      int w = rand_letter();
      auto with = gword;
      with.insert(with.begin(), w);
      auto lhs = concat(theta(with, p), inverse(theta(gword, p)));
      if (!is_conjugate_of_generator(lhs, w, p))
        rep.failures.push_back({"theta_cocycle", with, w});
    }
    // comparable generators commute
    {
      int a = rand_letter(), b = rand_letter();
      if (p.comparable(a, b)) {
        auto ab = multiply(s_element(a), s_element(b), p);
        auto ba = multiply(s_element(b), s_element(a), p);
        if (!sd_equal(ab, ba, p)) rep.failures.push_back({"comparable_commute", {a, b}, -1});
      }
    }
    // the rewriting system agrees with the semidirect representation
    {
      auto w1 = rand_word(max_len), w2 = rand_word(max_len);
      bool rewrite = racg_equal(w1, w2, p);
      bool semantic = sd_equal(product_of_s(w1, p), product_of_s(w2, p), p);
      if (rewrite != semantic) {
        auto both = w1;
        both.push_back(-1);
        both.insert(both.end(), w2.begin(), w2.end());
        rep.failures.push_back({"racg_vs_semidirect", both, -1});
      }
    }
    // parity law: |theta(g)| = |g| mod 2
    {
      auto gword = rand_word(max_len);
      if (theta(gword, p).letters.size() % 2 != gword.size() % 2)
        rep.failures.push_back({"length_parity", gword, -1});
    }
    // coset invariance over a finite quotient: right-multiplying by an
    // element whose automorphism part fixes the action and whose x part
    // stabilizes the base point does not move theta(g) . base

    if (quotient) {
      auto wword = rand_word(2 * max_len);
      auto el = product_of_s(wword, p);
      bool psi_fixes = true;
      for (int g = 0; g < p.size && psi_fixes; ++g) {
        auto img = apply(aut_inverse(el.psi), InvolutionWord{{g}}, p);
        for (int pt = 0; pt < quotient->points; ++pt)
          if (act_word(*quotient, img, pt) != quotient->gen_perms[g][pt]) {
            psi_fixes = false;
            break;
          }
      }
      if (psi_fixes && act_word(*quotient, el.x, quotient->base) == quotient->base) {
        auto gword = rand_word(max_len);
        auto gw = gword;
        gw.insert(gw.end(), wword.begin(), wword.end());
        int before = act_word(*quotient, theta(gword, p), quotient->base);
        int after = act_word(*quotient, theta(gw, p), quotient->base);
        if (before != after) rep.failures.push_back({"theta_coset_invariance", gw, -1});
      }
    }
  }
  return rep;
}

// --- right-angled Artin variant ---------------------------------------------
//
// Free-group letters are signed: +(g+1) for x_g, -(g+1) for its inverse.

struct FreeWord {
  std::vector<int> letters;
  bool operator==(const FreeWord&) const = default;
};

inline FreeWord free_reduce(const FreeWord& w) {
  FreeWord out;
  for (int l : w.letters) {
    if (!out.letters.empty() && out.letters.back() == -l)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

inline FreeWord free_inverse(const FreeWord& w) {
  FreeWord out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

inline FreeWord free_concat(const FreeWord& a, const FreeWord& b) {
  FreeWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return free_reduce(out);
}

// psi_w in the free-group variant: x_g -> x_w x_g x_w^{-1} for g < w.
// sign = +1 applies psi_w, sign = -1 its inverse.
inline FreeWord free_apply_psi(int w, int sign, const FreeWord& word, const Poset& p) {
  FreeWord out;
  for (int l : word.letters) {
    int g = std::abs(l) - 1;
    if (p.lt(g, w)) {
      out.letters.push_back(sign * (w + 1));
      out.letters.push_back(l);
      out.letters.push_back(-sign * (w + 1));
    } else {
      out.letters.push_back(l);
    }
  }
  return free_reduce(out);
}

struct FreeAutWord {
  std::vector<int> letters;  // signed psi letters
};

inline FreeAutWord free_aut_inverse(const FreeAutWord& a) {
  FreeAutWord out;
  for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

inline FreeWord free_apply(const FreeAutWord& a, FreeWord w, const Poset& p) {
  for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it)
    w = free_apply_psi(std::abs(*it) - 1, *it > 0 ? 1 : -1, w, p);
  return w;
}

inline bool free_aut_equal(const FreeAutWord& a, const FreeAutWord& b, const Poset& p) {
  for (int g = 0; g < p.size; ++g) {
    FreeWord x{{g + 1}};
    if (!(free_apply(a, x, p) == free_apply(b, x, p))) return false;
  }
  return true;
}

/// Element of F x| Aut(F), psi-first, for the Artin remark.
struct FreeSemiDirect {
  FreeAutWord psi;
  FreeWord x;
};

inline FreeSemiDirect free_multiply(const FreeSemiDirect& g, const FreeSemiDirect& h,
                                    const Poset& p) {
  FreeSemiDirect out;
  out.psi.letters = g.psi.letters;
  out.psi.letters.insert(out.psi.letters.end(), h.psi.letters.begin(), h.psi.letters.end());
  out.x = free_concat(free_apply(free_aut_inverse(h.psi), g.x, p), h.x);
  return out;
}

inline bool free_sd_equal(const FreeSemiDirect& g, const FreeSemiDirect& h, const Poset& p) {
  return free_reduce(g.x) == free_reduce(h.x) && free_aut_equal(g.psi, h.psi, p);
}

// y_w = x_w^{-1} psi_w; psi-first parts are (psi_w, x_w^{-1}).
inline FreeSemiDirect y_element(int w) {
  return {FreeAutWord{{w + 1}}, FreeWord{{-(w + 1)}}};
}

/// Verifies the right-angled Artin relations: y-generators commute exactly
/// for comparable pairs and have infinite order (powers stay nontrivial).
inline VerifyReport verify_artin(const Poset& p, int trials, uint64_t seed) {
  VerifyReport rep;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    ++rep.trials;
    int a = static_cast<int>(rng() % p.size);
    int b = static_cast<int>(rng() % p.size);
    if (a == b) continue;
    auto yab = free_multiply(y_element(a), y_element(b), p);
    auto yba = free_multiply(y_element(b), y_element(a), p);
    bool commute = free_sd_equal(yab, yba, p);
    if (commute != p.comparable(a, b))
      rep.failures.push_back({"artin_commutation", {a, b}, -1});
  }
  // powers of each generator are nontrivial
  for (int w = 0; w < p.size; ++w) {
    FreeSemiDirect pow;
    for (int k = 1; k <= 8; ++k) {
      pow = free_multiply(pow, y_element(w), p);
      ++rep.trials;
      if (pow.x.letters.empty() && free_aut_equal(pow.psi, FreeAutWord{}, p))
        rep.failures.push_back({"artin_torsion", {w, k}, -1});
    }
  }
  return rep;
}

}  // namespace cycleforge::coxeter
