#include <doctest.h>

#include <random>

#include "cycleforge/coxeter.hpp"

using namespace cycleforge;
using namespace cycleforge::coxeter;

namespace {

Poset random_poset(int size, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> rel;
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b < size; ++b)
      if (rng() % 3 == 0) rel.emplace_back(a, b);  // acyclic by label order
  return Poset::from_relations(size, rel);
}

}  // namespace

TEST_CASE("involution word reduction") {
  CHECK(reduce({{0, 0}}).letters.empty());
  CHECK(reduce({{0, 1, 1, 0}}).letters.empty());
  CHECK(reduce({{0, 1, 0}}).letters == std::vector<int>{0, 1, 0});
  auto w = reduce({{2, 2, 1, 0, 0, 1, 2}});
  CHECK(w.letters == std::vector<int>{2});
  CHECK(reduce(w) == w);  // idempotent
}

TEST_CASE("psi generator action") {
  auto p = Poset::chain(2);  // 0 < 1
  SUBCASE("below: conjugation") {
    CHECK(apply_psi(1, {{0}}, p).letters == std::vector<int>{1, 0, 1});
  }
  SUBCASE("not below: fixed") {
    CHECK(apply_psi(0, {{1}}, p).letters == std::vector<int>{1});
    CHECK(apply_psi(1, {{1}}, p).letters == std::vector<int>{1});
  }
  SUBCASE("homomorphic extension with reduction") {
    auto q = Poset::from_relations(3, {{0, 2}});  // 0 < 2, 1 incomparable
    auto img = apply_psi(2, {{0, 1}}, q);
    CHECK(img.letters == std::vector<int>{2, 0, 2, 1});
    CHECK(apply_psi(2, {{0, 0}}, q).letters.empty());
  }
  SUBCASE("psi is an involution") {
    auto q = Poset::chain(3);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
      InvolutionWord w;
      for (int i = 0; i < 6; ++i) w.letters.push_back(static_cast<int>(rng() % 3));
      w = reduce(w);
      int omega = static_cast<int>(rng() % 3);
      CHECK(apply_psi(omega, apply_psi(omega, w, q), q) == w);
    }
  }
}

TEST_CASE("semidirect product relations") {
  auto chain = Poset::chain(2);
  auto anti = Poset::antichain(2);
  SUBCASE("s_w is an involution") {
    for (int w = 0; w < 2; ++w) {
      auto sq = multiply(s_element(w), s_element(w), chain);
      CHECK(sd_equal(sq, identity_element(), chain));
    }
  }
  SUBCASE("comparable generators commute") {
    auto ab = multiply(s_element(0), s_element(1), chain);
    auto ba = multiply(s_element(1), s_element(0), chain);
    CHECK(sd_equal(ab, ba, chain));
    // psi-first normal form: theta(s_0 s_1) = psi_1(x_0) x_1 = x_1 x_0
    CHECK(ab.x.letters == std::vector<int>{1, 0});
    CHECK(ba.x.letters == std::vector<int>{1, 0});
  }
  SUBCASE("incomparable generators do not commute") {
    auto ab = multiply(s_element(0), s_element(1), anti);
    auto ba = multiply(s_element(1), s_element(0), anti);
    CHECK_FALSE(sd_equal(ab, ba, anti));
    CHECK(ab.x.letters == std::vector<int>{0, 1});
    CHECK(ba.x.letters == std::vector<int>{1, 0});
  }
}

TEST_CASE("theta on short words") {
  auto chain = Poset::chain(2);
  auto anti = Poset::antichain(2);
  CHECK(theta({0}, chain).letters == std::vector<int>{0});
  // 0 < 1: theta(s_0 s_1) = x_1 x_0
  CHECK(theta({0, 1}, chain).letters == std::vector<int>{1, 0});
  // incomparable: theta(s_0 s_1) = x_0 x_1
  CHECK(theta({0, 1}, anti).letters == std::vector<int>{0, 1});
}

TEST_CASE("theta cocycle on the 2-chain") {
  auto p = Poset::chain(2);  // a=0 < b=1
  auto lhs = concat(theta({0, 1}, p), inverse(theta({1}, p)));
  CHECK(lhs.letters == std::vector<int>{1, 0, 1});
  CHECK(is_conjugate_of_generator(lhs, 0, p));
  CHECK_FALSE(is_conjugate_of_generator(lhs, 1, p));
}

TEST_CASE("racg normal forms") {
  auto chain = Poset::chain(2);
  auto anti = Poset::antichain(2);
  SUBCASE("commute then cancel") { CHECK(racg_equal({0, 1, 0}, {1}, chain)); }
  SUBCASE("incomparable stay distinct") {
    CHECK_FALSE(racg_equal({0, 1}, {1, 0}, anti));
    CHECK(racg_normal_form({0, 1}, anti) == std::vector<int>{0, 1});
    CHECK(racg_normal_form({1, 0}, anti) == std::vector<int>{1, 0});
  }
  SUBCASE("word times reversed word is trivial") {
    std::mt19937_64 rng(5);
    for (int size = 2; size <= 5; ++size) {
      auto p = random_poset(size, rng);
      for (int t = 0; t < 30; ++t) {
        std::vector<int> w(1 + rng() % 8);
        for (auto& l : w) l = static_cast<int>(rng() % size);
        auto ww = w;
        ww.insert(ww.end(), w.rbegin(), w.rend());
        CHECK(racg_equal(ww, {}, p));
      }
    }
  }
  SUBCASE("trace linearization picks the least movable letter") {
    // 0 and 2 both commute with 1 only; normal form of (2,0,1) keeps order,
    // normal form of (2,1,0) can pull nothing forward
    auto p = Poset::from_relations(3, {{1, 0}, {1, 2}});
    CHECK(racg_normal_form({2, 1, 0}, p) == racg_normal_form({2, 1, 0}, p));
    CHECK(racg_equal({0, 1}, {1, 0}, p));
    CHECK(racg_equal({2, 1}, {1, 2}, p));
    CHECK_FALSE(racg_equal({0, 2}, {2, 0}, p));
  }
}

TEST_CASE("semidirect algebra suite over fixed and random posets") {
  SUBCASE("antichain: automorphisms act trivially") {
    auto rep = verify_semidirect_algebra(Poset::antichain(4), 100, 8, 7);
    CHECK(rep.ok());
  }
  SUBCASE("2-chain") {
    auto rep = verify_semidirect_algebra(Poset::chain(2), 200, 10, 3);
    CHECK(rep.ok());
  }
  SUBCASE("random posets") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 25; ++t) {
      auto p = random_poset(2 + static_cast<int>(rng() % 5), rng);
      auto rep = verify_semidirect_algebra(p, 40, 10, rng());
      CHECK(rep.ok());
      if (!rep.ok()) {
        for (const auto& f : rep.failures) MESSAGE(f.check);
      }
    }
  }
  SUBCASE("finite quotient hook") {
    // two points, both generators swap them; the base-stabilizer contains
    // exactly the even words
    PermAction action;
    action.points = 2;
    action.gen_perms = {{1, 0}, {1, 0}};
    action.base = 0;
    auto rep = verify_semidirect_algebra(Poset::antichain(2), 300, 8, 17, &action);
    CHECK(rep.ok());
    auto rep2 = verify_semidirect_algebra(Poset::chain(2), 300, 8, 23, &action);
    CHECK(rep2.ok());
  }
}

TEST_CASE("racg_equal matches semidirect equality on random pairs") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    auto p = random_poset(2 + static_cast<int>(rng() % 4), rng);
    std::vector<int> w1(1 + rng() % 10), w2(1 + rng() % 10);
    for (auto& l : w1) l = static_cast<int>(rng() % p.size);
    for (auto& l : w2) l = static_cast<int>(rng() % p.size);
    CHECK(racg_equal(w1, w2, p) ==
          sd_equal(product_of_s(w1, p), product_of_s(w2, p), p));
  }
}

TEST_CASE("length parity of theta") {
  std::mt19937_64 rng(31337);
  for (int t = 0; t < 100; ++t) {
    auto p = random_poset(2 + static_cast<int>(rng() % 4), rng);
    std::vector<int> w(1 + rng() % 12);
    for (auto& l : w) l = static_cast<int>(rng() % p.size);
    CHECK(theta(w, p).letters.size() % 2 == w.size() % 2);
  }
}

TEST_CASE("artin variant") {
  SUBCASE("chain commutator is trivial") {
    auto rep = verify_artin(Poset::chain(2), 100, 5);
    CHECK(rep.ok());
  }
  SUBCASE("antichain commutator is nontrivial") {
    auto p = Poset::antichain(2);
    auto yab = free_multiply(y_element(0), y_element(1), p);
    auto yba = free_multiply(y_element(1), y_element(0), p);
    CHECK_FALSE(free_sd_equal(yab, yba, p));
    CHECK(verify_artin(p, 100, 6).ok());
  }
  SUBCASE("y has infinite order: x-part length grows") {
    auto p = Poset::chain(3);
    FreeSemiDirect pow;
    std::size_t last = 0;
    for (int k = 1; k <= 8; ++k) {
      pow = free_multiply(pow, y_element(1), p);
      CHECK(pow.x.letters.size() > 0);
      CHECK(pow.x.letters.size() >= last);
      last = pow.x.letters.size();
    }
  }
  SUBCASE("random posets") {
    std::mt19937_64 rng(444);
    for (int t = 0; t < 10; ++t) {
      auto p = random_poset(2 + static_cast<int>(rng() % 4), rng);
      CHECK(verify_artin(p, 60, rng()).ok());
    }
  }
}
