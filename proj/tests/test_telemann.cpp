#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <unimodal/cascade.hpp>
#include <unimodal/map.hpp>
#include <unimodal/telemann.hpp>

#include "oracles.hpp"

using namespace unimodal;

namespace {

struct Fixture95 {
  UnimodalMap map = UnimodalMap::quadratic(0.95);
  CentralCascade cascade = build_cascade(map, std::nullopt, {});
};

}  // namespace

TEST_CASE("visit table matches a forward scan", "[telemann]") {
  Fixture95 fx;
  auto vt = build_visit_table(fx.map, fx.cascade, 500);
  auto orc = oracles::visit_scan(0.95, fx.cascade.u, 500);
  REQUIRE(vt.depth == static_cast<int>(fx.cascade.u.size()));
  for (int l = 1; l <= vt.depth; ++l) {
    INFO("level " << l);
    CHECK(vt.times_ge[l] == orc[l - 1]);
  }

  SECTION("deeper levels visit less: times nest") {
    for (int l = 2; l <= vt.depth; ++l) {
      for (long j : vt.times_ge[l]) {
        auto& up = vt.times_ge[l - 1];
        CHECK(std::binary_search(up.begin(), up.end(), j));
      }
    }
  }
}

TEST_CASE("decomposition example: t = 0.95, n0 = 2, k = 500", "[telemann]") {
  Fixture95 fx;
  auto dec = decompose(fx.map, fx.cascade, 500, 2);
  CHECK(dec.k == 500);
  CHECK(dec.n0 == 2);
  CHECK(dec.m == 2);
  CHECK(dec.k_list == std::vector<long>{361, 485, 488});  // k_m <= ... <= k_0
  CHECK(dec.r == 12);
  CHECK(dec.s_list == std::vector<long>{1, 3, 2});  // s_0, s_1, s_2
  CHECK_FALSE(dec.degenerate);
  CHECK(chain_rule_residual(fx.map, dec) < 1e-8);
}

TEST_CASE("decomposition agrees with the oracle for every k up to 500", "[telemann]") {
  Fixture95 fx;
  double max_residual = 0.0;
  int prev_m = -1;
  for (long k = 1; k <= 500; ++k) {
    INFO("k = " << k);
    auto dec = decompose(fx.map, fx.cascade, k, 2);
    auto orc = oracles::telemann_scan(0.95, fx.cascade.u, k, 2);
    REQUIRE(dec.m == orc.m);
    REQUIRE(dec.r == orc.r);
    if (dec.m >= 0) {
      REQUIRE(dec.k_list.size() == static_cast<std::size_t>(dec.m + 1));
      for (int i = 0; i <= dec.m; ++i) {
        CHECK(dec.k_list[i] == orc.k_i[dec.m - i]);  // display order is reversed
        CHECK(dec.s_list[i] == orc.s_i[i]);          // positional
      }
      // k = k_0 + r
      CHECK(dec.k_list.back() + dec.r == k);
    } else {
      CHECK(dec.degenerate);
      CHECK(dec.r == k);
    }
    // m is nondecreasing in k (the orbit can only have seen more levels)
    CHECK(dec.m >= prev_m);
    prev_m = dec.m;
    max_residual = std::max(max_residual, chain_rule_residual(fx.map, dec));
  }
  CHECK(max_residual < 1e-8);
}

TEST_CASE("k_0 maximality by forward scan", "[telemann]") {
  Fixture95 fx;
  for (long k : {50L, 137L, 361L, 500L}) {
    auto dec = decompose(fx.map, fx.cascade, k, 2);
    if (dec.m < 0) continue;
    long k0 = dec.k_list.back();
    // f^{k0}(0) lies in U_{n0} and no later time <= k does
    double y = 0.0;
    for (long j = 1; j <= k; ++j) {
      y = oracles::quad(0.95, y);
      if (j == k0) CHECK(std::fabs(y) < fx.cascade.u[1]);
      if (j > k0) CHECK(std::fabs(y) >= fx.cascade.u[1]);
    }
  }
}

TEST_CASE("s_list zero entries mark repeated markers", "[telemann]") {
  Fixture95 fx;
  bool saw_zero = false;
  for (long k = 1; k <= 500; ++k) {
    auto dec = decompose(fx.map, fx.cascade, k, 2);
    for (int i = 0; dec.m >= 0 && i <= dec.m; ++i) {
      long ki = dec.k_list[dec.m - i];
      long knext = (i == dec.m) ? 0 : dec.k_list[dec.m - i - 1];
      if (dec.s_list[i] == 0) {
        saw_zero = true;
        CHECK(ki == knext);
      } else {
        CHECK(ki > knext);
      }
    }
  }
  CHECK(saw_zero);  // the nest does produce coincident markers in this range
}

TEST_CASE("degenerate decomposition", "[telemann]") {
  // t = 1: the critical orbit never re-enters U_1 = (-1/2, 1/2)
  auto map = UnimodalMap::quadratic(1.0);
  auto cascade = build_cascade(map, std::nullopt, {});
  auto dec = decompose(map, cascade, 40, 1);
  CHECK(dec.m == -1);
  CHECK(dec.degenerate);
  CHECK(dec.k_list.empty());
  CHECK(dec.s_list.empty());
  CHECK(dec.r == 40);
  CHECK(chain_rule_residual(map, dec) == 0.0);  // single factor: exactly zero
}

TEST_CASE("shallow cascades are rejected", "[telemann]") {
  auto m1 = UnimodalMap::quadratic(1.0);
  auto c1 = build_cascade(m1, std::nullopt, {});
  CHECK_THROWS_AS(decompose(m1, c1, 100, 2), cascade_too_shallow);

  Fixture95 fx;  // depth 4
  CHECK_THROWS_AS(decompose(fx.map, fx.cascade, 100, 5), cascade_too_shallow);
  CHECK_NOTHROW(decompose(fx.map, fx.cascade, 100, 4));
  CHECK_THROWS_AS(decompose(fx.map, fx.cascade, 0, 2), domain_error);
}

TEST_CASE("signature injectivity", "[telemann]") {
  Fixture95 fx;
  SECTION("kmax = 1 checks nothing") {
    auto rep = signature_injectivity(fx.map, fx.cascade, 1, 2);
    CHECK(rep.pairs_checked == 0);
    CHECK(rep.collisions.empty());
  }
  SECTION("kmax = 100: all pairs distinct") {
    auto rep = signature_injectivity(fx.map, fx.cascade, 100, 2);
    CHECK(rep.pairs_checked == 4950);
    CHECK(rep.collisions.empty());
  }
  SECTION("signatures really determine k: reconstruct k_0 from r") {
    for (long k : {77L, 240L, 461L}) {
      auto dec = decompose(fx.map, fx.cascade, k, 2);
      if (dec.m < 0) continue;
      CHECK(k - dec.r == dec.k_list.back());
    }
  }
}

TEST_CASE("chain rule residual needs a clean orbit", "[telemann]") {
  // t = 1 with n0 = 1 never revisits, but the orbit hits the critical point's
  // image chain: f(0) = 1, Df(1) != 0 — fine; t = 0.5 lands on 0 itself
  auto m05 = UnimodalMap::quadratic(0.5);
  TelemannDecomposition dec;
  dec.k = 10;
  dec.r = 10;
  CHECK_THROWS_AS(chain_rule_residual(m05, dec), critical_hit);
}
