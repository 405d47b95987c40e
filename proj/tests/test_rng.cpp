#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/rng.hpp"

using namespace d2dcoex;

TEST_CASE("same seed reproduces the stream", "[rng]") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("derived seeds do not collide", "[rng]") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 200; ++s)
    for (std::uint64_t k = 0; k < 3; ++k) seen.insert(derive_seed(7, s, k));
  REQUIRE(seen.size() == 600);
  REQUIRE(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  REQUIRE(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("uniform draws stay in range", "[rng]") {
  Rng r(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = r.uniform_open_closed();
    REQUIRE(v > 0.0);
    REQUIRE(v <= 1.0);
    sum += u;
  }
  // mean of U(0,1) has sd 1/sqrt(12 n) ~ 9e-4
  REQUIRE(sum / n == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("below is unbiased", "[rng]") {
  Rng r(11);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[r.below(7)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  // chi-square with 6 dof; 99.9th percentile is 22.46
  REQUIRE(chi2 < 22.46);
  REQUIRE_THROWS_AS(r.below(0), DomainError);
}
