#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>
#include <random>

#include "doctest.h"
#include "fineq/errors.hpp"
#include "fineq/lattice.hpp"

using namespace fineq;

namespace {

// brute force: scan the integer box [-B, B]^n for kernel vectors of w and
// test whether c1 is odd on any of them
bool brute_force_satisfied(const std::vector<long long>& w,
                           const std::vector<long long>& c1, long long B) {
  size_t n = w.size();
  std::vector<long long> v(n, -B);
  while (true) {
    long long dot_w = 0, dot_c = 0;
    bool zero = true;
    for (size_t i = 0; i < n; ++i) {
      dot_w += w[i] * v[i];
      dot_c += c1[i] * v[i];
      if (v[i] != 0) zero = false;
    }
    if (!zero && dot_w == 0 && ((dot_c % 2) + 2) % 2 == 1) return false;
    size_t i = 0;
    while (i < n && v[i] == B) v[i++] = -B;
    if (i == n) return true;
    ++v[i];
  }
}

std::vector<long long> clear_denominators(const std::vector<Rational>& omega) {
  long long lcm = 1;
  for (const auto& r : omega) lcm = std::lcm(lcm, r.denominator());
  std::vector<long long> w;
  for (const auto& r : omega) w.push_back(r.numerator() * (lcm / r.denominator()));
  return w;
}

}  // namespace

TEST_CASE("blow-up family: 2-adic valuations of the two areas decide") {
  // c1 evaluates to (3, -1) on the (line, exceptional divisor) basis.
  // The kernel of (m, n) is generated by (n/g, -m/g) with g = gcd(m, n),
  // where c1 takes the value (m + 3n)/g; that is even exactly when m and n
  // carry the same power of two.
  auto v2 = [](long long x) {
    int v = 0;
    while (x % 2 == 0) {
      x /= 2;
      ++v;
    }
    return v;
  };
  for (long long mm = 1; mm <= 6; ++mm)
    for (long long nn = 1; nn <= 6; ++nn) {
      CohomologyData data;
      data.basis_rank = 2;
      data.omega = {Rational(mm), Rational(nn)};
      data.c1 = {3, -1};
      ConditionCResult res = check_condition_c(data);
      CHECK(res.satisfied == (v2(mm) == v2(nn)));
      if (!res.satisfied) {
        // witness must lie in the kernel and have odd c1 value
        CHECK(mm * res.witness[0] + nn * res.witness[1] == 0);
        long long val = 3 * res.witness[0] - res.witness[1];
        CHECK(((val % 2) + 2) % 2 == 1);
      }
    }
}

TEST_CASE("rank zero is vacuously satisfied") {
  CohomologyData data;
  data.basis_rank = 0;
  CHECK(check_condition_c(data).satisfied);
}

TEST_CASE("nowhere-zero omega with trivial kernel is satisfied") {
  CohomologyData data;
  data.basis_rank = 1;
  data.omega = {Rational(2, 3)};
  data.c1 = {7};
  CHECK(check_condition_c(data).satisfied);
}

TEST_CASE("integer kernel basis spans the kernel") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long long> coef(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + rng() % 3;
    std::vector<long long> w(n);
    for (auto& x : w) x = coef(rng);
    auto basis = integer_kernel_basis(w);
    bool w_zero = std::all_of(w.begin(), w.end(), [](long long x) { return x == 0; });
    CHECK(basis.size() == (w_zero ? n : n - 1));
    for (const auto& v : basis) {
      long long dot = 0;
      for (size_t i = 0; i < n; ++i) dot += w[i] * v[i];
      CHECK(dot == 0);
      CHECK(std::any_of(v.begin(), v.end(), [](long long x) { return x != 0; }));
    }
  }
}

TEST_CASE("agreement with brute-force enumeration on random instances") {
  std::mt19937 rng(20260824);
  std::uniform_int_distribution<long long> num(-3, 3);
  std::uniform_int_distribution<long long> den(1, 3);
  std::uniform_int_distribution<long long> c1v(-5, 5);
  std::uniform_int_distribution<int> rank_dist(1, 3);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rank_dist(rng);
    CohomologyData data;
    data.basis_rank = n;
    bool all_zero = true;
    for (int i = 0; i < n; ++i) {
      long long a = num(rng);
      if (a != 0) all_zero = false;
      data.omega.push_back(Rational(a, den(rng)));
      data.c1.push_back(c1v(rng));
    }
    if (all_zero) data.omega[0] = Rational(1, 2);  // keep omega nonzero
    ConditionCResult res = check_condition_c(data);
    std::vector<long long> w = clear_denominators(data.omega);
    CHECK(res.satisfied == brute_force_satisfied(w, data.c1, 10));
  }
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("5") == Rational(5));
  CHECK(parse_rational("-7/2") == Rational(-7, 2));
  CHECK_THROWS_AS(parse_rational("x/y"), input_error);
  CHECK_THROWS_AS(parse_rational("1/0"), input_error);
}

TEST_CASE("validation rejects mismatched lengths") {
  CohomologyData data;
  data.basis_rank = 2;
  data.omega = {Rational(1)};
  data.c1 = {1, 2};
  CHECK_THROWS_AS(data.validate(), input_error);
}
