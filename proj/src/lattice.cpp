#include "fineq/lattice.hpp"

#include <cstdlib>
#include <numeric>

#include "fineq/errors.hpp"

namespace fineq {

void CohomologyData::validate() const {
  if (basis_rank < 0) throw input_error("basis_rank must be non-negative");
  if (static_cast<int>(omega.size()) != basis_rank ||
      static_cast<int>(c1.size()) != basis_rank)
    throw input_error("omega and c1 must both have length basis_rank");
  if (basis_rank > 0) {
    bool all_zero = true;
    for (const auto& w : omega)
      if (w != Rational(0)) all_zero = false;
    if (all_zero) throw input_error("omega must not be the zero vector");
  }
}

std::vector<std::vector<long long>> integer_kernel_basis(
    const std::vector<long long>& w_in) {
  const int n = static_cast<int>(w_in.size());
  std::vector<long long> w = w_in;
  // columns of U track the unimodular operations applied to w
  std::vector<std::vector<long long>> U(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) U[i][i] = 1;

  auto col_axpy = [&](int dst, int src, long long q) {
    // column dst -= q * column src
    w[dst] -= q * w[src];
    for (int r = 0; r < n; ++r) U[r][dst] -= q * U[r][src];
  };

  while (true) {
    int pivot = -1;
    for (int i = 0; i < n; ++i) {
      if (w[i] != 0 && (pivot < 0 || std::llabs(w[i]) < std::llabs(w[pivot])))
        pivot = i;
    }
    if (pivot < 0) break;
    bool reduced_any = false;
    for (int i = 0; i < n; ++i) {
      if (i == pivot || w[i] == 0) continue;
      long long q = w[i] / w[pivot];
      if (q != 0) col_axpy(i, pivot, q);
      if (w[i] != 0) reduced_any = true;  // remainder survives, keep going
    }
    if (!reduced_any) {
      // single nonzero entry left; kernel = all other columns
      std::vector<std::vector<long long>> basis;
      for (int i = 0; i < n; ++i) {
        if (i == pivot) continue;
        std::vector<long long> col(n);
        for (int r = 0; r < n; ++r) col[r] = U[r][i];
        basis.push_back(std::move(col));
      }
      return basis;
    }
  }
  // w was zero: kernel is all of Z^n
  std::vector<std::vector<long long>> basis;
  for (int i = 0; i < n; ++i) {
    std::vector<long long> col(n);
    for (int r = 0; r < n; ++r) col[r] = U[r][i];
    basis.push_back(std::move(col));
  }
  return basis;
}

ConditionCResult check_condition_c(const CohomologyData& data) {
  data.validate();
  if (data.basis_rank == 0) return {true, {}};

  // clear denominators: the kernel only depends on omega up to positive scale
  long long lcm = 1;
  for (const auto& r : data.omega) lcm = std::lcm(lcm, r.denominator());
  std::vector<long long> w(data.basis_rank);
  for (int i = 0; i < data.basis_rank; ++i) {
    Rational scaled = data.omega[i] * lcm;
    w[i] = scaled.numerator();
  }

  for (const auto& v : integer_kernel_basis(w)) {
    long long val = 0;
    for (int i = 0; i < data.basis_rank; ++i) val += data.c1[i] * v[i];
    if (val % 2 != 0) return {false, v};
  }
  return {true, {}};
}

Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos)
      return Rational(std::stoll(text));
    long long p = std::stoll(text.substr(0, slash));
    long long q = std::stoll(text.substr(slash + 1));
    if (q == 0) throw input_error("zero denominator in '" + text + "'");
    return Rational(p, q);
  } catch (const input_error&) {
    throw;
  } catch (const std::exception&) {
    throw input_error("malformed rational '" + text + "'");
  }
}

}  // namespace fineq
