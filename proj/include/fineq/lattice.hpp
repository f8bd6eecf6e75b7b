#pragma once

// Parity checker for the quantization condition on integer cohomological
// data: given the values of [omega]/2pi and c1(TM) on a basis of
// H_2(M,Z)/torsion, decide whether c1 takes even values on Ker([omega]).

#include <boost/rational.hpp>
#include <string>
#include <vector>

namespace fineq {

using Rational = boost::rational<long long>;

struct CohomologyData {
  int basis_rank = 0;
  std::vector<Rational> omega;  // exact rationals, one per basis class
  std::vector<long long> c1;    // integers, one per basis class

  // throws input_error on length mismatch or zero omega at positive rank
  void validate() const;
};

struct ConditionCResult {
  bool satisfied = true;
  // when violated: an integer kernel vector on which c1 is odd
  std::vector<long long> witness;
};

// Basis of { v in Z^n : <w, v> = 0 } via unimodular column reduction.
// Returns n-1 vectors when w != 0, n vectors when w == 0.
std::vector<std::vector<long long>> integer_kernel_basis(
    const std::vector<long long>& w);

ConditionCResult check_condition_c(const CohomologyData& data);

// "3/4" or "5" -> rational; throws input_error on malformed input
Rational parse_rational(const std::string& text);

}  // namespace fineq
