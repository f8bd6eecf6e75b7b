#pragma once

// Quantum side on CP^1: H_k = holomorphic sections of O(k-1), dim k,
// orthonormal monomial basis e_j = c_j z^j.  Toeplitz compression T_k(f),
// the Laplacian-corrected operator Op_k(f) = T_k(f - (2k)^{-1} Delta f),
// and operator / Schatten norm utilities.  hbar_k = 1/k.

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "fineq/errors.hpp"
#include "fineq/sphere.hpp"

namespace fineq {

using Matrix = Eigen::MatrixXcd;

struct QuantizationLevel {
  int k;
  explicit QuantizationLevel(int k_) : k(k_) {
    if (k < 1) throw input_error("level k must be >= 1");
  }
  int m() const { return k - 1; }       // degree of the twisted bundle
  int dim() const { return k; }
  double hbar() const { return 1.0 / k; }
};

struct UnitaryPropagator {
  int k = 0;
  Matrix mat;
  std::string path_label;
  long steps = 0;                  // 0 for exact exponentials
  double integrator_defect = 0.0;  // last step-halving difference
};

Matrix toeplitz(const QuantizationLevel& level, const SphereFunction& f);
Matrix op_fine(const QuantizationLevel& level, const SphereFunction& f);
Matrix quantize(const QuantizationLevel& level, const SphereFunction& f, bool fine);

// || [Q(f), Q(g)] - (hbar/i) Q({f,g}) ||_op
double bracket_defect(const QuantizationLevel& level, const SphereFunction& f,
                      const SphereFunction& g, bool fine, int l_cap = kDefaultLCap);

Eigen::VectorXd singular_values(const Matrix& a);  // descending
double op_norm(const Matrix& a);
double schatten_norm(const Matrix& a, double p);  // p >= 1, inf = op norm
Matrix commutator(const Matrix& a, const Matrix& b);

double hermitian_defect(const Matrix& a);  // max |A - A*|
// exp(-i * scale * H) for Hermitian H, via eigendecomposition
Matrix unitary_exp(const Matrix& h, double scale);

// min over theta of ||U - e^{i theta} V||_p (coarse scan + golden refine)
double projective_distance(const Matrix& u, const Matrix& v, double p);

// max |Gram - I| for the monomial basis at level k, by quadrature
double gram_defect(const QuantizationLevel& level);

}  // namespace fineq
