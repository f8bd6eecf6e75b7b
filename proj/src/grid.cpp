#include "fineq/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace fineq {

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n, symmetric initial guesses
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  // map [-1,1] -> [a,b]
  double half = 0.5 * (b - a), mid = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

QuadratureGrid::QuadratureGrid(int n_u, int n_phi) : n_phi_(n_phi) {
  GaussRule gl = gauss_legendre(n_u);
  u_ = gl.nodes;
  wu_ = gl.weights;
  phi_.resize(n_phi);
  for (int p = 0; p < n_phi; ++p)
    phi_[p] = 2.0 * std::numbers::pi * p / n_phi;
  wphi_ = 2.0 * std::numbers::pi / n_phi;
}

bool QuadratureGrid::resolves(int l_total) const {
  return 2 * n_u() - 1 >= l_total && n_phi_ > l_total;
}

namespace {
std::map<std::pair<int, int>, std::shared_ptr<const QuadratureGrid>> g_cache;
std::mutex g_cache_mutex;
}  // namespace

std::shared_ptr<const QuadratureGrid> get_grid(int n_u, int n_phi) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto key = std::make_pair(n_u, n_phi);
  auto it = g_cache.find(key);
  if (it != g_cache.end()) return it->second;
  auto grid = std::make_shared<const QuadratureGrid>(n_u, n_phi);
  g_cache.emplace(key, grid);
  return grid;
}

std::shared_ptr<const QuadratureGrid> grid_for_degree(int l_total) {
  int n_u = l_total / 2 + 2;
  int n_phi = l_total + 2;
  return get_grid(n_u, n_phi);
}

}  // namespace fineq
