// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace gwn
{

/// Gauss Legendre rule on [-1, 1].
struct GaussRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail
{
/// Evaluates the Legendre polynomial P_n and its derivative at x.
inline void legendre(int n, double x, double& p, double& dp)
{
  double p0 = 1.0, p1 = x;
  for(int k = 2; k <= n; ++k)
  {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = (n == 0) ? p0 : p1;
  dp = (n == 0) ? 0.0 : n * (x * p1 - p0) / (x * x - 1.0);
}

inline GaussRule makeGaussRule(int n)
{
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for(int i = 0; i < (n + 1) / 2; ++i)
  {
    // Asymptotic root estimate refined by Newton iteration.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for(int it = 0; it < 100; ++it)
    {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if(std::abs(dx) < 1e-15)
      {
        break;
      }
    }
    legendre(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if(n % 2 == 1)
  {
    double p = 0.0, dp = 1.0;
    legendre(n, 0.0, p, dp);
    rule.nodes[n / 2] = 0.0;
    rule.weights[n / 2] = 2.0 / (dp * dp);
  }
  return rule;
}
}  // namespace detail

/*!
 * \brief Returns the n point Gauss Legendre rule on [-1, 1], cached per order.
 *
 * Thread safe; the reference stays valid for the program lifetime.
 */
inline const GaussRule& gaussRule(int n)
{
  if(n < 1)
  {
    throw Error(ErrorCode::InvalidInput, "gaussRule: order must be positive");
  }
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if(it == cache.end())
  {
    it = cache.emplace(n, detail::makeGaussRule(n)).first;
  }
  return it->second;
}

}  // namespace gwn
