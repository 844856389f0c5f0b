// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"

#include <vector>

namespace gwn
{

/*!
 * \brief Helpers for clamped knot vectors.
 *
 * A knot vector of degree p over n control points has n + p + 1 entries,
 * is nondecreasing, repeats its first and last knots p + 1 times, and keeps
 * interior multiplicities at or below p.
 */
namespace knots
{

inline int controlCount(const std::vector<double>& t, int degree)
{
  return static_cast<int>(t.size()) - degree - 1;
}

inline double domainMin(const std::vector<double>& t, int degree) { return t[degree]; }

inline double domainMax(const std::vector<double>& t, int degree)
{
  return t[t.size() - degree - 1];
}

/// Throws Error(InvalidInput) when the vector is not clamped and valid.
inline void validate(const std::vector<double>& t, int degree, const char* label)
{
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidInput, std::string(label) + ": " + why);
  };
  const int n = controlCount(t, degree);
  if(degree < 1)
  {
    fail("degree must be at least 1");
  }
  if(degree > 15)
  {
    fail("degree above the supported maximum of 15");
  }
  if(n < degree + 1)
  {
    fail("too few knots for the degree");
  }
  for(std::size_t i = 1; i < t.size(); ++i)
  {
    if(!(t[i] >= t[i - 1]))
    {
      fail("knots must be nondecreasing");
    }
  }
  for(int i = 1; i <= degree; ++i)
  {
    if(t[i] != t[0] || t[t.size() - 1 - i] != t.back())
    {
      fail("knot vector must be clamped");
    }
  }
  if(!(domainMin(t, degree) < domainMax(t, degree)))
  {
    fail("empty parameter domain");
  }
  int run = 1;
  for(std::size_t i = degree + 1; i + degree + 1 < t.size(); ++i)
  {
    run = (t[i] == t[i - 1]) ? run + 1 : 1;
    if(run > degree)
    {
      fail("interior knot multiplicity exceeds the degree");
    }
  }
}

/// Index i of the span with t[i] <= u < t[i+1], clamped to the domain.
inline int findSpan(const std::vector<double>& t, int degree, double u)
{
  const int n = controlCount(t, degree) - 1;
  if(u >= t[n + 1])
  {
    return n;
  }
  if(u <= t[degree])
  {
    return degree;
  }
  int lo = degree, hi = n + 1;
  int mid = (lo + hi) / 2;
  while(u < t[mid] || u >= t[mid + 1])
  {
    if(u < t[mid])
    {
      hi = mid;
    }
    else
    {
      lo = mid;
    }
    mid = (lo + hi) / 2;
  }
  return mid;
}

/// Multiplicity of the value u inside the knot vector.
inline int multiplicity(const std::vector<double>& t, double u)
{
  int m = 0;
  for(const double k : t)
  {
    if(k == u)
    {
      ++m;
    }
  }
  return m;
}

/// The degree + 1 nonvanishing basis functions at u (Cox de Boor recurrence).
inline void basisFunctions(const std::vector<double>& t, int degree, int span, double u,
                           double* N)
{
  double left[16], right[16];
  N[0] = 1.0;
  for(int j = 1; j <= degree; ++j)
  {
    left[j] = u - t[span + 1 - j];
    right[j] = t[span + j] - u;
    double saved = 0.0;
    for(int r = 0; r < j; ++r)
    {
      const double temp = N[r] / (right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }
}

/*!
 * \brief Basis functions and first derivatives at u.
 *
 * N and dN each receive degree + 1 values for the functions that are
 * nonzero on the span.
 */
inline void basisFunctionsWithDerivative(const std::vector<double>& t, int degree, int span,
                                         double u, double* N, double* dN)
{
  double ndu[16][16];
  double left[16], right[16];
  ndu[0][0] = 1.0;
  for(int j = 1; j <= degree; ++j)
  {
    left[j] = u - t[span + 1 - j];
    right[j] = t[span + j] - u;
    double saved = 0.0;
    for(int r = 0; r < j; ++r)
    {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for(int j = 0; j <= degree; ++j)
  {
    N[j] = ndu[j][degree];
  }
  // First derivative from the degree - 1 functions.
  for(int r = 0; r <= degree; ++r)
  {
    double d = 0.0;
    if(r > 0)
    {
      d += ndu[r - 1][degree - 1] / ndu[degree][r - 1];
    }
    if(r < degree)
    {
      d -= ndu[r][degree - 1] / ndu[degree][r];
    }
    dN[r] = degree * d;
  }
}

/*!
 * \brief Inserts the knot u the given number of times (Boehm's algorithm).
 *
 * Works on any control type supporting lerp(a, b, t). The requested count is
 * capped so the final multiplicity does not exceed the degree (interior) or
 * degree + 1 (domain ends).
 */
template <typename ControlPoint>
inline void insertKnot(std::vector<double>& t, std::vector<ControlPoint>& ctrl, int degree,
                       double u, int times)
{
  const double a = domainMin(t, degree), b = domainMax(t, degree);
  if(!(u > a && u < b))
  {
    throw Error(ErrorCode::InvalidInput, "insertKnot: knot outside the open domain");
  }
  const int have = multiplicity(t, u);
  const int target = std::min(times + have, degree);
  for(int rep = have; rep < target; ++rep)
  {
    const int k = findSpan(t, degree, u);
    std::vector<ControlPoint> next(ctrl.size() + 1);
    for(std::size_t i = 0; i < next.size(); ++i)
    {
      if(static_cast<int>(i) <= k - degree)
      {
        next[i] = ctrl[i];
      }
      else if(static_cast<int>(i) > k)
      {
        next[i] = ctrl[i - 1];
      }
      else
      {
        const double denom = t[i + degree] - t[i];
        const double alpha = denom > 0.0 ? (u - t[i]) / denom : 0.0;
        next[i] = lerp(ctrl[i - 1], ctrl[i], alpha);
      }
    }
    ctrl = std::move(next);
    t.insert(t.begin() + (k + 1), u);
  }
}

/// Breakpoints (unique knot values) covering the domain, including both ends.
inline std::vector<double> breakpoints(const std::vector<double>& t, int degree)
{
  std::vector<double> out;
  for(std::size_t i = degree; i + degree < t.size(); ++i)
  {
    if(out.empty() || t[i] != out.back())
    {
      out.push_back(t[i]);
    }
  }
  return out;
}

}  // namespace knots

/*!
 * \brief Evaluates the blossom (polar form) of a Bezier control polygon.
 *
 * args holds degree parameter values; extrapolation (arguments outside
 * [0, 1]) is valid and exact, which domain extension relies on.
 */
template <typename ControlPoint>
inline ControlPoint blossom(std::vector<ControlPoint> work, const double* args)
{
  const int degree = static_cast<int>(work.size()) - 1;
  for(int step = 0; step < degree; ++step)
  {
    const double t = args[step];
    for(int i = 0; i < degree - step; ++i)
    {
      work[i] = lerp(work[i], work[i + 1], t);
    }
  }
  return work[0];
}

/// Control points of a Bezier segment reparameterized from [0, 1] to [a, b].
template <typename ControlPoint>
inline std::vector<ControlPoint> bezierRestrict(const std::vector<ControlPoint>& pts, double a,
                                                double b)
{
  const int degree = static_cast<int>(pts.size()) - 1;
  std::vector<ControlPoint> out(pts.size());
  double args[16];
  for(int k = 0; k <= degree; ++k)
  {
    for(int i = 0; i < degree; ++i)
    {
      args[i] = (i < degree - k) ? a : b;
    }
    out[k] = blossom(pts, args);
  }
  return out;
}

}  // namespace gwn
