// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/patch.hpp"
#include "gwn/quadrature.hpp"
#include "gwn/winding2d.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace gwn
{

/*!
 * \brief Signed solid angle fraction of a triangle seen from q.
 *
 * Uses the stable two argument arctangent form; the result lies in
 * (-0.5, 0.5) and sums to the winding number over closed meshes.
 */
inline double triangleGwn(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c)
{
  const Vec3 A = a - q, B = b - q, C = c - q;
  const double la = A.norm(), lb = B.norm(), lc = C.norm();
  const double numer = A.dot(B.cross(C));
  const double denom = la * lb * lc + A.dot(B) * lc + B.dot(C) * la + C.dot(A) * lb;
  return std::atan2(numer, denom) / (2.0 * pi);
}

/// Indexed triangle soup.
struct TriangleMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Winding number of a triangle mesh around q.
inline double meshGwn(const TriangleMesh& mesh, const Vec3& q)
{
  double sum = 0.0;
  for(const auto& t : mesh.triangles)
  {
    sum += triangleGwn(q, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return sum;
}

/// Surface samples with outward unit normals and area weights.
struct OrientedPointCloud
{
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<double> areas;
};

/// Dipole sum approximation of the winding number from an oriented cloud.
inline double cloudGwn(const OrientedPointCloud& cloud, const Vec3& q)
{
  double sum = 0.0;
  for(std::size_t i = 0; i < cloud.points.size(); ++i)
  {
    const Vec3 x = cloud.points[i] - q;
    const double r = x.norm();
    sum += cloud.areas[i] * x.dot(cloud.normals[i]) / (four_pi * r * r * r);
  }
  return sum;
}

/*!
 * \brief Regular parameter grid tessellation of a trimmed patch.
 *
 * Grid cells whose centroid fails the trim test are dropped; remaining
 * cells emit two triangles oriented with S_u x S_v.
 */
inline TriangleMesh tessellateTrimmed(const TrimmedPatch& tp, int n)
{
  TrimmedPatch patch = tp;
  patch.ensureLoops();
  const NurbsPatch& s = patch.surface;
  TriangleMesh mesh;
  mesh.vertices.resize((n + 1) * (n + 1));
  const double u0 = s.domainMinU(), u1 = s.domainMaxU();
  const double v0 = s.domainMinV(), v1 = s.domainMaxV();
  for(int i = 0; i <= n; ++i)
  {
    for(int j = 0; j <= n; ++j)
    {
      const double u = u0 + (u1 - u0) * i / n;
      const double v = v0 + (v1 - v0) * j / n;
      mesh.vertices[i * (n + 1) + j] = s.evaluate(u, v);
    }
  }
  for(int i = 0; i < n; ++i)
  {
    for(int j = 0; j < n; ++j)
    {
      const double uc = u0 + (u1 - u0) * (i + 0.5) / n;
      const double vc = v0 + (v1 - v0) * (j + 0.5) / n;
      if(!trimContains(patch.loops, {uc, vc}))
      {
        continue;
      }
      const int a = i * (n + 1) + j;
      const int b = (i + 1) * (n + 1) + j;
      const int c = (i + 1) * (n + 1) + (j + 1);
      const int d = i * (n + 1) + (j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

/// Cell center surface samples with area weights, masked by the trim test.
inline OrientedPointCloud samplePointCloud(const TrimmedPatch& tp, int n)
{
  TrimmedPatch patch = tp;
  patch.ensureLoops();
  const NurbsPatch& s = patch.surface;
  OrientedPointCloud cloud;
  const double u0 = s.domainMinU(), u1 = s.domainMaxU();
  const double v0 = s.domainMinV(), v1 = s.domainMaxV();
  const double du = (u1 - u0) / n, dv = (v1 - v0) / n;
  for(int i = 0; i < n; ++i)
  {
    for(int j = 0; j < n; ++j)
    {
      const double u = u0 + du * (i + 0.5);
      const double v = v0 + dv * (j + 0.5);
      if(!trimContains(patch.loops, {u, v}))
      {
        continue;
      }
      Vec3 S, Su, Sv;
      s.evaluateDerivs(u, v, S, Su, Sv);
      const Vec3 nvec = Su.cross(Sv);
      const double mag = nvec.norm();
      if(mag <= 0.0)
      {
        continue;
      }
      cloud.points.push_back(S);
      cloud.normals.push_back(nvec / mag);
      cloud.areas.push_back(mag * du * dv);
    }
  }
  return cloud;
}

/// Value and integrand evaluation count of a quadrature baseline.
struct QuadratureEstimate
{
  double value = 0.0;
  std::uint64_t evalCount = 0;
};

namespace detail
{
inline double surfaceIntegrand(const TrimmedPatch& patch, const Vec3& q, double u, double v)
{
  if(!trimContains(patch.loops, {u, v}))
  {
    return 0.0;
  }
  Vec3 S, Su, Sv;
  patch.surface.evaluateDerivs(u, v, S, Su, Sv);
  const Vec3 x = S - q;
  const double r = x.norm();
  return x.dot(Su.cross(Sv)) / (four_pi * r * r * r);
}

inline double surfaceCellRule(const TrimmedPatch& patch, const Vec3& q, const GaussRule& rule,
                              double u0, double u1, double v0, double v1,
                              std::uint64_t& evalCount)
{
  const double du = 0.5 * (u1 - u0), dv = 0.5 * (v1 - v0);
  double sum = 0.0;
  for(std::size_t a = 0; a < rule.nodes.size(); ++a)
  {
    for(std::size_t b = 0; b < rule.nodes.size(); ++b)
    {
      const double u = u0 + du * (rule.nodes[a] + 1.0);
      const double v = v0 + dv * (rule.nodes[b] + 1.0);
      sum += rule.weights[a] * rule.weights[b] * surfaceIntegrand(patch, q, u, v);
      ++evalCount;
    }
  }
  return sum * du * dv;
}

inline double surfaceAdaptive(const TrimmedPatch& patch, const Vec3& q, const GaussRule& rule,
                              double u0, double u1, double v0, double v1, double value,
                              double eps, int depth, std::uint64_t& evalCount)
{
  const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
  const double c00 = surfaceCellRule(patch, q, rule, u0, um, v0, vm, evalCount);
  const double c10 = surfaceCellRule(patch, q, rule, um, u1, v0, vm, evalCount);
  const double c01 = surfaceCellRule(patch, q, rule, u0, um, vm, v1, evalCount);
  const double c11 = surfaceCellRule(patch, q, rule, um, u1, vm, v1, evalCount);
  const double refined = c00 + c10 + c01 + c11;
  if(std::abs(value - refined) < eps || depth >= 10)
  {
    return refined;
  }
  const double epsChild = eps;  // absolute acceptance, matched to the boundary scheme
  return surfaceAdaptive(patch, q, rule, u0, um, v0, vm, c00, epsChild, depth + 1, evalCount) +
    surfaceAdaptive(patch, q, rule, um, u1, v0, vm, c10, epsChild, depth + 1, evalCount) +
    surfaceAdaptive(patch, q, rule, u0, um, vm, v1, c01, epsChild, depth + 1, evalCount) +
    surfaceAdaptive(patch, q, rule, um, u1, vm, v1, c11, epsChild, depth + 1, evalCount);
}
}  // namespace detail

/*!
 * \brief Direct surface quadrature of the solid angle integrand.
 *
 * The fixed variant applies one tensor Gauss rule of the given order over
 * the whole parameter rectangle (order squared evaluations); the adaptive
 * variant refines by quadrisection until the cell estimate settles below
 * eps. Trimmed away regions contribute zero through the trim mask.
 */
inline QuadratureEstimate surfaceQuadratureGwn(const TrimmedPatch& tp, const Vec3& q, int order,
                                               bool adaptive = false, double eps = 1e-6)
{
  TrimmedPatch patch = tp;
  patch.ensureLoops();
  const NurbsPatch& s = patch.surface;
  const GaussRule& rule = gaussRule(order);
  QuadratureEstimate est;
  const double whole = detail::surfaceCellRule(patch, q, rule, s.domainMinU(), s.domainMaxU(),
                                               s.domainMinV(), s.domainMaxV(), est.evalCount);
  if(!adaptive)
  {
    est.value = whole;
    return est;
  }
  est.value = detail::surfaceAdaptive(patch, q, rule, s.domainMinU(), s.domainMaxU(),
                                      s.domainMinV(), s.domainMaxV(), whole, eps, 0,
                                      est.evalCount);
  return est;
}

}  // namespace gwn
