// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/patch.hpp"
#include "gwn/winding2d.hpp"

#include <algorithm>
#include <vector>

namespace gwn
{

/// Four corners of a bilinear sheet P(u, v) on [0, 1]^2.
struct BilinearPatch
{
  Vec3 p00, p10, p01, p11;

  Vec3 evaluate(double u, double v) const
  {
    return p00 * ((1 - u) * (1 - v)) + p10 * (u * (1 - v)) + p01 * ((1 - u) * v) +
      p11 * (u * v);
  }
};

/// One line-surface intersection, recomputed on the true surface.
struct IntersectionRecord
{
  Vec2 uv;            ///< surface parameters of the hit
  double z0 = 0.0;    ///< signed line parameter (distance along the unit direction)
  Vec3 position;      ///< S(uv)
  Vec3 normal;        ///< S_u x S_v at uv, not normalized
  double uvRadius = 0.0;  ///< parameter half diagonal of the reporting leaf, 0 if direct
  long leafIndex = -1;    ///< ordinal of the reporting leaf, -1 if direct
};

/*!
 * \brief Intersections of a line with a bilinear sheet.
 *
 * Solves the quadratic in u obtained from the coplanarity of the iso curve
 * with the line, then recovers v by projection. Roots are kept when both
 * parameters lie in [-slack, 1 + slack]. Throws DegenerateGeometry when the
 * equation vanishes identically (line inside the sheet's ruling plane).
 */
inline int lineBilinearIntersect(const Line3& line, const BilinearPatch& sheet, double slack,
                                 Vec2 uvOut[2], double zOut[2])
{
  const Vec3 A = sheet.p00 - line.origin;
  const Vec3 B = sheet.p10 - sheet.p00;
  const Vec3 C = sheet.p01 - sheet.p00;
  const Vec3 D = sheet.p11 - sheet.p10 - sheet.p01 + sheet.p00;
  const Vec3& d = line.dir;

  const double c2 = B.cross(D).dot(d);
  const double c1 = A.cross(D).dot(d) + B.cross(C).dot(d);
  const double c0 = A.cross(C).dot(d);

  const double geo = std::max({A.norm(), B.norm(), C.norm(), D.norm(), 1e-300});
  const double coefScale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if(coefScale <= 1e-14 * geo * geo)
  {
    throw Error(ErrorCode::DegenerateGeometry,
                "line-bilinear intersection: equation vanishes identically");
  }

  double roots[2];
  const int count = solveQuadratic(c2, c1, c0, coefScale, roots);
  if(count < 0)
  {
    throw Error(ErrorCode::DegenerateGeometry,
                "line-bilinear intersection: equation vanishes identically");
  }

  int found = 0;
  for(int k = 0; k < count; ++k)
  {
    const double u = roots[k];
    if(u < -slack || u > 1.0 + slack)
    {
      continue;
    }
    const Vec3 X = A + B * u;
    const Vec3 Y = C + D * u;
    const Vec3 Yd = Y.cross(d);
    const double denom = Yd.squaredNorm();
    if(denom <= 1e-28 * geo * geo)
    {
      continue;  // iso curve parallel to the line; no isolated root here
    }
    const double v = -X.cross(d).dot(Yd) / denom;
    if(v < -slack || v > 1.0 + slack)
    {
      continue;
    }
    uvOut[found] = {u, v};
    zOut[found] = (sheet.evaluate(u, v) - line.origin).dot(d);
    ++found;
  }
  return found;
}

/*!
 * \brief Whether every control point sits within sqrt(epsLs) of the bilinear
 *        interpolant of the corner control points.
 *
 * epsLs carries squared model length units. Degree (1, 1) or lower pieces
 * are bilinear by definition.
 */
inline bool isApproximatelyBilinear(const BezierPatch3& piece, double epsLs)
{
  if(piece.p <= 1 && piece.q <= 1)
  {
    return true;
  }
  const BilinearPatch corners{piece.corner(0, 0), piece.corner(1, 0), piece.corner(0, 1),
                              piece.corner(1, 1)};
  for(int i = 0; i <= piece.p; ++i)
  {
    for(int j = 0; j <= piece.q; ++j)
    {
      const Vec3 ctrl = piece.at(i, j).project();
      const Vec3 lin = corners.evaluate(static_cast<double>(i) / piece.p,
                                        static_cast<double>(j) / piece.q);
      if((ctrl - lin).squaredNorm() > epsLs)
      {
        return false;
      }
    }
  }
  return true;
}

namespace detail
{
struct RawHit
{
  Vec2 uv;
  double uvRadius;
  long leafIndex;
};

/*!
 * \brief Recursive subdivision of a Bezier piece already expressed in the
 *        frame where the query line is the +z axis.
 */
inline void lineBezierRecurse(const BezierPatch3& piece, double epsLs, double slack, int depth,
                              int maxDepth, long& leafCounter, std::vector<RawHit>& out)
{
  const Box3 box = piece.controlBox();
  if(box.lo.x > 0.0 || box.hi.x < 0.0 || box.lo.y > 0.0 || box.hi.y < 0.0)
  {
    return;  // control net misses the axis
  }
  if(isApproximatelyBilinear(piece, epsLs))
  {
    const long leaf = leafCounter++;
    const BilinearPatch sheet{piece.corner(0, 0), piece.corner(1, 0), piece.corner(0, 1),
                              piece.corner(1, 1)};
    const Line3 axis{{0, 0, 0}, {0, 0, 1}};
    Vec2 uv[2];
    double z[2];
    const int n = lineBilinearIntersect(axis, sheet, slack, uv, z);
    for(int k = 0; k < n; ++k)
    {
      RawHit hit;
      hit.uv = {piece.u0 + uv[k].x * (piece.u1 - piece.u0),
                piece.v0 + uv[k].y * (piece.v1 - piece.v0)};
      hit.uvRadius = 0.5 * std::sqrt((piece.u1 - piece.u0) * (piece.u1 - piece.u0) +
                                     (piece.v1 - piece.v0) * (piece.v1 - piece.v0));
      hit.leafIndex = leaf;
      out.push_back(hit);
    }
    return;
  }
  if(depth >= maxDepth)
  {
    throw Error(ErrorCode::DegenerateGeometry,
                "line-surface intersection: subdivision depth exhausted");
  }
  const auto uHalves = piece.splitU();
  const auto q00 = uHalves.first.splitV();
  const auto q10 = uHalves.second.splitV();
  lineBezierRecurse(q00.first, epsLs, slack, depth + 1, maxDepth, leafCounter, out);
  lineBezierRecurse(q00.second, epsLs, slack, depth + 1, maxDepth, leafCounter, out);
  lineBezierRecurse(q10.first, epsLs, slack, depth + 1, maxDepth, leafCounter, out);
  lineBezierRecurse(q10.second, epsLs, slack, depth + 1, maxDepth, leafCounter, out);
}
}  // namespace detail

/*!
 * \brief Merges duplicate intersection records reported by adjacent
 *        subdivision leaves.
 *
 * Records merge when their parameter distance is at most tol plus the
 * combined leaf half diagonals (with a 5 percent margin). Two roots from
 * the same leaf never merge; they are a genuine double crossing.
 */
inline std::vector<IntersectionRecord> dedupIntersections(std::vector<IntersectionRecord> records,
                                                          double tol)
{
  std::sort(records.begin(), records.end(), [](const IntersectionRecord& a,
                                               const IntersectionRecord& b) {
    return a.uv.x != b.uv.x ? a.uv.x < b.uv.x : a.uv.y < b.uv.y;
  });
  std::vector<bool> merged(records.size(), false);
  std::vector<IntersectionRecord> out;
  for(std::size_t i = 0; i < records.size(); ++i)
  {
    if(merged[i])
    {
      continue;
    }
    IntersectionRecord rep = records[i];
    Vec2 sum = rep.uv;
    int count = 1;
    for(std::size_t j = i + 1; j < records.size(); ++j)
    {
      if(merged[j])
      {
        continue;
      }
      const bool sameLeaf = rep.leafIndex >= 0 && records[j].leafIndex == rep.leafIndex;
      const double reach = tol + 1.05 * (rep.uvRadius + records[j].uvRadius);
      if(!sameLeaf && (records[j].uv - rep.uv).norm() <= reach)
      {
        merged[j] = true;
        sum += records[j].uv;
        ++count;
        rep.uvRadius = std::max(rep.uvRadius, records[j].uvRadius);
      }
    }
    rep.uv = sum / static_cast<double>(count);
    out.push_back(rep);
  }
  return out;
}

/*!
 * \brief All intersections of a line with a surface given by its Bezier
 *        pieces, recomputed on the true surface and deduplicated.
 *
 * \param [in] surface   the surface the pieces were extracted from
 * \param [in] grid      Bezier pieces covering the (extended) domain
 * \param [in] line      query line with unit direction
 * \param [in] epsLs     squared flatness tolerance for the bilinear proxy
 * \param [in] dedupTol  parameter space merge tolerance
 * \param [in] maxDepth  subdivision depth cap
 *
 * Records come back sorted by the signed line parameter z0.
 */
inline std::vector<IntersectionRecord> linePatchIntersections(const NurbsPatch& surface,
                                                              const std::vector<BezierPatch3>& grid,
                                                              const Line3& line, double epsLs,
                                                              double dedupTol, int maxDepth = 50)
{
  const Rotation rot = rotationToZ(line.dir);
  const Vec3 shift = -rot.apply(line.origin);
  std::vector<detail::RawHit> raw;
  long leafCounter = 0;
  for(const BezierPatch3& piece : grid)
  {
    const BezierPatch3 local = piece.transformed(rot, shift);
    detail::lineBezierRecurse(local, epsLs, 1e-12, 0, maxDepth, leafCounter, raw);
  }

  std::vector<IntersectionRecord> records(raw.size());
  for(std::size_t i = 0; i < raw.size(); ++i)
  {
    records[i].uv = raw[i].uv;
    records[i].uvRadius = raw[i].uvRadius;
    records[i].leafIndex = raw[i].leafIndex;
  }
  records = dedupIntersections(std::move(records), dedupTol);

  // Subdivision locates each root only to the size of its reporting leaf.
  // Polish with Newton steps in the rotated frame, where a root satisfies
  // R(u, v).xy = 0, so that z0 is trustworthy at machine precision (the on
  // surface test downstream compares it against a tiny tolerance). Tangent
  // or cusp roots have a singular Jacobian; those keep the subdivision
  // estimate and are classified as such by the caller.
  const double uMin = surface.domainMinU(), uMax = surface.domainMaxU();
  const double vMin = surface.domainMinV(), vMax = surface.domainMaxV();
  for(IntersectionRecord& rec : records)
  {
    Vec2 uv = rec.uv;
    Vec2 best = uv;
    double bestRes = std::numeric_limits<double>::max();
    for(int iter = 0; iter < 12; ++iter)
    {
      Vec3 S, Su, Sv;
      surface.evaluateDerivs(uv.x, uv.y, S, Su, Sv);
      const Vec3 R = rot.apply(S) + shift;
      const Vec3 Ru = rot.apply(Su);
      const Vec3 Rv = rot.apply(Sv);
      const double res = R.x * R.x + R.y * R.y;
      if(res < bestRes)
      {
        bestRes = res;
        best = uv;
      }
      const double det = Ru.x * Rv.y - Rv.x * Ru.y;
      const double magnitude = std::abs(Ru.x * Rv.y) + std::abs(Rv.x * Ru.y);
      if(!(std::abs(det) > 1e-12 * std::max(magnitude, 1e-300)))
      {
        break;
      }
      const double du = (-R.x * Rv.y + R.y * Rv.x) / det;
      const double dv = (-Ru.x * R.y + Ru.y * R.x) / det;
      uv.x = std::clamp(uv.x + du, uMin, uMax);
      uv.y = std::clamp(uv.y + dv, vMin, vMax);
      if(du * du + dv * dv == 0.0)
      {
        break;
      }
    }
    {
      Vec3 S, Su, Sv;
      surface.evaluateDerivs(uv.x, uv.y, S, Su, Sv);
      const Vec3 R = rot.apply(S) + shift;
      if(R.x * R.x + R.y * R.y < bestRes)
      {
        best = uv;
      }
    }
    rec.uv = best;

    Vec3 S, Su, Sv;
    surface.evaluateDerivs(rec.uv.x, rec.uv.y, S, Su, Sv);
    rec.position = S;
    rec.normal = Su.cross(Sv);
    rec.z0 = (S - line.origin).dot(line.dir);
  }
  std::sort(records.begin(), records.end(),
            [](const IntersectionRecord& a, const IntersectionRecord& b) { return a.z0 < b.z0; });
  return records;
}

/// Disposition of one intersection record relative to the trimmed region.
enum class IntersectionKind
{
  Interior,      ///< transversal hit inside the visible region
  NearBoundary,  ///< within a disk radius of a trimming curve (or on one)
  Tangent,       ///< line nearly tangent to the surface
  Cusp,          ///< surface normal vanishes at the hit
  Invisible      ///< hit lies in the trimmed away region, no contribution
};

/*!
 * \brief Classifies an intersection record against the current loops.
 *
 * The checks run in the order invisibility, cusp, boundary proximity,
 * tangency; interior is the fall through. cuspTol bounds the norm of the
 * unnormalized surface normal, tangentTol the cosine against the line.
 */
inline IntersectionKind classifyIntersection(const std::vector<TrimLoop>& loops,
                                             const IntersectionRecord& rec, const Vec3& lineDir,
                                             double diskRadius, double tangentTol, double cuspTol)
{
  bool onCurve = false;
  const bool contains = trimContains(loops, rec.uv, &onCurve);
  const bool nearCurve = onCurve || loopsEnterDisk(loops, rec.uv, diskRadius);
  if(!contains && !nearCurve)
  {
    return IntersectionKind::Invisible;
  }
  if(rec.normal.norm() <= cuspTol)
  {
    return IntersectionKind::Cusp;
  }
  if(nearCurve)
  {
    return IntersectionKind::NearBoundary;
  }
  if(std::abs(rec.normal.normalized().dot(lineDir)) < tangentTol)
  {
    return IntersectionKind::Tangent;
  }
  return IntersectionKind::Interior;
}

}  // namespace gwn
