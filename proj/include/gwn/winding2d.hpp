// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/curve2.hpp"
#include "gwn/patch.hpp"

#include <cmath>
#include <vector>

namespace gwn
{

/*!
 * \brief Signed angle fraction swept by the segment between two points seen
 *        from the origin.
 *
 * Arguments are the endpoint positions relative to the query point. The
 * value lies in (-0.5, 0.5]; a quarter turn gives 0.25.
 */
inline double segmentWinding(const Vec2& a, const Vec2& b)
{
  return std::atan2(a.cross(b), a.dot(b)) / (2.0 * pi);
}

/// Winding value plus a flag marking queries on (or numerically at) a curve.
struct Winding2d
{
  double value = 0.0;
  bool coincident = false;
};

namespace detail
{
inline double arcWinding(const BezierArc2& arc, const Vec2& q, double scale, int depth,
                         bool& coincident)
{
  // Control boxes approach the curve quadratically under subdivision, so the
  // padding below (not just exact box containment) is what gives queries a
  // genuine transverse coincidence tolerance.
  const double tol = 1e-13 * scale;
  const Box2 box = arc.controlBox();
  if(box.distance(q) > tol)
  {
    // The arc stays inside its control box, so seen from outside it sweeps
    // less than a half turn and the chord angle is exact.
    return segmentWinding(arc.startPoint() - q, arc.endPoint() - q);
  }
  if(box.diagonal() <= tol)
  {
    coincident = true;
    return segmentWinding(arc.startPoint() - q, arc.endPoint() - q);
  }
  if(depth >= 64)
  {
    throw Error(ErrorCode::DegenerateGeometry,
                "2D winding: subdivision depth exhausted without separating the query");
  }
  const auto halves = arc.split();
  return arcWinding(halves.first, q, scale, depth + 1, coincident) +
    arcWinding(halves.second, q, scale, depth + 1, coincident);
}

inline double loopScale(const std::vector<TrimLoop>& loops)
{
  Box2 box;
  for(const TrimLoop& loop : loops)
  {
    for(const RationalCurve2& curve : loop.curves)
    {
      box.addBox(curve.controlBox());
    }
  }
  return box.valid() ? std::max(box.diagonal(), 1e-300) : 1.0;
}
}  // namespace detail

/*!
 * \brief Generalized winding number of the trimming loops around a parameter
 *        point.
 *
 * Sums exact chord angles for curve pieces whose control boxes exclude the
 * query and subdivides the rest. A query on a curve is flagged coincident
 * and yields a bounded (implementation defined) value.
 */
inline Winding2d gwn2d(const std::vector<TrimLoop>& loops, const Vec2& q)
{
  Winding2d result;
  const double scale = detail::loopScale(loops);
  for(const TrimLoop& loop : loops)
  {
    for(const RationalCurve2& curve : loop.curves)
    {
      for(const BezierArc2& arc : curve.bezierArcs())
      {
        result.value += detail::arcWinding(arc, q, scale, 0, result.coincident);
      }
    }
  }
  return result;
}

/// Nonzero rule containment of a parameter point in the trimmed region.
inline bool trimContains(const std::vector<TrimLoop>& loops, const Vec2& q,
                         bool* coincident = nullptr)
{
  const Winding2d w = gwn2d(loops, q);
  if(coincident != nullptr)
  {
    *coincident = w.coincident;
  }
  return std::lround(w.value) != 0;
}

namespace detail
{
inline bool arcEntersDisk(const BezierArc2& arc, const Vec2& center, double radius, int depth)
{
  const Box2 box = arc.controlBox();
  if(box.distance(center) > radius)
  {
    return false;
  }
  if(box.farDistance(center) < radius)
  {
    return true;
  }
  if(box.diagonal() < 1e-6 * radius || depth >= 64)
  {
    return true;  // conservative for vanishing boxes
  }
  const auto halves = arc.split();
  return arcEntersDisk(halves.first, center, radius, depth + 1) ||
    arcEntersDisk(halves.second, center, radius, depth + 1);
}
}  // namespace detail

/// True when any trimming curve comes within \a radius of \a center.
inline bool loopsEnterDisk(const std::vector<TrimLoop>& loops, const Vec2& center, double radius)
{
  for(const TrimLoop& loop : loops)
  {
    for(const RationalCurve2& curve : loop.curves)
    {
      for(const BezierArc2& arc : curve.bezierArcs())
      {
        if(detail::arcEntersDisk(arc, center, radius, 0))
        {
          return true;
        }
      }
    }
  }
  return false;
}

/// Result of splitting trimming loops along a parameter space circle.
struct ClipResult
{
  std::vector<TrimLoop> outer;  ///< loops for the patch with the disk removed
  std::vector<TrimLoop> inner;  ///< loops for the extracted disk piece
  bool crossings = false;       ///< a curve crossed the circle
  bool innerVisible = false;    ///< the disk piece has a nonempty visible region
};

namespace detail
{
/// Collects parameter intervals of an arc that may cross the circle.
inline void collectCrossingCandidates(const BezierArc2& arc, const Vec2& center, double radius,
                                      double tolParam, std::vector<std::pair<double, double>>& out)
{
  const Box2 box = arc.controlBox();
  if(box.distance(center) > radius || box.farDistance(center) < radius)
  {
    return;
  }
  if(arc.b - arc.a < tolParam)
  {
    out.emplace_back(arc.a, arc.b);
    return;
  }
  const auto halves = arc.split();
  collectCrossingCandidates(halves.first, center, radius, tolParam, out);
  collectCrossingCandidates(halves.second, center, radius, tolParam, out);
}

/// Signed distance function to the circle, squared form.
inline double circleResidual(const RationalCurve2& curve, double t, const Vec2& center,
                             double radius)
{
  return (curve.evaluate(t) - center).squaredNorm() - radius * radius;
}

/// Parameter of the counterclockwise rational circle at a polar angle.
inline double circleParamForAngle(const RationalCurve2& circle, const Vec2& center, double angle)
{
  const double twoPi = 2.0 * pi;
  double a = std::fmod(angle, twoPi);
  if(a < 0.0)
  {
    a += twoPi;
  }
  const int quarter = std::min(3, static_cast<int>(a / (0.5 * pi)));
  double lo = 0.25 * quarter, hi = 0.25 * (quarter + 1);
  const Vec2 d{std::cos(a), std::sin(a)};
  for(int it = 0; it < 60; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    const Vec2 e = circle.evaluate(mid) - center;
    // Within a quarter turn the cross product sign says which side of the
    // target direction the current point lies on.
    if(e.cross(d) > 0.0)
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace detail

/*!
 * \brief Splits trimming loops along the circle of \a radius about \a center.
 *
 * Curve pieces outside the circle stay with the outer loop set and pieces
 * inside move to the inner set. The circle itself is split at the crossing
 * points; only its arcs inside the visible region are kept, clockwise to
 * close the outer region and counterclockwise to close the inner one, so
 * parameter space winding numbers are preserved on both sides. Tangential
 * grazes count as no crossing. When the circle lies entirely in the
 * invisible region the call is a no op with innerVisible = false.
 */
inline ClipResult clipLoopsToCircle(const std::vector<TrimLoop>& loops, const Vec2& center,
                                    double radius)
{
  ClipResult result;
  TrimLoop outerPieces, innerPieces;
  bool anyInside = false;
  std::vector<double> crossingAngles;

  for(const TrimLoop& loop : loops)
  {
    TrimLoop untouched;
    for(const RationalCurve2& curve : loop.curves)
    {
      const double domainLen = curve.domainMax() - curve.domainMin();
      const double tolParam = 1e-10 * domainLen;

      std::vector<std::pair<double, double>> candidates;
      for(const BezierArc2& arc : curve.bezierArcs())
      {
        detail::collectCrossingCandidates(arc, center, radius, tolParam, candidates);
      }

      // Merge adjacent candidate slivers, then keep only sign changes.
      std::vector<double> roots;
      std::size_t i = 0;
      while(i < candidates.size())
      {
        double lo = candidates[i].first, hi = candidates[i].second;
        std::size_t j = i + 1;
        while(j < candidates.size() && candidates[j].first - hi <= 4.0 * tolParam)
        {
          hi = candidates[j].second;
          ++j;
        }
        const double pad = 4.0 * tolParam;
        const double a = std::max(curve.domainMin(), lo - pad);
        const double b = std::min(curve.domainMax(), hi + pad);
        double ga = detail::circleResidual(curve, a, center, radius);
        double gb = detail::circleResidual(curve, b, center, radius);
        if(ga == 0.0)
        {
          ga = -gb;  // endpoint exactly on the circle: force one crossing
        }
        if(ga * gb < 0.0)
        {
          double lo2 = a, hi2 = b;
          for(int it = 0; it < 80 && hi2 - lo2 > 1e-16 * domainLen; ++it)
          {
            const double mid = 0.5 * (lo2 + hi2);
            const double gm = detail::circleResidual(curve, mid, center, radius);
            if((gm < 0.0) == (ga < 0.0))
            {
              lo2 = mid;
              ga = gm;
            }
            else
            {
              hi2 = mid;
            }
          }
          roots.push_back(0.5 * (lo2 + hi2));
        }
        i = j;
      }

      if(roots.empty())
      {
        // Whole curve on one side; classify by a midpoint sample.
        const double mid = 0.5 * (curve.domainMin() + curve.domainMax());
        if((curve.evaluate(mid) - center).norm() < radius)
        {
          innerPieces.curves.push_back(curve);
          anyInside = true;
        }
        else
        {
          untouched.curves.push_back(curve);
        }
        continue;
      }

      result.crossings = true;
      for(const double rr : roots)
      {
        const Vec2 x = curve.evaluate(rr) - center;
        crossingAngles.push_back(std::atan2(x.y, x.x));
      }
      std::vector<double> cuts;
      cuts.push_back(curve.domainMin());
      for(const double rr : roots)
      {
        cuts.push_back(rr);
      }
      cuts.push_back(curve.domainMax());
      for(std::size_t s = 0; s + 1 < cuts.size(); ++s)
      {
        if(cuts[s + 1] - cuts[s] < 2.0 * tolParam)
        {
          continue;  // sliver at a cut, length below parameter tolerance
        }
        const RationalCurve2 piece = curve.restricted(cuts[s], cuts[s + 1]);
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        if((curve.evaluate(mid) - center).norm() < radius)
        {
          innerPieces.curves.push_back(piece);
        }
        else
        {
          outerPieces.curves.push_back(piece);
        }
      }
    }
    if(!untouched.curves.empty())
    {
      result.outer.push_back(std::move(untouched));
    }
  }

  const bool centerInside = !result.crossings && !anyInside && trimContains(loops, center);
  result.innerVisible = result.crossings || anyInside || centerInside;

  if(!result.innerVisible)
  {
    // Circle entirely in the invisible region: leave the loops untouched.
    result.outer = loops;
    return result;
  }

  if(!outerPieces.curves.empty())
  {
    result.outer.push_back(std::move(outerPieces));
  }
  if(!innerPieces.curves.empty())
  {
    result.inner.push_back(std::move(innerPieces));
  }

  const RationalCurve2 rim = circleLoop(center, radius, true);
  TrimLoop outerArcs, innerArcs;
  const auto keepArc = [&](const RationalCurve2& ccwArc) {
    innerArcs.curves.push_back(ccwArc);
    outerArcs.curves.push_back(ccwArc.reversed());
  };

  if(!result.crossings)
  {
    // Nothing crosses the rim, so it lies on one side of the region as a
    // whole; keep the full circle only when that side is the visible one.
    bool rimCoincident = false;
    const bool rimInside =
      trimContains(loops, center + Vec2{radius, 0.0}, &rimCoincident) || rimCoincident;
    if(rimInside)
    {
      keepArc(rim);
    }
  }
  else
  {
    // Split the rim at the crossing points and keep the arcs whose
    // midpoints are inside the visible region.
    const double twoPi = 2.0 * pi;
    std::vector<double> angles;
    for(double a : crossingAngles)
    {
      a = std::fmod(a, twoPi);
      if(a < 0.0)
      {
        a += twoPi;
      }
      angles.push_back(a);
    }
    std::sort(angles.begin(), angles.end());
    // Merge duplicate angles (several curves crossing at one corner point).
    const double angleTol = 1e-8;
    std::vector<double> unique;
    for(const double a : angles)
    {
      if(unique.empty() || a - unique.back() > angleTol)
      {
        unique.push_back(a);
      }
    }
    while(unique.size() > 1 && unique.front() + twoPi - unique.back() <= angleTol)
    {
      unique.pop_back();
    }

    std::vector<double> params(unique.size());
    for(std::size_t k = 0; k < unique.size(); ++k)
    {
      params[k] = detail::circleParamForAngle(rim, center, unique[k]);
    }
    const double paramTol = 1e-12;
    for(std::size_t k = 0; k < unique.size(); ++k)
    {
      const bool wrap = (k + 1 == unique.size());
      const double aMid = wrap ? 0.5 * (unique[k] + unique.front() + twoPi)
                               : 0.5 * (unique[k] + unique[k + 1]);
      const Vec2 probe = center + Vec2{radius * std::cos(aMid), radius * std::sin(aMid)};
      if(!trimContains(loops, probe))
      {
        continue;
      }
      if(!wrap)
      {
        if(params[k + 1] - params[k] > paramTol)
        {
          keepArc(rim.restricted(params[k], params[k + 1]));
        }
      }
      else
      {
        if(1.0 - params[k] > paramTol)
        {
          keepArc(rim.restricted(params[k], 1.0));
        }
        if(params.front() > paramTol)
        {
          keepArc(rim.restricted(0.0, params.front()));
        }
      }
    }
  }

  if(!outerArcs.curves.empty())
  {
    result.outer.push_back(std::move(outerArcs));
  }
  if(!innerArcs.curves.empty())
  {
    result.inner.push_back(std::move(innerArcs));
  }
  return result;
}

}  // namespace gwn
