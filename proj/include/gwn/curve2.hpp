// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/knots.hpp"

#include <utility>
#include <vector>

namespace gwn
{

/// One rational Bezier arc extracted from a trimming curve, with its
/// parameter range [a, b] in the parent curve.
struct BezierArc2
{
  double a = 0.0, b = 1.0;
  std::vector<Vec3h> ctrl;

  Vec2 startPoint() const { return ctrl.front().project(); }
  Vec2 endPoint() const { return ctrl.back().project(); }

  Box2 controlBox() const
  {
    Box2 box;
    for(const Vec3h& p : ctrl)
    {
      box.addPoint(p.project());
    }
    return box;
  }

  /// Splits at the parameter midpoint by the de Casteljau construction.
  std::pair<BezierArc2, BezierArc2> split() const
  {
    const int p = static_cast<int>(ctrl.size()) - 1;
    std::vector<Vec3h> work = ctrl;
    BezierArc2 left, right;
    left.ctrl.resize(p + 1);
    right.ctrl.resize(p + 1);
    left.ctrl[0] = work[0];
    right.ctrl[p] = work[p];
    for(int step = 1; step <= p; ++step)
    {
      for(int i = 0; i <= p - step; ++i)
      {
        work[i] = lerp(work[i], work[i + 1], 0.5);
      }
      left.ctrl[step] = work[0];
      right.ctrl[p - step] = work[p - step];
    }
    const double mid = 0.5 * (a + b);
    left.a = a;
    left.b = mid;
    right.a = mid;
    right.b = b;
    return {left, right};
  }
};

/*!
 * \brief Rational B-spline curve in the (u, v) parameter plane.
 *
 * Control points are stored homogeneous (weighted position, weight) on a
 * clamped knot vector. Trimming loops are made of these curves.
 */
class RationalCurve2
{
public:
  RationalCurve2() = default;

  RationalCurve2(int degree, std::vector<double> knotVector, std::vector<Vec3h> controls)
    : m_degree(degree), m_knots(std::move(knotVector)), m_ctrl(std::move(controls))
  {
    knots::validate(m_knots, m_degree, "trimming curve knots");
    if(knots::controlCount(m_knots, m_degree) != static_cast<int>(m_ctrl.size()))
    {
      throw Error(ErrorCode::InvalidInput, "trimming curve: control count does not match knots");
    }
    for(const Vec3h& c : m_ctrl)
    {
      if(!(c.w > 0.0))
      {
        throw Error(ErrorCode::InvalidInput, "trimming curve: weights must be positive");
      }
    }
  }

  /// Convenience constructor from Euclidean points and weights.
  static RationalCurve2 fromPoints(int degree, std::vector<double> knotVector,
                                   const std::vector<Vec2>& points,
                                   const std::vector<double>& weights)
  {
    std::vector<Vec3h> ctrl(points.size());
    for(std::size_t i = 0; i < points.size(); ++i)
    {
      const double w = weights.empty() ? 1.0 : weights[i];
      ctrl[i] = {points[i].x * w, points[i].y * w, w};
    }
    return RationalCurve2(degree, std::move(knotVector), std::move(ctrl));
  }

  int degree() const { return m_degree; }
  const std::vector<double>& knotVector() const { return m_knots; }
  const std::vector<Vec3h>& controls() const { return m_ctrl; }
  int controlCount() const { return static_cast<int>(m_ctrl.size()); }

  double domainMin() const { return knots::domainMin(m_knots, m_degree); }
  double domainMax() const { return knots::domainMax(m_knots, m_degree); }

  Vec2 startPoint() const { return m_ctrl.front().project(); }
  Vec2 endPoint() const { return m_ctrl.back().project(); }

  /// Point on the curve at parameter t.
  Vec2 evaluate(double t) const
  {
    const int span = knots::findSpan(m_knots, m_degree, t);
    double N[16];
    knots::basisFunctions(m_knots, m_degree, span, t, N);
    Vec3h h{0.0, 0.0, 0.0};
    for(int j = 0; j <= m_degree; ++j)
    {
      h = h + m_ctrl[span - m_degree + j] * N[j];
    }
    return h.project();
  }

  /// Point and first derivative at parameter t (rational quotient rule).
  void evaluateWithDerivative(double t, Vec2& point, Vec2& derivative) const
  {
    const int span = knots::findSpan(m_knots, m_degree, t);
    double N[16], dN[16];
    knots::basisFunctionsWithDerivative(m_knots, m_degree, span, t, N, dN);
    Vec3h h{0.0, 0.0, 0.0}, dh{0.0, 0.0, 0.0};
    for(int j = 0; j <= m_degree; ++j)
    {
      const Vec3h& c = m_ctrl[span - m_degree + j];
      h = h + c * N[j];
      dh = dh + c * dN[j];
    }
    point = h.project();
    derivative.x = (dh.x - point.x * dh.w) / h.w;
    derivative.y = (dh.y - point.y * dh.w) / h.w;
  }

  /// Bounding box of the Euclidean control polygon (contains the curve).
  Box2 controlBox() const
  {
    Box2 box;
    for(const Vec3h& c : m_ctrl)
    {
      box.addPoint(c.project());
    }
    return box;
  }

  /// Decomposes into rational Bezier arcs by full interior knot insertion.
  std::vector<BezierArc2> bezierArcs() const
  {
    std::vector<double> t = m_knots;
    std::vector<Vec3h> ctrl = m_ctrl;
    for(const double u : knots::breakpoints(m_knots, m_degree))
    {
      if(u > domainMin() && u < domainMax())
      {
        knots::insertKnot(t, ctrl, m_degree, u, m_degree);
      }
    }
    const std::vector<double> breaks = knots::breakpoints(t, m_degree);
    std::vector<BezierArc2> arcs(breaks.size() - 1);
    for(std::size_t s = 0; s + 1 < breaks.size(); ++s)
    {
      arcs[s].a = breaks[s];
      arcs[s].b = breaks[s + 1];
      arcs[s].ctrl.assign(ctrl.begin() + s * m_degree, ctrl.begin() + s * m_degree + m_degree + 1);
    }
    return arcs;
  }

  /// The same trace with reversed orientation.
  RationalCurve2 reversed() const
  {
    const double a = m_knots.front(), b = m_knots.back();
    std::vector<double> t(m_knots.size());
    for(std::size_t i = 0; i < m_knots.size(); ++i)
    {
      t[i] = a + b - m_knots[m_knots.size() - 1 - i];
    }
    std::vector<Vec3h> ctrl(m_ctrl.rbegin(), m_ctrl.rend());
    return RationalCurve2(m_degree, std::move(t), std::move(ctrl));
  }

  /*!
   * \brief Restriction of the curve to [t0, t1], identical trace and
   *        parameter values on that range.
   */
  RationalCurve2 restricted(double t0, double t1) const
  {
    if(!(t0 < t1) || t0 < domainMin() - 1e-12 || t1 > domainMax() + 1e-12)
    {
      throw Error(ErrorCode::InvalidInput, "restricted: bad parameter range");
    }
    t0 = std::max(t0, domainMin());
    t1 = std::min(t1, domainMax());
    std::vector<double> t = m_knots;
    std::vector<Vec3h> ctrl = m_ctrl;
    if(t0 > domainMin())
    {
      knots::insertKnot(t, ctrl, m_degree, t0, m_degree);
    }
    if(t1 < domainMax())
    {
      knots::insertKnot(t, ctrl, m_degree, t1, m_degree);
    }
    // With multiplicity m at a cut value whose first occurrence is knot i,
    // the control point entering the piece from the right has index
    // i + m - p - 1, and the control closing it from the left has index
    // i - 1. Both hold for interior cuts (m == p) and clamped ends
    // (m == p + 1).
    const auto firstIndexOf = [&t](double u) {
      int i = 0;
      while(t[i] != u)
      {
        ++i;
      }
      return i;
    };
    const int first = firstIndexOf(t0) + knots::multiplicity(t, t0) - m_degree - 1;
    const int last = firstIndexOf(t1) - 1;
    std::vector<Vec3h> subCtrl(ctrl.begin() + first, ctrl.begin() + last + 1);
    std::vector<double> subKnots(m_degree + 1, t0);
    for(const double u : t)
    {
      if(u > t0 && u < t1)
      {
        subKnots.push_back(u);
      }
    }
    subKnots.insert(subKnots.end(), m_degree + 1, t1);
    return RationalCurve2(m_degree, std::move(subKnots), std::move(subCtrl));
  }

private:
  int m_degree = 1;
  std::vector<double> m_knots;
  std::vector<Vec3h> m_ctrl;
};

/*!
 * \brief Exact rational circle in the parameter plane (degree 2, four arcs).
 *
 * Counterclockwise trace by default; pass ccw = false for the clockwise loop.
 */
inline RationalCurve2 circleLoop(const Vec2& center, double radius, bool ccw = true)
{
  const double r = radius, s = std::sqrt(0.5);
  const double cx = center.x, cy = center.y;
  std::vector<Vec2> pts = {{cx + r, cy},     {cx + r, cy + r}, {cx, cy + r},
                           {cx - r, cy + r}, {cx - r, cy},     {cx - r, cy - r},
                           {cx, cy - r},     {cx + r, cy - r}, {cx + r, cy}};
  std::vector<double> w = {1, s, 1, s, 1, s, 1, s, 1};
  std::vector<double> t = {0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1};
  RationalCurve2 circle = RationalCurve2::fromPoints(2, std::move(t), pts, w);
  return ccw ? circle : circle.reversed();
}

/*!
 * \brief The four straight edges of a parameter rectangle as one loop,
 *        counterclockwise.
 */
inline std::vector<RationalCurve2> rectangleLoop(double u0, double u1, double v0, double v1)
{
  const auto edge = [](Vec2 a, Vec2 b) {
    return RationalCurve2::fromPoints(1, {0, 0, 1, 1}, {a, b}, {1, 1});
  };
  return {edge({u0, v0}, {u1, v0}), edge({u1, v0}, {u1, v1}), edge({u1, v1}, {u0, v1}),
          edge({u0, v1}, {u0, v0})};
}

}  // namespace gwn
