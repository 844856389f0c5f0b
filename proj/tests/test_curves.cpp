// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#include "gwn/curve2.hpp"
#include "gwn/knots.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

using namespace gwn;

namespace
{
/// A wiggly rational cubic used across several tests.
RationalCurve2 sampleCubic()
{
  return RationalCurve2::fromPoints(
    3, {0, 0, 0, 0, 0.3, 0.7, 1, 1, 1, 1},
    {{0, 0}, {1, 2}, {2, -1}, {3, 3}, {4, 0}, {5, 1}},
    {1.0, 0.8, 1.5, 0.6, 1.2, 1.0});
}

std::vector<std::array<double, 3>> rawControls(const RationalCurve2& c)
{
  std::vector<std::array<double, 3>> out;
  for(const Vec3h& h : c.controls())
  {
    out.push_back({h.x, h.y, h.w});
  }
  return out;
}
}  // namespace

TEST_CASE("knot vector validation rejects malformed input", "[knots]")
{
  CHECK_NOTHROW(knots::validate({0, 0, 0, 1, 2, 2, 2}, 2, "ok"));
  // Not clamped at the start.
  CHECK_THROWS_AS(knots::validate({0, 1, 2, 3, 4, 5, 6}, 2, "bad"), Error);
  // Decreasing interior.
  CHECK_THROWS_AS(knots::validate({0, 0, 0, 2, 1, 3, 3, 3}, 2, "bad"), Error);
  // Too short for the degree.
  CHECK_THROWS_AS(knots::validate({0, 0, 1, 1}, 2, "bad"), Error);
  // Empty domain.
  CHECK_THROWS_AS(knots::validate({1, 1, 1, 1}, 1, "bad"), Error);
}

TEST_CASE("basis functions partition unity and match the naive recursion", "[knots]")
{
  const std::vector<double> t = {0, 0, 0, 0, 0.3, 0.7, 1, 1, 1, 1};
  const int p = 3;
  const int n = knots::controlCount(t, p);
  REQUIRE(n == 6);

  for(double u : {0.0, 0.1, 0.3, 0.45, 0.699, 0.7, 0.95})
  {
    const int span = knots::findSpan(t, p, u);
    double N[16];
    knots::basisFunctions(t, p, span, u, N);
    double sum = 0.0;
    for(int j = 0; j <= p; ++j)
    {
      sum += N[j];
      const int global = span - p + j;
      const double reference = (u >= t[t.size() - 1 - p])
        ? (global == n - 1 ? 1.0 : 0.0)
        : oracle::bsplineBasis(t, global, p, u);
      CAPTURE(u, j, global);
      CHECK(N[j] == Catch::Approx(reference).margin(1e-14));
    }
    CHECK(sum == Catch::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("basis derivatives agree with central differences", "[knots]")
{
  const std::vector<double> t = {0, 0, 0, 0.4, 0.6, 1, 1, 1};
  const int p = 2;
  const double h = 1e-7;

  for(double u : {0.1, 0.39, 0.5, 0.83})
  {
    const int span = knots::findSpan(t, p, u);
    double N[16], dN[16], Np[16], Nm[16];
    knots::basisFunctionsWithDerivative(t, p, span, u, N, dN);
    // The span is constant in a neighborhood of these sample values.
    knots::basisFunctions(t, p, span, u + h, Np);
    knots::basisFunctions(t, p, span, u - h, Nm);
    for(int j = 0; j <= p; ++j)
    {
      CHECK(dN[j] == Catch::Approx((Np[j] - Nm[j]) / (2 * h)).margin(1e-6));
    }
  }
}

TEST_CASE("knot insertion preserves the curve trace", "[knots]")
{
  const RationalCurve2 curve = sampleCubic();
  std::vector<double> t = curve.knotVector();
  std::vector<Vec3h> ctrl = curve.controls();
  knots::insertKnot(t, ctrl, curve.degree(), 0.5, 2);
  const RationalCurve2 split(curve.degree(), t, ctrl);

  for(int i = 0; i <= 100; ++i)
  {
    const double u = i / 100.0;
    const Vec2 a = curve.evaluate(u);
    const Vec2 b = split.evaluate(u);
    CHECK((a - b).norm() < 1e-12);
  }
}

TEST_CASE("curve evaluation matches the independent de Boor recursion", "[curves]")
{
  const RationalCurve2 curve = sampleCubic();
  const auto raw = rawControls(curve);

  for(int i = 0; i <= 50; ++i)
  {
    const double u = i / 50.0;
    const Vec2 mine = curve.evaluate(u);
    const Vec2 ref = oracle::curvePoint2(curve.knotVector(), curve.degree(), raw, u);
    CAPTURE(u);
    CHECK((mine - ref).norm() < 1e-12);
  }

  SECTION("derivative matches finite differences")
  {
    const double h = 1e-7;
    for(double u : {0.12, 0.3, 0.55, 0.88})
    {
      Vec2 p, d;
      curve.evaluateWithDerivative(u, p, d);
      const Vec2 fd = (curve.evaluate(u + h) - curve.evaluate(u - h)) / (2 * h);
      CHECK((d - fd).norm() < 1e-5);
    }
  }
}

TEST_CASE("constructor validation", "[curves]")
{
  // Control count mismatch.
  CHECK_THROWS_AS(RationalCurve2(2, {0, 0, 0, 1, 1, 1}, {{0, 0, 1}, {1, 1, 1}}), Error);
  // Nonpositive weight.
  CHECK_THROWS_AS(RationalCurve2(1, {0, 0, 1, 1}, {{0, 0, 1}, {1, 1, 0.0}}), Error);
}

TEST_CASE("rational circle is exact and counterclockwise", "[curves]")
{
  const Vec2 center{0.3, -0.2};
  const double radius = 1.7;
  const RationalCurve2 circle = circleLoop(center, radius);

  double prevAngle = std::atan2(circle.evaluate(0.0).y - center.y,
                                circle.evaluate(0.0).x - center.x);
  double total = 0.0;
  for(int i = 1; i <= 400; ++i)
  {
    const double t = i / 400.0;
    const Vec2 p = circle.evaluate(t);
    CHECK((p - center).norm() == Catch::Approx(radius).epsilon(1e-13));
    double angle = std::atan2(p.y - center.y, p.x - center.x);
    double step = angle - prevAngle;
    while(step <= -pi)
    {
      step += 2 * pi;
    }
    while(step > pi)
    {
      step -= 2 * pi;
    }
    total += step;
    prevAngle = angle;
  }
  CHECK(total == Catch::Approx(2 * pi).epsilon(1e-12));

  SECTION("clockwise flag reverses the trace")
  {
    const RationalCurve2 cw = circleLoop(center, radius, false);
    const Vec2 a = circle.evaluate(0.2);
    const Vec2 b = cw.evaluate(0.8);
    CHECK((a - b).norm() < 1e-13);
  }
}

TEST_CASE("rectangle loop chains four edges counterclockwise", "[curves]")
{
  const std::vector<RationalCurve2> loop = rectangleLoop(0.0, 2.0, -1.0, 1.0);
  REQUIRE(loop.size() == 4);
  for(std::size_t i = 0; i < 4; ++i)
  {
    const Vec2 tail = loop[i].endPoint();
    const Vec2 head = loop[(i + 1) % 4].startPoint();
    CHECK((tail - head).norm() == 0.0);
  }

  // Counterclockwise: positive winding about an interior point.
  std::vector<Vec2> poly;
  for(const RationalCurve2& edge : loop)
  {
    for(int i = 0; i < 10; ++i)
    {
      poly.push_back(edge.evaluate(i / 10.0));
    }
  }
  CHECK(oracle::polylineWinding(poly, {1.0, 0.0}) == Catch::Approx(1.0));
  CHECK(oracle::polylineWinding(poly, {3.0, 0.0}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("bezier arcs tile the domain and reproduce the trace", "[curves]")
{
  const RationalCurve2 curve = sampleCubic();
  const std::vector<BezierArc2> arcs = curve.bezierArcs();
  REQUIRE(arcs.size() == 3);  // breakpoints 0, 0.3, 0.7, 1

  CHECK(arcs.front().a == curve.domainMin());
  CHECK(arcs.back().b == curve.domainMax());
  for(std::size_t s = 0; s + 1 < arcs.size(); ++s)
  {
    CHECK(arcs[s].b == arcs[s + 1].a);
  }

  for(const BezierArc2& arc : arcs)
  {
    // de Casteljau midpoint of the arc equals the curve there.
    BezierArc2 left = arc.split().first;
    const Vec2 mid = left.endPoint();
    const Vec2 ref = curve.evaluate(0.5 * (arc.a + arc.b));
    CHECK((mid - ref).norm() < 1e-13);

    // Control box contains dense samples of its range (convex hull
    // property).  Pad by an ulp-scale margin for the floating point
    // evaluation of points that sit exactly on a box face.
    Box2 box = arc.controlBox();
    box.lo.x -= 1e-12;
    box.lo.y -= 1e-12;
    box.hi.x += 1e-12;
    box.hi.y += 1e-12;
    for(int i = 0; i <= 20; ++i)
    {
      const double t = arc.a + (arc.b - arc.a) * i / 20.0;
      const Vec2 p = curve.evaluate(t);
      CHECK(box.contains(p));
    }
  }
}

TEST_CASE("reversed curves trace the same points backwards", "[curves]")
{
  const RationalCurve2 curve = sampleCubic();
  const RationalCurve2 rev = curve.reversed();
  CHECK(rev.domainMin() == curve.domainMin());
  CHECK(rev.domainMax() == curve.domainMax());
  for(int i = 0; i <= 40; ++i)
  {
    const double t = i / 40.0;
    const Vec2 a = curve.evaluate(t);
    const Vec2 b = rev.evaluate(1.0 - t);
    CHECK((a - b).norm() < 1e-12);
  }
}

TEST_CASE("restriction keeps the trace and the parameterization", "[curves]")
{
  const RationalCurve2 curve = sampleCubic();

  const auto checkRange = [&](double t0, double t1) {
    const RationalCurve2 sub = curve.restricted(t0, t1);
    CHECK(sub.domainMin() == Catch::Approx(t0));
    CHECK(sub.domainMax() == Catch::Approx(t1));
    for(int i = 0; i <= 60; ++i)
    {
      const double t = t0 + (t1 - t0) * i / 60.0;
      CAPTURE(t0, t1, t);
      CHECK((sub.evaluate(t) - curve.evaluate(t)).norm() < 1e-11);
    }
  };

  checkRange(0.1, 0.9);    // interior cuts on both sides
  checkRange(0.0, 0.55);   // clamped start, interior end
  checkRange(0.42, 1.0);   // interior start, clamped end
  checkRange(0.0, 1.0);    // full domain, both ends clamped
  checkRange(0.3, 0.7);    // cuts exactly on existing breakpoints
  checkRange(0.1, 0.35);   // range straddling one breakpoint

  SECTION("degree-one edge restriction")
  {
    const RationalCurve2 edge =
      RationalCurve2::fromPoints(1, {0, 0, 1, 1}, {{0, 0}, {2, 2}}, {1, 1});
    const RationalCurve2 sub = edge.restricted(0.25, 1.0);
    CHECK((sub.evaluate(0.25) - Vec2{0.5, 0.5}).norm() < 1e-14);
    CHECK((sub.evaluate(1.0) - Vec2{2, 2}).norm() < 1e-14);
  }

  SECTION("circle quarter restriction stays on the circle")
  {
    const RationalCurve2 circle = circleLoop({0, 0}, 1.0);
    const RationalCurve2 sub = circle.restricted(0.25, 0.5);
    for(int i = 0; i <= 30; ++i)
    {
      const double t = 0.25 + 0.25 * i / 30.0;
      CHECK((sub.evaluate(t) - circle.evaluate(t)).norm() < 1e-13);
      CHECK(sub.evaluate(t).norm() == Catch::Approx(1.0).epsilon(1e-13));
    }
  }

  SECTION("invalid ranges throw")
  {
    CHECK_THROWS_AS(curve.restricted(0.5, 0.5), Error);
    CHECK_THROWS_AS(curve.restricted(0.7, 0.2), Error);
    CHECK_THROWS_AS(curve.restricted(-0.2, 0.5), Error);
  }
}
