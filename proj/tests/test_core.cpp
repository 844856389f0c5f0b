// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#include "gwn/core.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

using namespace gwn;

TEST_CASE("vector algebra identities", "[core]")
{
  const Vec3 a{1.0, -2.0, 3.0};
  const Vec3 b{0.5, 4.0, -1.5};

  SECTION("cross product is antisymmetric and orthogonal to its factors")
  {
    const Vec3 c = a.cross(b);
    const Vec3 d = b.cross(a);
    CHECK(c.x == Catch::Approx(-d.x));
    CHECK(c.y == Catch::Approx(-d.y));
    CHECK(c.z == Catch::Approx(-d.z));
    CHECK(c.dot(a) == Catch::Approx(0.0).margin(1e-14));
    CHECK(c.dot(b) == Catch::Approx(0.0).margin(1e-14));
  }

  SECTION("normalized returns a unit vector and zero for the zero vector")
  {
    CHECK(a.normalized().norm() == Catch::Approx(1.0));
    CHECK(Vec3{}.normalized().norm() == 0.0);
  }

  SECTION("2D cross matches the z component of the embedded 3D cross")
  {
    const Vec2 p{1.0, 2.0}, q{-3.0, 0.5};
    const Vec3 p3{p.x, p.y, 0.0}, q3{q.x, q.y, 0.0};
    CHECK(p.cross(q) == Catch::Approx(p3.cross(q3).z));
  }
}

TEST_CASE("homogeneous points project and interpolate", "[core]")
{
  const Vec4 h{2.0, 4.0, 6.0, 2.0};
  const Vec3 p = h.project();
  CHECK(p.x == 1.0);
  CHECK(p.y == 2.0);
  CHECK(p.z == 3.0);

  const Vec4 mid = lerp(Vec4{0, 0, 0, 1}, Vec4{2, 2, 2, 3}, 0.5);
  CHECK(mid.w == Catch::Approx(2.0));
  CHECK(mid.x == Catch::Approx(1.0));
}

TEST_CASE("rotations are orthonormal and compose correctly", "[core]")
{
  const Rotation r = Rotation::fromAxisAngle({0, 0, 1}, pi / 2.0);

  SECTION("quarter turn about z maps x to y")
  {
    const Vec3 y = r.apply({1, 0, 0});
    CHECK(y.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(y.y == Catch::Approx(1.0));
    CHECK(y.z == Catch::Approx(0.0).margin(1e-15));
  }

  SECTION("transpose inverts")
  {
    const Vec3 v{0.3, -0.7, 0.64};
    const Vec3 round = r.transposed().apply(r.apply(v));
    CHECK(round.x == Catch::Approx(v.x));
    CHECK(round.y == Catch::Approx(v.y));
    CHECK(round.z == Catch::Approx(v.z));
  }

  SECTION("compose applies the right factor first")
  {
    const Rotation s = Rotation::fromAxisAngle({1, 0, 0}, pi / 2.0);
    const Vec3 v{0, 0, 1};
    const Vec3 lhs = r.compose(s).apply(v);
    const Vec3 rhs = r.apply(s.apply(v));
    CHECK(lhs.x == Catch::Approx(rhs.x).margin(1e-15));
    CHECK(lhs.y == Catch::Approx(rhs.y).margin(1e-15));
    CHECK(lhs.z == Catch::Approx(rhs.z).margin(1e-15));
  }
}

TEST_CASE("rotationToZ aligns arbitrary directions with +z", "[core]")
{
  Rng rng(7);
  for(int i = 0; i < 200; ++i)
  {
    const Vec3 dir = rng.unitVector();
    const Rotation rot = rotationToZ(dir);
    const Vec3 mapped = rot.apply(dir);
    CAPTURE(dir.x, dir.y, dir.z);
    CHECK(mapped.z == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mapped.x) < 1e-12);
    CHECK(std::abs(mapped.y) < 1e-12);

    // Proper rotation: the images of the axes form a right-handed frame.
    const Vec3 ex = rot.apply({1, 0, 0});
    const Vec3 ey = rot.apply({0, 1, 0});
    const Vec3 ez = rot.apply({0, 0, 1});
    CHECK(ex.cross(ey).dot(ez) == Catch::Approx(1.0).epsilon(1e-12));
  }

  SECTION("handles the antipodal direction")
  {
    const Rotation rot = rotationToZ({0, 0, -1});
    const Vec3 mapped = rot.apply({0, 0, -1});
    CHECK(mapped.z == Catch::Approx(1.0));
  }
}

TEST_CASE("boxes grow, contain and measure", "[core]")
{
  Box3 box;
  CHECK_FALSE(box.valid());
  box.addPoint({0, 0, 0});
  box.addPoint({2, 1, 3});
  CHECK(box.valid());
  CHECK(box.contains({1, 0.5, 1.5}));
  CHECK_FALSE(box.contains({1, 0.5, 3.5}));
  CHECK(box.diagonal() == Catch::Approx(std::sqrt(4.0 + 1.0 + 9.0)));

  const double before = box.diagonal();
  box.inflate(0.1);
  CHECK(box.diagonal() > before);
  CHECK(box.contains({-0.1, -0.1, -0.1}));

  Box2 flat;
  flat.addPoint({0, 0});
  flat.addPoint({1, 1});
  CHECK(flat.distance({2, 1}) == Catch::Approx(1.0));
  CHECK(flat.distance({0.5, 0.5}) == 0.0);
  CHECK(flat.farDistance({0, 0}) == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("oriented boxes answer containment in their own frame", "[core]")
{
  Obb3 obb;
  obb.center = {1, 1, 1};
  obb.axes = Rotation::fromAxisAngle({0, 0, 1}, pi / 4.0);
  obb.half = {2.0, 0.5, 0.25};

  // The +x axis of the box frame points along (cos45, -sin45, 0) in world
  // space because rows of axes map world to local.
  const Vec3 alongX = obb.axes.transposed().apply({1.9, 0, 0});
  CHECK(obb.contains(obb.center + alongX));
  CHECK_FALSE(obb.contains(obb.center + obb.axes.transposed().apply({2.1, 0, 0})));

  const Vec3 outside = obb.center + obb.axes.transposed().apply({3.0, 0, 0});
  const Vec3 closest = obb.closestPoint(outside);
  const Vec3 expected = obb.center + obb.axes.transposed().apply({2.0, 0, 0});
  CHECK((closest - expected).norm() < 1e-12);
}

TEST_CASE("deterministic rng and seed mixing", "[core]")
{
  Rng a(42), b(42), c(43);
  CHECK(a.next() == b.next());
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());

  Rng d(99);
  for(int i = 0; i < 100; ++i)
  {
    const double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(d.unitVector().norm() == Catch::Approx(1.0));
  }

  // hashMix separates nearby inputs.
  std::set<std::uint64_t> seen;
  for(std::uint64_t i = 0; i < 64; ++i)
  {
    for(std::uint64_t j = 0; j < 64; ++j)
    {
      seen.insert(hashMix(i, j));
    }
  }
  CHECK(seen.size() == 64 * 64);
}

TEST_CASE("quadratic solver covers the degenerate ladder", "[core]")
{
  double roots[2] = {0, 0};

  SECTION("two distinct roots, stable for small leading coefficient")
  {
    REQUIRE(solveQuadratic(1.0, -3.0, 2.0, 1.0, roots) == 2);
    const double lo = std::min(roots[0], roots[1]);
    const double hi = std::max(roots[0], roots[1]);
    CHECK(lo == Catch::Approx(1.0));
    CHECK(hi == Catch::Approx(2.0));
  }

  SECTION("linear fallback")
  {
    REQUIRE(solveQuadratic(0.0, 2.0, -4.0, 1.0, roots) == 1);
    CHECK(roots[0] == Catch::Approx(2.0));
  }

  SECTION("no real roots")
  {
    CHECK(solveQuadratic(1.0, 0.0, 1.0, 1.0, roots) == 0);
  }

  SECTION("identically zero equation is flagged")
  {
    CHECK(solveQuadratic(0.0, 0.0, 0.0, 1.0, roots) == -1);
  }

  SECTION("cancellation-prone pair keeps both roots accurate")
  {
    // x^2 - 1e8 x + 1 = 0 has roots near 1e8 and 1e-8.
    REQUIRE(solveQuadratic(1.0, -1e8, 1.0, 1e8, roots) == 2);
    const double small = std::min(std::abs(roots[0]), std::abs(roots[1]));
    CHECK(small == Catch::Approx(1e-8).epsilon(1e-10));
  }
}

TEST_CASE("symmetric eigensolver recovers known spectra", "[core]")
{
  // Diagonal matrix: eigenvalues sort descending.
  {
    const double a[6] = {3.0, 0.0, 0.0, 1.0, 0.0, 2.0};
    double lam[3];
    Rotation vecs;
    detail::symmetricEigen3(a, lam, vecs);
    CHECK(lam[0] == Catch::Approx(3.0));
    CHECK(lam[1] == Catch::Approx(2.0));
    CHECK(lam[2] == Catch::Approx(1.0));
  }

  // Random symmetric matrices: A v = lambda v for each eigenpair.
  Rng rng(5);
  for(int trial = 0; trial < 50; ++trial)
  {
    double a[6];
    for(double& entry : a)
    {
      entry = rng.uniform(-2.0, 2.0);
    }
    double lam[3];
    Rotation vecs;
    detail::symmetricEigen3(a, lam, vecs);
    const double m[3][3] = {{a[0], a[1], a[2]}, {a[1], a[3], a[4]}, {a[2], a[4], a[5]}};
    for(int r = 0; r < 3; ++r)
    {
      const Vec3 v{vecs.m[3 * r + 0], vecs.m[3 * r + 1], vecs.m[3 * r + 2]};
      const Vec3 av{m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                    m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                    m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
      CAPTURE(trial, r);
      CHECK((av - v * lam[r]).norm() < 1e-9);
    }
    CHECK(lam[0] >= lam[1]);
    CHECK(lam[1] >= lam[2]);
  }
}
