// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/patch.hpp"

#include <array>
#include <string>
#include <vector>

namespace gwn
{
namespace shapes
{
namespace detail
{
/// Dense polynomial in two variables, degree capped at 8 per variable.
struct Poly2
{
  double c[9][9] = {};

  static Poly2 constant(double v)
  {
    Poly2 p;
    p.c[0][0] = v;
    return p;
  }

  Poly2 operator+(const Poly2& o) const
  {
    Poly2 r;
    for(int i = 0; i < 9; ++i)
      for(int j = 0; j < 9; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
    return r;
  }

  Poly2 operator-(const Poly2& o) const
  {
    Poly2 r;
    for(int i = 0; i < 9; ++i)
      for(int j = 0; j < 9; ++j) r.c[i][j] = c[i][j] - o.c[i][j];
    return r;
  }

  Poly2 operator*(double s) const
  {
    Poly2 r;
    for(int i = 0; i < 9; ++i)
      for(int j = 0; j < 9; ++j) r.c[i][j] = c[i][j] * s;
    return r;
  }

  Poly2 operator*(const Poly2& o) const
  {
    Poly2 r;
    for(int i = 0; i < 9; ++i)
      for(int j = 0; j < 9; ++j)
      {
        if(c[i][j] == 0.0)
        {
          continue;
        }
        for(int k = 0; i + k < 9; ++k)
          for(int l = 0; j + l < 9; ++l) r.c[i + k][j + l] += c[i][j] * o.c[k][l];
      }
    return r;
  }
};

inline double binomial(int n, int k)
{
  double r = 1.0;
  for(int i = 1; i <= k; ++i)
  {
    r = r * (n - k + i) / i;
  }
  return r;
}

/// Bernstein coefficients (degree 4 x 4 over [0,1]^2) of a monomial poly.
inline std::array<std::array<double, 5>, 5> toBernstein4(const Poly2& p)
{
  std::array<std::array<double, 5>, 5> b{};
  for(int k = 0; k <= 4; ++k)
  {
    for(int l = 0; l <= 4; ++l)
    {
      double sum = 0.0;
      for(int i = 0; i <= k; ++i)
      {
        for(int j = 0; j <= l; ++j)
        {
          sum += p.c[i][j] * binomial(k, i) * binomial(l, j) /
            (binomial(4, i) * binomial(4, j));
        }
      }
      b[k][l] = sum;
    }
  }
  return b;
}

/*!
 * \brief Homogeneous biquartic coordinates of one sixth of the unit sphere.
 *
 * The face is the image of [0,1]^2 under a stereographic style rational map
 * built so the four boundary curves are exact great circle arcs in the
 * planes x = +-z and y = +-z, with corners at (+-1, +-1, 1)/sqrt(3). Six
 * rotated copies therefore tile the sphere watertight. The denominator W is
 * a sum of squares, so it never vanishes and all weights stay positive.
 */
inline void sphereFaceBernstein(std::array<std::array<double, 5>, 5>& X,
                                std::array<std::array<double, 5>, 5>& Y,
                                std::array<std::array<double, 5>, 5>& Z,
                                std::array<std::array<double, 5>, 5>& W)
{
  const double lambda = 0.5 * (std::sqrt(3.0) - 1.0);
  const double mu = std::sqrt(2.0) - 1.0;
  const double nu = 1.0 - mu / lambda;
  const double L = lambda * (1.0 + nu);

  Poly2 s, t;
  s.c[0][0] = -1.0;
  s.c[1][0] = 2.0;  // s = 2u - 1
  t.c[0][0] = -1.0;
  t.c[0][1] = 2.0;  // t = 2v - 1

  const Poly2 s2 = s * s, t2 = t * t;
  const Poly2 reA = s * mu + (s * t2) * (nu * L);
  const Poly2 imA = t * mu + (s2 * t) * (nu * L);
  const Poly2 B = Poly2::constant(1.0) + (s2 * t2) * (nu * nu);
  const Poly2 B2 = B * B;
  const Poly2 AA = reA * reA + imA * imA;

  X = toBernstein4((B * reA) * 2.0);
  Y = toBernstein4((B * imA) * 2.0);
  Z = toBernstein4(B2 - AA);
  W = toBernstein4(B2 + AA);
}
}  // namespace detail

/*!
 * \brief Sphere as six watertight biquartic rational patches.
 *
 * Patches share exact boundary arcs, carry positive weights and are
 * oriented outward. Ids run 0 to 5; names record the face axis.
 */
inline std::vector<TrimmedPatch> sixPatchSphere(const Vec3& center, double radius)
{
  std::array<std::array<double, 5>, 5> X, Y, Z, W;
  detail::sphereFaceBernstein(X, Y, Z, W);

  struct Face
  {
    const char* name;
    Rotation rot;
  };
  const auto rotationRows = [](Vec3 r0, Vec3 r1, Vec3 r2) {
    Rotation r;
    r.m[0] = r0.x; r.m[1] = r0.y; r.m[2] = r0.z;
    r.m[3] = r1.x; r.m[4] = r1.y; r.m[5] = r1.z;
    r.m[6] = r2.x; r.m[7] = r2.y; r.m[8] = r2.z;
    return r;
  };
  const std::array<Face, 6> faces = {{
    {"pz", rotationRows({1, 0, 0}, {0, 1, 0}, {0, 0, 1})},
    {"nz", rotationRows({1, 0, 0}, {0, -1, 0}, {0, 0, -1})},
    {"px", rotationRows({0, 0, 1}, {0, 1, 0}, {-1, 0, 0})},
    {"nx", rotationRows({0, 0, -1}, {0, 1, 0}, {1, 0, 0})},
    {"py", rotationRows({1, 0, 0}, {0, 0, 1}, {0, -1, 0})},
    {"ny", rotationRows({1, 0, 0}, {0, 0, -1}, {0, 1, 0})},
  }};

  const std::vector<double> knots = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  std::vector<TrimmedPatch> patches;
  patches.reserve(6);
  for(int f = 0; f < 6; ++f)
  {
    std::vector<Vec4> ctrl(25);
    for(int i = 0; i <= 4; ++i)
    {
      for(int j = 0; j <= 4; ++j)
      {
        const Vec3 unitPos{X[i][j], Y[i][j], Z[i][j]};  // weighted by W[i][j]
        const double w = W[i][j];
        const Vec3 placed = faces[f].rot.apply(unitPos) * radius + center * w;
        ctrl[i * 5 + j] = {placed.x, placed.y, placed.z, w};
      }
    }
    TrimmedPatch tp;
    tp.surface = NurbsPatch(4, 4, knots, knots, std::move(ctrl));
    tp.id = f;
    tp.name = std::string("sphere-") + faces[f].name;
    patches.push_back(std::move(tp));
  }
  return patches;
}

/*!
 * \brief Torus as four watertight biquadratic rational patches.
 *
 * Each patch sweeps a quarter of the major circle (u) against the full
 * tube circle (v); u boundaries are exact shared circles. Orientation is
 * outward. \a majorRadius is the center circle radius, \a minorRadius the
 * tube radius.
 */
inline std::vector<TrimmedPatch> fourPatchTorus(const Vec3& center, double majorRadius,
                                                double minorRadius)
{
  const double s = std::sqrt(0.5);
  const double R = majorRadius, r = minorRadius;

  // Tube profile: full circle of radius r about (R, 0) in the (radial, z)
  // plane, nine homogeneous controls (radial, z, weight), weighted entries
  // premultiplied.
  struct Profile
  {
    double rad, z, w;
  };
  const std::array<Profile, 9> profile = {{{R + r, 0, 1},
                                           {(R + r) * s, r * s, s},
                                           {R, r, 1},
                                           {(R - r) * s, r * s, s},
                                           {R - r, 0, 1},
                                           {(R - r) * s, -r * s, s},
                                           {R, -r, 1},
                                           {(R + r) * s, -r * s, s},
                                           {R + r, 0, 1}}};
  const std::vector<double> knotsV = {0,    0,    0,    0.25, 0.25, 0.5,
                                      0.5,  0.75, 0.75, 1,    1,    1};
  const std::vector<double> knotsU = {0, 0, 0, 1, 1, 1};

  std::vector<TrimmedPatch> patches;
  patches.reserve(4);
  for(int k = 0; k < 4; ++k)
  {
    const double a0 = 0.5 * pi * k;
    const double a1 = a0 + 0.25 * pi;
    const double a2 = a0 + 0.5 * pi;
    // Unit major arc controls (x, y, weight), weighted entries premultiplied.
    const std::array<std::array<double, 3>, 3> arc = {{
      {std::cos(a0), std::sin(a0), 1.0},
      {std::sqrt(2.0) * std::cos(a1) * s, std::sqrt(2.0) * std::sin(a1) * s, s},
      {std::cos(a2), std::sin(a2), 1.0},
    }};
    std::vector<Vec4> ctrl(27);
    for(int i = 0; i < 3; ++i)
    {
      for(int j = 0; j < 9; ++j)
      {
        const double w = arc[i][2] * profile[j].w;
        // arc holds weighted cos/sin; profile holds weighted radial and z.
        const double x = arc[i][0] * profile[j].rad;
        const double y = arc[i][1] * profile[j].rad;
        const double z = arc[i][2] * profile[j].z;
        ctrl[i * 9 + j] = {x + center.x * w, y + center.y * w, z + center.z * w, w};
      }
    }
    TrimmedPatch tp;
    tp.surface = NurbsPatch(2, 2, knotsU, knotsV, std::move(ctrl));
    tp.id = k;
    tp.name = "torus-q" + std::to_string(k);
    patches.push_back(std::move(tp));
  }
  return patches;
}

/*!
 * \brief Axis aligned box as six outward bilinear patches.
 */
inline std::vector<TrimmedPatch> boxModel(const Vec3& lo, const Vec3& hi)
{
  const std::vector<double> knots = {0, 0, 1, 1};
  struct FaceSpec
  {
    const char* name;
    Vec3 origin, du, dv;  // corner plus the two edge vectors, du x dv outward
  };
  const Vec3 ex{hi.x - lo.x, 0, 0}, ey{0, hi.y - lo.y, 0}, ez{0, 0, hi.z - lo.z};
  const std::array<FaceSpec, 6> faceSpecs = {{
    {"box-pz", {lo.x, lo.y, hi.z}, ex, ey},
    {"box-nz", {lo.x, lo.y, lo.z}, ey, ex},
    {"box-px", {hi.x, lo.y, lo.z}, ey, ez},
    {"box-nx", {lo.x, lo.y, lo.z}, ez, ey},
    {"box-py", {lo.x, hi.y, lo.z}, ez, ex},
    {"box-ny", {lo.x, lo.y, lo.z}, ex, ez},
  }};
  std::vector<TrimmedPatch> patches;
  patches.reserve(6);
  for(int f = 0; f < 6; ++f)
  {
    const FaceSpec& fs = faceSpecs[f];
    std::vector<Vec4> ctrl(4);
    for(int i = 0; i < 2; ++i)
    {
      for(int j = 0; j < 2; ++j)
      {
        const Vec3 p = fs.origin + fs.du * static_cast<double>(i) + fs.dv * static_cast<double>(j);
        ctrl[i * 2 + j] = {p.x, p.y, p.z, 1.0};
      }
    }
    TrimmedPatch tp;
    tp.surface = NurbsPatch(1, 1, knots, knots, std::move(ctrl));
    tp.id = f;
    tp.name = faceSpecs[f].name;
    patches.push_back(std::move(tp));
  }
  return patches;
}

}  // namespace shapes
}  // namespace gwn
