// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gwn
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;

/// Error categories raised by library operations.
enum class ErrorCode
{
  InvalidInput,        ///< malformed arguments or files
  DegenerateGeometry,  ///< geometry the algorithms cannot interpret
  QuadratureFailure,   ///< adaptive refinement hit its depth cap
  Unresolved           ///< retries exhausted without a consistent answer
};

/// Exception type carrying an ErrorCode alongside the message.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), m_code(code) { }

  ErrorCode code() const { return m_code; }

private:
  ErrorCode m_code;
};

/*!
 * \brief 2D vector / point over doubles.
 */
struct Vec2
{
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  /// z component of the 3D cross product of the embedded vectors.
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double squaredNorm() const { return x * x + y * y; }
  double norm() const { return std::sqrt(squaredNorm()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/*!
 * \brief 3D vector / point over doubles.
 */
struct Vec3
{
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const
  {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double squaredNorm() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(squaredNorm()); }
  Vec3 normalized() const
  {
    const double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{0.0, 0.0, 0.0};
  }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Homogeneous 3D point (weighted position, weight) for rational surfaces.
struct Vec4
{
  double x = 0.0, y = 0.0, z = 0.0, w = 0.0;

  Vec4 operator+(const Vec4& o) const { return {x + o.x, y + o.y, z + o.z, w + o.w}; }
  Vec4 operator-(const Vec4& o) const { return {x - o.x, y - o.y, z - o.z, w - o.w}; }
  Vec4 operator*(double s) const { return {x * s, y * s, z * s, w * s}; }

  Vec3 project() const { return {x / w, y / w, z / w}; }
  Vec3 xyz() const { return {x, y, z}; }
};

inline Vec4 lerp(const Vec4& a, const Vec4& b, double t) { return a * (1.0 - t) + b * t; }

/// Homogeneous 2D point (weighted position, weight) for rational trimming curves.
struct Vec3h
{
  double x = 0.0, y = 0.0, w = 0.0;

  Vec3h operator+(const Vec3h& o) const { return {x + o.x, y + o.y, w + o.w}; }
  Vec3h operator-(const Vec3h& o) const { return {x - o.x, y - o.y, w - o.w}; }
  Vec3h operator*(double s) const { return {x * s, y * s, w * s}; }

  Vec2 project() const { return {x / w, y / w}; }
};

inline Vec3h lerp(const Vec3h& a, const Vec3h& b, double t) { return a * (1.0 - t) + b * t; }

/*!
 * \brief Axis aligned bounding box in 2D, empty until a point is added.
 */
struct Box2
{
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  void addPoint(const Vec2& p)
  {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  void addBox(const Box2& b) { addPoint(b.lo); addPoint(b.hi); }
  bool contains(const Vec2& p) const
  {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Vec2 center() const { return (lo + hi) * 0.5; }
  double diagonal() const { return (hi - lo).norm(); }
  /// Grows the box symmetrically by a fraction of its diagonal.
  void inflate(double fraction)
  {
    const double d = 0.5 * fraction * diagonal();
    lo.x -= d; lo.y -= d; hi.x += d; hi.y += d;
  }
  /// Distance from p to the nearest point of the box (0 when inside).
  double distance(const Vec2& p) const
  {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::sqrt(dx * dx + dy * dy);
  }
  /// Distance from p to the farthest point of the box.
  double farDistance(const Vec2& p) const
  {
    const double dx = std::max(std::abs(p.x - lo.x), std::abs(p.x - hi.x));
    const double dy = std::max(std::abs(p.y - lo.y), std::abs(p.y - hi.y));
    return std::sqrt(dx * dx + dy * dy);
  }
};

/*!
 * \brief Axis aligned bounding box in 3D, empty until a point is added.
 */
struct Box3
{
  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
          std::numeric_limits<double>::lowest()};

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z; }
  void addPoint(const Vec3& p)
  {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }
  void addBox(const Box3& b) { addPoint(b.lo); addPoint(b.hi); }
  bool contains(const Vec3& p) const
  {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }
  Vec3 center() const { return (lo + hi) * 0.5; }
  double diagonal() const { return (hi - lo).norm(); }
  void inflate(double fraction)
  {
    const double d = 0.5 * fraction * diagonal();
    lo = lo - Vec3{d, d, d};
    hi = hi + Vec3{d, d, d};
  }
};

/*!
 * \brief Proper 3x3 rotation matrix, stored row major.
 */
struct Rotation
{
  double m[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Rotation identity() { return Rotation{}; }

  Vec3 apply(const Vec3& v) const
  {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Rotation transposed() const
  {
    Rotation r;
    r.m[0] = m[0]; r.m[1] = m[3]; r.m[2] = m[6];
    r.m[3] = m[1]; r.m[4] = m[4]; r.m[5] = m[7];
    r.m[6] = m[2]; r.m[7] = m[5]; r.m[8] = m[8];
    return r;
  }

  Rotation compose(const Rotation& rhs) const  // this * rhs
  {
    Rotation r;
    for(int i = 0; i < 3; ++i)
      for(int j = 0; j < 3; ++j)
      {
        double s = 0.0;
        for(int k = 0; k < 3; ++k) s += m[3 * i + k] * rhs.m[3 * k + j];
        r.m[3 * i + j] = s;
      }
    return r;
  }

  static Rotation fromAxisAngle(const Vec3& axisIn, double angle)
  {
    const Vec3 a = axisIn.normalized();
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Rotation r;
    r.m[0] = t * a.x * a.x + c;
    r.m[1] = t * a.x * a.y - s * a.z;
    r.m[2] = t * a.x * a.z + s * a.y;
    r.m[3] = t * a.x * a.y + s * a.z;
    r.m[4] = t * a.y * a.y + c;
    r.m[5] = t * a.y * a.z - s * a.x;
    r.m[6] = t * a.x * a.z - s * a.y;
    r.m[7] = t * a.y * a.z + s * a.x;
    r.m[8] = t * a.z * a.z + c;
    return r;
  }
};

namespace detail
{
/// Rodrigues rotation taking unit vector a to unit vector b, valid away from a = -b.
inline Rotation rotationBetween(const Vec3& a, const Vec3& b)
{
  const Vec3 v = a.cross(b);
  const double c = a.dot(b);
  const double k = 1.0 / (1.0 + c);
  Rotation r;
  r.m[0] = v.x * v.x * k + c;
  r.m[1] = v.x * v.y * k - v.z;
  r.m[2] = v.x * v.z * k + v.y;
  r.m[3] = v.y * v.x * k + v.z;
  r.m[4] = v.y * v.y * k + c;
  r.m[5] = v.y * v.z * k - v.x;
  r.m[6] = v.z * v.x * k - v.y;
  r.m[7] = v.z * v.y * k + v.x;
  r.m[8] = v.z * v.z * k + c;
  return r;
}
}  // namespace detail

/*!
 * \brief Builds the rotation that maps the unit direction \a dir onto +z.
 *
 * Stable for every direction; near -z it composes with a half turn about x
 * so the Rodrigues denominator stays well conditioned.
 */
inline Rotation rotationToZ(const Vec3& dir)
{
  const Vec3 d = dir.normalized();
  const Vec3 zhat{0.0, 0.0, 1.0};
  if(d.z > -0.9)
  {
    return detail::rotationBetween(d, zhat);
  }
  // First flip about the x axis, then rotate the flipped direction to +z.
  Rotation flip;
  flip.m[0] = 1; flip.m[4] = -1; flip.m[8] = -1;
  const Vec3 d2 = flip.apply(d);
  return detail::rotationBetween(d2, zhat).compose(flip);
}

/*!
 * \brief Oriented bounding box with orthonormal axes (rows of \a axes).
 */
struct Obb3
{
  Vec3 center;
  Rotation axes;  ///< row i is the i-th box axis in world coordinates
  Vec3 half;      ///< half extents along the three axes

  bool contains(const Vec3& p) const
  {
    const Vec3 local = axes.apply(p - center);
    return std::abs(local.x) <= half.x && std::abs(local.y) <= half.y &&
      std::abs(local.z) <= half.z;
  }

  /// Closest point of the box to p, in world coordinates.
  Vec3 closestPoint(const Vec3& p) const
  {
    Vec3 local = axes.apply(p - center);
    local.x = std::clamp(local.x, -half.x, half.x);
    local.y = std::clamp(local.y, -half.y, half.y);
    local.z = std::clamp(local.z, -half.z, half.z);
    return center + axes.transposed().apply(local);
  }

  void inflate(double fraction)
  {
    const double d = 0.5 * fraction * 2.0 * half.norm();
    half = half + Vec3{d, d, d};
  }
};

/*!
 * \brief Deterministic 64-bit generator (splitmix64) with uniform helpers.
 *
 * Used wherever the algorithms need randomness (retry directions, query
 * sampling in tools) so runs reproduce bit for bit across platforms.
 */
struct Rng
{
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) { }

  std::uint64_t next()
  {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform direction on the unit sphere.
  Vec3 unitVector()
  {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }
};

/// Mixes two 64-bit values into one seed (splitmix finalizer over xor-fold).
inline std::uint64_t hashMix(std::uint64_t a, std::uint64_t b)
{
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/*!
 * \brief Solves a x^2 + b x + c = 0 robustly; returns the real root count.
 *
 * Linear and constant degenerations are handled by thresholding |a| (and
 * |b|) against \a scale, which callers set from the coefficient magnitudes.
 * The repeated root of a zero discriminant is reported once.
 */
inline int solveQuadratic(double a, double b, double c, double scale, double roots[2])
{
  const double tiny = 1e-14 * scale;
  if(std::abs(a) <= tiny)
  {
    if(std::abs(b) <= tiny)
    {
      return std::abs(c) <= tiny ? -1 : 0;  // -1 flags the identically-zero case
    }
    roots[0] = -c / b;
    return 1;
  }
  const double disc = b * b - 4.0 * a * c;
  if(disc < 0.0)
  {
    return 0;
  }
  if(disc == 0.0)
  {
    roots[0] = -b / (2.0 * a);
    return 1;
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  roots[0] = q / a;
  roots[1] = (q != 0.0) ? c / q : -b / a - roots[0];
  return 2;
}

namespace detail
{
/*!
 * \brief Eigen decomposition of a symmetric 3x3 matrix by cyclic Jacobi sweeps.
 *
 * Deterministic: fixed sweep order, convergence on the off diagonal norm.
 * Eigenvalues come out sorted descending; eigenvectors are the rows of the
 * returned rotation with a fixed sign convention (largest component positive)
 * and a right handed third axis.
 */
inline void symmetricEigen3(const double a[6], double eigenvalues[3], Rotation& eigenvectors)
{
  // a packs the symmetric matrix as [xx, xy, xz, yy, yz, zz].
  double m[3][3] = {{a[0], a[1], a[2]}, {a[1], a[3], a[4]}, {a[2], a[4], a[5]}};
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double normScale = std::max({std::abs(a[0]), std::abs(a[3]), std::abs(a[5]), 1e-300});

  for(int sweep = 0; sweep < 64; ++sweep)
  {
    const double off =
      std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
    if(off < 1e-15 * normScale)
    {
      break;
    }
    for(int p = 0; p < 2; ++p)
    {
      for(int q = p + 1; q < 3; ++q)
      {
        if(std::abs(m[p][q]) < 1e-300)
        {
          continue;
        }
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = std::copysign(1.0, theta) /
          (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for(int k = 0; k < 3; ++k)
        {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = cs * mkp - sn * mkq;
          m[k][q] = sn * mkp + cs * mkq;
        }
        for(int k = 0; k < 3; ++k)
        {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = cs * mpk - sn * mqk;
          m[q][k] = sn * mpk + cs * mqk;
        }
        for(int k = 0; k < 3; ++k)
        {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = cs * vkp - sn * vkq;
          v[k][q] = sn * vkp + cs * vkq;
        }
      }
    }
  }

  int order[3] = {0, 1, 2};
  double lam[3] = {m[0][0], m[1][1], m[2][2]};
  std::sort(order, order + 3, [&](int i, int j) { return lam[i] > lam[j]; });

  Vec3 rows[3];
  for(int r = 0; r < 3; ++r)
  {
    const int c = order[r];
    eigenvalues[r] = lam[c];
    rows[r] = Vec3{v[0][c], v[1][c], v[2][c]}.normalized();
    const double ax = std::abs(rows[r].x), ay = std::abs(rows[r].y), az = std::abs(rows[r].z);
    const double big = (ax >= ay && ax >= az) ? rows[r].x : (ay >= az ? rows[r].y : rows[r].z);
    if(big < 0.0)
    {
      rows[r] = -rows[r];
    }
  }
  rows[2] = rows[0].cross(rows[1]);

  for(int r = 0; r < 3; ++r)
  {
    eigenvectors.m[3 * r + 0] = rows[r].x;
    eigenvectors.m[3 * r + 1] = rows[r].y;
    eigenvectors.m[3 * r + 2] = rows[r].z;
  }
}
}  // namespace detail

}  // namespace gwn
