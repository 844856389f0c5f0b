// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/curve2.hpp"
#include "gwn/knots.hpp"
#include "gwn/quadrature.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gwn
{

/// Line through \a origin with unit direction \a dir.
struct Line3
{
  Vec3 origin;
  Vec3 dir;
};

/*!
 * \brief One rational Bezier piece of a patch with its global parameter
 *        rectangle [u0, u1] x [v0, v1].
 *
 * Control points are homogeneous; index layout is i * (q + 1) + j with i
 * along u and j along v.
 */
struct BezierPatch3
{
  int p = 1, q = 1;
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
  std::vector<Vec4> ctrl;

  const Vec4& at(int i, int j) const { return ctrl[i * (q + 1) + j]; }
  Vec4& at(int i, int j) { return ctrl[i * (q + 1) + j]; }

  Vec3 corner(int iu, int jv) const
  {
    return at(iu ? p : 0, jv ? q : 0).project();
  }

  Box3 controlBox() const
  {
    Box3 box;
    for(const Vec4& c : ctrl)
    {
      box.addPoint(c.project());
    }
    return box;
  }

  /// Splits at the u midpoint (de Casteljau on every control column).
  std::pair<BezierPatch3, BezierPatch3> splitU() const
  {
    BezierPatch3 left = *this, right = *this;
    const double mid = 0.5 * (u0 + u1);
    left.u1 = mid;
    right.u0 = mid;
    std::vector<Vec4> work(p + 1);
    for(int j = 0; j <= q; ++j)
    {
      for(int i = 0; i <= p; ++i)
      {
        work[i] = at(i, j);
      }
      left.at(0, j) = work[0];
      right.at(p, j) = work[p];
      for(int step = 1; step <= p; ++step)
      {
        for(int i = 0; i <= p - step; ++i)
        {
          work[i] = lerp(work[i], work[i + 1], 0.5);
        }
        left.at(step, j) = work[0];
        right.at(p - step, j) = work[p - step];
      }
    }
    return {std::move(left), std::move(right)};
  }

  /// Splits at the v midpoint.
  std::pair<BezierPatch3, BezierPatch3> splitV() const
  {
    BezierPatch3 left = *this, right = *this;
    const double mid = 0.5 * (v0 + v1);
    left.v1 = mid;
    right.v0 = mid;
    std::vector<Vec4> work(q + 1);
    for(int i = 0; i <= p; ++i)
    {
      for(int j = 0; j <= q; ++j)
      {
        work[j] = at(i, j);
      }
      left.at(i, 0) = work[0];
      right.at(i, q) = work[q];
      for(int step = 1; step <= q; ++step)
      {
        for(int j = 0; j <= q - step; ++j)
        {
          work[j] = lerp(work[j], work[j + 1], 0.5);
        }
        left.at(i, step) = work[0];
        right.at(i, q - step) = work[q - step];
      }
    }
    return {std::move(left), std::move(right)};
  }

  /// Rigid transform of the Euclidean geometry, applied homogeneously.
  BezierPatch3 transformed(const Rotation& r, const Vec3& translate) const
  {
    BezierPatch3 out = *this;
    for(Vec4& c : out.ctrl)
    {
      const Vec3 rotated = r.apply(c.xyz()) + translate * c.w;
      c = {rotated.x, rotated.y, rotated.z, c.w};
    }
    return out;
  }
};

/*!
 * \brief Tensor product rational B-spline surface in 3D.
 *
 * Homogeneous control grid over clamped knot vectors in u and v. Index
 * layout is i * controlCountV() + j with i along u.
 *
 * Evaluation accepts parameters slightly outside the domain, where it
 * returns the polynomial extension of the boundary spans; trimming circles
 * introduced near a domain edge rely on this.
 */
class NurbsPatch
{
public:
  NurbsPatch() = default;

  NurbsPatch(int degreeU, int degreeV, std::vector<double> knotsU, std::vector<double> knotsV,
             std::vector<Vec4> controls)
    : m_degU(degreeU)
    , m_degV(degreeV)
    , m_knotsU(std::move(knotsU))
    , m_knotsV(std::move(knotsV))
    , m_ctrl(std::move(controls))
  {
    knots::validate(m_knotsU, m_degU, "surface knots (u)");
    knots::validate(m_knotsV, m_degV, "surface knots (v)");
    m_nu = knots::controlCount(m_knotsU, m_degU);
    m_nv = knots::controlCount(m_knotsV, m_degV);
    if(m_nu * m_nv != static_cast<int>(m_ctrl.size()))
    {
      throw Error(ErrorCode::InvalidInput, "surface: control count does not match knots");
    }
    for(const Vec4& c : m_ctrl)
    {
      if(!(c.w > 0.0))
      {
        throw Error(ErrorCode::InvalidInput, "surface: weights must be positive");
      }
    }
  }

  static NurbsPatch fromPoints(int degreeU, int degreeV, std::vector<double> knotsU,
                               std::vector<double> knotsV, const std::vector<Vec3>& points,
                               const std::vector<double>& weights)
  {
    std::vector<Vec4> ctrl(points.size());
    for(std::size_t i = 0; i < points.size(); ++i)
    {
      const double w = weights.empty() ? 1.0 : weights[i];
      ctrl[i] = {points[i].x * w, points[i].y * w, points[i].z * w, w};
    }
    return NurbsPatch(degreeU, degreeV, std::move(knotsU), std::move(knotsV), std::move(ctrl));
  }

  int degreeU() const { return m_degU; }
  int degreeV() const { return m_degV; }
  const std::vector<double>& knotsU() const { return m_knotsU; }
  const std::vector<double>& knotsV() const { return m_knotsV; }
  int controlCountU() const { return m_nu; }
  int controlCountV() const { return m_nv; }
  const std::vector<Vec4>& controls() const { return m_ctrl; }
  const Vec4& at(int i, int j) const { return m_ctrl[i * m_nv + j]; }
  Vec4& at(int i, int j) { return m_ctrl[i * m_nv + j]; }
  bool empty() const { return m_ctrl.empty(); }

  double domainMinU() const { return knots::domainMin(m_knotsU, m_degU); }
  double domainMaxU() const { return knots::domainMax(m_knotsU, m_degU); }
  double domainMinV() const { return knots::domainMin(m_knotsV, m_degV); }
  double domainMaxV() const { return knots::domainMax(m_knotsV, m_degV); }
  Box2 domainBox() const
  {
    Box2 box;
    box.addPoint({domainMinU(), domainMinV()});
    box.addPoint({domainMaxU(), domainMaxV()});
    return box;
  }

  /// Surface point at (u, v).
  Vec3 evaluate(double u, double v) const
  {
    const int su = knots::findSpan(m_knotsU, m_degU, u);
    const int sv = knots::findSpan(m_knotsV, m_degV, v);
    double Nu[16], Nv[16];
    knots::basisFunctions(m_knotsU, m_degU, su, u, Nu);
    knots::basisFunctions(m_knotsV, m_degV, sv, v, Nv);
    Vec4 h{0, 0, 0, 0};
    for(int i = 0; i <= m_degU; ++i)
    {
      for(int j = 0; j <= m_degV; ++j)
      {
        h = h + at(su - m_degU + i, sv - m_degV + j) * (Nu[i] * Nv[j]);
      }
    }
    return h.project();
  }

  /// Surface point and first partials at (u, v).
  void evaluateDerivs(double u, double v, Vec3& S, Vec3& Su, Vec3& Sv) const
  {
    const int su = knots::findSpan(m_knotsU, m_degU, u);
    const int sv = knots::findSpan(m_knotsV, m_degV, v);
    double Nu[16], dNu[16], Nv[16], dNv[16];
    knots::basisFunctionsWithDerivative(m_knotsU, m_degU, su, u, Nu, dNu);
    knots::basisFunctionsWithDerivative(m_knotsV, m_degV, sv, v, Nv, dNv);
    Vec4 h{0, 0, 0, 0}, hu{0, 0, 0, 0}, hv{0, 0, 0, 0};
    for(int i = 0; i <= m_degU; ++i)
    {
      for(int j = 0; j <= m_degV; ++j)
      {
        const Vec4& c = at(su - m_degU + i, sv - m_degV + j);
        h = h + c * (Nu[i] * Nv[j]);
        hu = hu + c * (dNu[i] * Nv[j]);
        hv = hv + c * (Nu[i] * dNv[j]);
      }
    }
    S = h.project();
    Su = (hu.xyz() - S * hu.w) / h.w;
    Sv = (hv.xyz() - S * hv.w) / h.w;
  }

  /// Axis aligned box of the Euclidean control net (contains the surface).
  Box3 aabb() const
  {
    Box3 box;
    for(const Vec4& c : m_ctrl)
    {
      box.addPoint(c.project());
    }
    return box;
  }

  /// Oriented box from a principal component analysis of the control net.
  Obb3 obb() const
  {
    Vec3 mean{0, 0, 0};
    for(const Vec4& c : m_ctrl)
    {
      mean += c.project();
    }
    mean = mean / static_cast<double>(m_ctrl.size());
    double cov[6] = {0, 0, 0, 0, 0, 0};
    for(const Vec4& c : m_ctrl)
    {
      const Vec3 d = c.project() - mean;
      cov[0] += d.x * d.x;
      cov[1] += d.x * d.y;
      cov[2] += d.x * d.z;
      cov[3] += d.y * d.y;
      cov[4] += d.y * d.z;
      cov[5] += d.z * d.z;
    }
    double eigenvalues[3];
    Obb3 box;
    detail::symmetricEigen3(cov, eigenvalues, box.axes);
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
            std::numeric_limits<double>::lowest()};
    for(const Vec4& c : m_ctrl)
    {
      const Vec3 local = box.axes.apply(c.project() - mean);
      lo.x = std::min(lo.x, local.x); lo.y = std::min(lo.y, local.y); lo.z = std::min(lo.z, local.z);
      hi.x = std::max(hi.x, local.x); hi.y = std::max(hi.y, local.y); hi.z = std::max(hi.z, local.z);
    }
    const Vec3 localCenter = (lo + hi) * 0.5;
    box.center = mean + box.axes.transposed().apply(localCenter);
    box.half = (hi - lo) * 0.5;
    return box;
  }

  /// Inserts the knot u in the u direction up to multiplicity degreeU.
  void insertKnotU(double u, int times)
  {
    const int have = knots::multiplicity(m_knotsU, u);
    const int target = std::min(times + have, m_degU);
    for(int rep = have; rep < target; ++rep)
    {
      const int k = knots::findSpan(m_knotsU, m_degU, u);
      std::vector<Vec4> next((m_nu + 1) * m_nv);
      for(int i = 0; i <= m_nu; ++i)
      {
        for(int j = 0; j < m_nv; ++j)
        {
          if(i <= k - m_degU)
          {
            next[i * m_nv + j] = at(i, j);
          }
          else if(i > k)
          {
            next[i * m_nv + j] = at(i - 1, j);
          }
          else
          {
            const double denom = m_knotsU[i + m_degU] - m_knotsU[i];
            const double alpha = denom > 0.0 ? (u - m_knotsU[i]) / denom : 0.0;
            next[i * m_nv + j] = lerp(at(i - 1, j), at(i, j), alpha);
          }
        }
      }
      m_ctrl = std::move(next);
      m_knotsU.insert(m_knotsU.begin() + (k + 1), u);
      ++m_nu;
    }
  }

  void insertKnotV(double v, int times)
  {
    NurbsPatch t = transposed();
    t.insertKnotU(v, times);
    *this = t.transposed();
  }

  /// Swaps the roles of u and v (reverses the normal orientation).
  NurbsPatch transposed() const
  {
    NurbsPatch out;
    out.m_degU = m_degV;
    out.m_degV = m_degU;
    out.m_knotsU = m_knotsV;
    out.m_knotsV = m_knotsU;
    out.m_nu = m_nv;
    out.m_nv = m_nu;
    out.m_ctrl.resize(m_ctrl.size());
    for(int i = 0; i < m_nu; ++i)
    {
      for(int j = 0; j < m_nv; ++j)
      {
        out.m_ctrl[j * m_nu + i] = at(i, j);
      }
    }
    return out;
  }

  /// Restriction to [u0, u1] x full v range; trace and parameters unchanged.
  NurbsPatch restrictedU(double u0, double u1) const
  {
    if(!(u0 < u1))
    {
      throw Error(ErrorCode::InvalidInput, "restrictedU: bad parameter range");
    }
    u0 = std::max(u0, domainMinU());
    u1 = std::min(u1, domainMaxU());
    NurbsPatch work = *this;
    if(u0 > domainMinU())
    {
      work.insertKnotU(u0, m_degU);
    }
    if(u1 < domainMaxU())
    {
      work.insertKnotU(u1, m_degU);
    }
    const auto firstIndexOf = [&work](double u) {
      int i = 0;
      while(work.m_knotsU[i] != u)
      {
        ++i;
      }
      return i;
    };
    const int first = firstIndexOf(u0) + knots::multiplicity(work.m_knotsU, u0) - m_degU - 1;
    const int last = firstIndexOf(u1) + knots::multiplicity(work.m_knotsU, u1) - m_degU - 1;
    NurbsPatch out;
    out.m_degU = m_degU;
    out.m_degV = m_degV;
    out.m_knotsV = m_knotsV;
    out.m_nu = last - first + 1;
    out.m_nv = m_nv;
    out.m_knotsU.assign(m_degU + 1, u0);
    for(const double u : work.m_knotsU)
    {
      if(u > u0 && u < u1)
      {
        out.m_knotsU.push_back(u);
      }
    }
    out.m_knotsU.insert(out.m_knotsU.end(), m_degU + 1, u1);
    out.m_ctrl.assign(work.m_ctrl.begin() + first * m_nv,
                      work.m_ctrl.begin() + (last + 1) * m_nv);
    return out;
  }

  NurbsPatch restrictedV(double v0, double v1) const
  {
    return transposed().restrictedU(v0, v1).transposed();
  }

  /// Restriction to a parameter rectangle.
  NurbsPatch restricted(double u0, double u1, double v0, double v1) const
  {
    return restrictedU(u0, u1).restrictedV(v0, v1);
  }

  /// Splits into two patches sharing the iso line u = t.
  std::pair<NurbsPatch, NurbsPatch> splitU(double t) const
  {
    return {restrictedU(domainMinU(), t), restrictedU(t, domainMaxU())};
  }

  std::pair<NurbsPatch, NurbsPatch> splitV(double t) const
  {
    return {restrictedV(domainMinV(), t), restrictedV(t, domainMaxV())};
  }

  /*!
   * \brief Enlarges the parameter domain by \a ru (u) and \a rv (v) on every
   *        side, extrapolating the boundary spans.
   *
   * Evaluation over the original domain is unchanged; the added strips carry
   * the polynomial extension of the boundary geometry.
   */
  NurbsPatch extendedDomain(double ru, double rv) const
  {
    NurbsPatch out = extendedU(ru);
    if(rv > 0.0)
    {
      out = out.transposed().extendedU(rv).transposed();
    }
    return out;
  }

  /*!
   * \brief Average surface normal S_u x S_v over the domain by per span
   *        Gauss quadrature, normalized.
   *
   * Returns false when the average nearly cancels (the direction would be
   * meaningless); callers should substitute another direction.
   */
  bool meanNormal(Vec3& direction) const
  {
    const std::vector<double> bu = knots::breakpoints(m_knotsU, m_degU);
    const std::vector<double> bv = knots::breakpoints(m_knotsV, m_degV);
    const GaussRule& ru = gaussRule(m_degU + 1);
    const GaussRule& rv = gaussRule(m_degV + 1);
    Vec3 sum{0, 0, 0};
    double magnitude = 0.0;
    for(std::size_t si = 0; si + 1 < bu.size(); ++si)
    {
      for(std::size_t sj = 0; sj + 1 < bv.size(); ++sj)
      {
        const double du = 0.5 * (bu[si + 1] - bu[si]);
        const double dv = 0.5 * (bv[sj + 1] - bv[sj]);
        for(std::size_t a = 0; a < ru.nodes.size(); ++a)
        {
          for(std::size_t b = 0; b < rv.nodes.size(); ++b)
          {
            const double u = bu[si] + du * (ru.nodes[a] + 1.0);
            const double v = bv[sj] + dv * (rv.nodes[b] + 1.0);
            Vec3 S, Su, Sv;
            evaluateDerivs(u, v, S, Su, Sv);
            const Vec3 n = Su.cross(Sv);
            const double w = ru.weights[a] * rv.weights[b] * du * dv;
            sum += n * w;
            magnitude += n.norm() * w;
          }
        }
      }
    }
    if(sum.norm() < 1e-6 * magnitude || magnitude == 0.0)
    {
      return false;
    }
    direction = sum.normalized();
    return true;
  }

  /// Rigid transform of the surface geometry.
  NurbsPatch transformed(const Rotation& r, const Vec3& translate) const
  {
    NurbsPatch out = *this;
    for(Vec4& c : out.m_ctrl)
    {
      const Vec3 rotated = r.apply(c.xyz()) + translate * c.w;
      c = {rotated.x, rotated.y, rotated.z, c.w};
    }
    return out;
  }

  /// Decomposes the patch into its rational Bezier pieces.
  std::vector<BezierPatch3> bezierGrid() const
  {
    NurbsPatch work = *this;
    for(const double u : knots::breakpoints(m_knotsU, m_degU))
    {
      if(u > domainMinU() && u < domainMaxU())
      {
        work.insertKnotU(u, m_degU);
      }
    }
    for(const double v : knots::breakpoints(m_knotsV, m_degV))
    {
      if(v > domainMinV() && v < domainMaxV())
      {
        work.insertKnotV(v, m_degV);
      }
    }
    const std::vector<double> bu = knots::breakpoints(m_knotsU, m_degU);
    const std::vector<double> bv = knots::breakpoints(m_knotsV, m_degV);
    std::vector<BezierPatch3> grid;
    grid.reserve((bu.size() - 1) * (bv.size() - 1));
    for(std::size_t si = 0; si + 1 < bu.size(); ++si)
    {
      for(std::size_t sj = 0; sj + 1 < bv.size(); ++sj)
      {
        BezierPatch3 piece;
        piece.p = m_degU;
        piece.q = m_degV;
        piece.u0 = bu[si];
        piece.u1 = bu[si + 1];
        piece.v0 = bv[sj];
        piece.v1 = bv[sj + 1];
        piece.ctrl.resize((m_degU + 1) * (m_degV + 1));
        for(int i = 0; i <= m_degU; ++i)
        {
          for(int j = 0; j <= m_degV; ++j)
          {
            piece.at(i, j) = work.at(si * m_degU + i, sj * m_degV + j);
          }
        }
        grid.push_back(std::move(piece));
      }
    }
    return grid;
  }

private:
  NurbsPatch extendedU(double r) const
  {
    if(r <= 0.0)
    {
      return *this;
    }
    NurbsPatch work = *this;
    // Left end: make the first span Bezier, extrapolate it, stretch the knots.
    {
      const std::vector<double> breaks = knots::breakpoints(work.m_knotsU, m_degU);
      if(breaks.size() > 2)
      {
        work.insertKnotU(breaks[1], m_degU);
      }
      const double span = breaks[1] - breaks[0];
      const double aLocal = -r / span;
      std::vector<Vec4> column(m_degU + 1);
      for(int j = 0; j < work.m_nv; ++j)
      {
        for(int i = 0; i <= m_degU; ++i)
        {
          column[i] = work.at(i, j);
        }
        const std::vector<Vec4> stretched = bezierRestrict(column, aLocal, 1.0);
        for(int i = 0; i <= m_degU; ++i)
        {
          work.at(i, j) = stretched[i];
        }
      }
      for(int i = 0; i <= m_degU; ++i)
      {
        work.m_knotsU[i] = breaks[0] - r;
      }
    }
    // Right end, same construction mirrored.
    {
      const std::vector<double> breaks = knots::breakpoints(work.m_knotsU, m_degU);
      const std::size_t m = breaks.size();
      if(m > 2)
      {
        work.insertKnotU(breaks[m - 2], m_degU);
      }
      const double span = breaks[m - 1] - breaks[m - 2];
      const double bLocal = 1.0 + r / span;
      std::vector<Vec4> column(m_degU + 1);
      const int base = work.m_nu - m_degU - 1;
      for(int j = 0; j < work.m_nv; ++j)
      {
        for(int i = 0; i <= m_degU; ++i)
        {
          column[i] = work.at(base + i, j);
        }
        const std::vector<Vec4> stretched = bezierRestrict(column, 0.0, bLocal);
        for(int i = 0; i <= m_degU; ++i)
        {
          work.at(base + i, j) = stretched[i];
        }
      }
      const std::size_t count = work.m_knotsU.size();
      for(int i = 0; i <= m_degU; ++i)
      {
        work.m_knotsU[count - 1 - i] = breaks[m - 1] + r;
      }
    }
    return work;
  }

  int m_degU = 1, m_degV = 1;
  std::vector<double> m_knotsU, m_knotsV;
  int m_nu = 0, m_nv = 0;
  std::vector<Vec4> m_ctrl;
};

/// One closed trimming loop, an ordered chain of parameter space curves.
struct TrimLoop
{
  std::vector<RationalCurve2> curves;
};

/*!
 * \brief A surface patch with its trimming loops.
 *
 * Loops are normalized so counterclockwise parameter orientation bounds the
 * visible region. A patch without explicit loops is untrimmed; callers
 * should attach the domain rectangle via ensureLoops().
 */
struct TrimmedPatch
{
  NurbsPatch surface;
  std::vector<TrimLoop> loops;
  int id = -1;
  std::string name;

  /// Attaches the counterclockwise domain rectangle when no loops exist.
  void ensureLoops()
  {
    if(loops.empty() && !surface.empty())
    {
      TrimLoop rect;
      rect.curves = rectangleLoop(surface.domainMinU(), surface.domainMaxU(),
                                  surface.domainMinV(), surface.domainMaxV());
      loops.push_back(std::move(rect));
    }
  }
};

/*!
 * \brief Position and model space tangent of a trimming curve traced on a
 *        surface, at curve parameter t.
 */
inline void traceBoundary(const NurbsPatch& surface, const RationalCurve2& curve, double t,
                          Vec3& position, Vec3& tangent)
{
  Vec2 uv, duv;
  curve.evaluateWithDerivative(t, uv, duv);
  Vec3 S, Su, Sv;
  surface.evaluateDerivs(uv.x, uv.y, S, Su, Sv);
  position = S;
  tangent = Su * duv.x + Sv * duv.y;
}

}  // namespace gwn
