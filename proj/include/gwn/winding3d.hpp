// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/intersect.hpp"
#include "gwn/patch.hpp"
#include "gwn/quadrature.hpp"
#include "gwn/winding2d.hpp"

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

namespace gwn
{

/// Tuning knobs for the winding number evaluation.
struct GwnConfig
{
  double epsQuad = 1e-6;        ///< absolute acceptance for adaptive boundary quadrature
  double epsLs = 1e-6;          ///< squared flatness tolerance for the bilinear proxy
  double diskRadiusPct = 1.0;   ///< disk radius, percent of the parameter box diagonal
  double coincidentDiskFactor = 0.1;  ///< shrink factor for boundary coincident disks
  double coincidentTol = 1e-10;       ///< on-surface threshold, relative to the model diagonal
  double dedupTol = 1e-6;       ///< parameter space intersection merge tolerance
  double tangentTol = 1e-3;     ///< |cos| below which a hit counts as tangent
  double cuspTolFactor = 1e-8;  ///< normal norm threshold factor for cusp detection
  int quadOrder = 15;           ///< Gauss Legendre order per boundary segment
  int fixedQuadOrder = 0;       ///< if positive, one rule of this order per curve, no refinement
  int maxQuadDepth = 45;        ///< bisection depth cap for the boundary quadrature
  int maxEdgeRecursion = 10;    ///< combined cap on disk nesting and tangent retries
  int maxIntersectDepth = 50;   ///< subdivision depth cap for intersection finding
  std::uint64_t rngSeed = 12345;  ///< base seed for retry directions
  bool enableCache = true;      ///< memoize boundary quadrature nodes per patch
};

/// Evaluation branch taken for one patch (or one recursive piece).
enum class GwnCase
{
  FarFieldZ,
  FarFieldX,
  FarFieldY,
  FarFieldRotated,
  NearField,
  EdgeDisk,
  EdgeTangentRotate,
  CoincidentSurface,
  CoincidentBoundary
};

inline const char* toString(GwnCase c)
{
  switch(c)
  {
  case GwnCase::FarFieldZ: return "far-z";
  case GwnCase::FarFieldX: return "far-x";
  case GwnCase::FarFieldY: return "far-y";
  case GwnCase::FarFieldRotated: return "far-rotated";
  case GwnCase::NearField: return "near";
  case GwnCase::EdgeDisk: return "edge-disk";
  case GwnCase::EdgeTangentRotate: return "edge-rotate";
  case GwnCase::CoincidentSurface: return "coincident-surface";
  case GwnCase::CoincidentBoundary: return "coincident-boundary";
  }
  return "unknown";
}

/// Tree of evaluation branches; children appear for recursive pieces.
struct GwnCaseNode
{
  GwnCase tag = GwnCase::NearField;
  std::vector<GwnCaseNode> children;
};

/// Outcome of a winding number evaluation.
struct GwnResult
{
  double value = 0.0;       ///< generalized winding number contribution
  double correction = 0.0;  ///< sum of applied half integer jumps
  bool coincident = false;  ///< query on (or numerically at) the surface
  std::uint64_t surfaceEvals = 0;  ///< surface evaluations spent on this query
  GwnCaseNode cases;        ///< branch taken, with recursive children
  Vec3 castDirection{0, 0, 1};  ///< line direction used by the boundary integral
};

/// Axis singling out the antiderivative form.
enum class FieldAxis
{
  X,
  Y,
  Z
};

/*!
 * \brief Antiderivative of the solid angle integrand for a coordinate axis.
 *
 * For the z form, curl F equals the z component of x / (4 pi |x|^3); the x
 * and y forms are the cyclic images. F is singular on its axis, so callers
 * arrange for the integration contour to stay away from it.
 */
inline Vec3 antiderivativeField(const Vec3& x, FieldAxis axis)
{
  const double rho = x.norm();
  switch(axis)
  {
  case FieldAxis::Z:
  {
    const double denom = four_pi * (x.x * x.x + x.y * x.y) * rho;
    return {x.y * x.z / denom, -x.x * x.z / denom, 0.0};
  }
  case FieldAxis::X:
  {
    const double denom = four_pi * (x.y * x.y + x.z * x.z) * rho;
    return {0.0, x.z * x.x / denom, -x.y * x.x / denom};
  }
  case FieldAxis::Y:
  default:
  {
    const double denom = four_pi * (x.z * x.z + x.x * x.x) * rho;
    return {-x.z * x.y / denom, 0.0, x.x * x.y / denom};
  }
  }
}

/// One precomputed quadrature node on a boundary curve, in model space.
struct QuadNode
{
  Vec3 position;
  Vec3 tangent;
  double weight;  ///< Gauss weight times half the segment length
};

/*!
 * \brief Memoized quadrature nodes, keyed by curve and dyadic segment.
 *
 * Nodes live in model space, so one cache serves every query against the
 * patch regardless of the line frame in use.
 */
class QuadratureCache
{
public:
  struct Key
  {
    std::uint32_t curve;
    std::uint32_t level;
    std::uint64_t index;
    bool operator==(const Key& o) const
    {
      return curve == o.curve && level == o.level && index == o.index;
    }
  };
  struct KeyHash
  {
    std::size_t operator()(const Key& k) const
    {
      return static_cast<std::size_t>(hashMix(hashMix(k.curve, k.level), k.index));
    }
  };

  const std::vector<QuadNode>* find(const Key& key) const
  {
    const auto it = m_segments.find(key);
    return it == m_segments.end() ? nullptr : &it->second;
  }

  const std::vector<QuadNode>& store(const Key& key, std::vector<QuadNode> nodes)
  {
    return m_segments.emplace(key, std::move(nodes)).first->second;
  }

  std::size_t size() const { return m_segments.size(); }

private:
  std::unordered_map<Key, std::vector<QuadNode>, KeyHash> m_segments;
};

namespace detail
{
struct LineFrame
{
  Vec3 origin;
  Rotation rot;
  FieldAxis axis;
};

/// Nodes for one dyadic segment of a curve, computed or fetched.
inline const std::vector<QuadNode>& segmentNodes(const NurbsPatch& surface,
                                                 const RationalCurve2& curve, int curveOrdinal,
                                                 QuadratureCache* cache, int order,
                                                 std::uint32_t level, std::uint64_t index,
                                                 std::vector<QuadNode>& scratch,
                                                 std::uint64_t& surfaceEvals)
{
  const QuadratureCache::Key key{static_cast<std::uint32_t>(curveOrdinal), level, index};
  if(cache != nullptr && curveOrdinal >= 0)
  {
    if(const std::vector<QuadNode>* hit = cache->find(key))
    {
      return *hit;
    }
  }
  const GaussRule& rule = gaussRule(order);
  const double width = (curve.domainMax() - curve.domainMin()) / std::ldexp(1.0, level);
  const double a = curve.domainMin() + width * static_cast<double>(index);
  std::vector<QuadNode> nodes(rule.nodes.size());
  for(std::size_t k = 0; k < rule.nodes.size(); ++k)
  {
    const double t = a + 0.5 * width * (rule.nodes[k] + 1.0);
    traceBoundary(surface, curve, t, nodes[k].position, nodes[k].tangent);
    nodes[k].weight = 0.5 * width * rule.weights[k];
    ++surfaceEvals;
  }
  if(cache != nullptr && curveOrdinal >= 0)
  {
    return cache->store(key, std::move(nodes));
  }
  scratch = std::move(nodes);
  return scratch;
}

inline double segmentIntegral(const std::vector<QuadNode>& nodes, const Vec3& q,
                              const LineFrame& frame)
{
  double sum = 0.0;
  for(const QuadNode& n : nodes)
  {
    const Vec3 x = frame.rot.apply(n.position - q);
    const Vec3 t = frame.rot.apply(n.tangent);
    sum += n.weight * antiderivativeField(x, frame.axis).dot(t);
  }
  return sum;
}
}  // namespace detail

/*!
 * \brief Adaptive line integral of the antiderivative field along one
 *        trimming curve traced on the surface.
 *
 * A segment estimate is accepted when splitting it changes the value by
 * less than epsQuad (absolute); otherwise both halves refine recursively.
 * Node positions and tangents are memoized per (curve, segment) when a
 * cache is supplied and curveOrdinal is nonnegative.
 */
inline double evaluateLineIntegral(const NurbsPatch& surface, const RationalCurve2& curve,
                                   const Vec3& q, const Rotation& rot, FieldAxis axis,
                                   const GwnConfig& cfg, QuadratureCache* cache, int curveOrdinal,
                                   std::uint64_t& surfaceEvals)
{
  const detail::LineFrame frame{q, rot, axis};

  if(cfg.fixedQuadOrder > 0)
  {
    std::vector<QuadNode> scratch;
    const std::vector<QuadNode>& nodes = detail::segmentNodes(
      surface, curve, curveOrdinal, cache, cfg.fixedQuadOrder, 0, 0, scratch, surfaceEvals);
    return detail::segmentIntegral(nodes, q, frame);
  }

  struct Helper
  {
    const NurbsPatch& surface;
    const RationalCurve2& curve;
    int ordinal;
    QuadratureCache* cache;
    const GwnConfig& cfg;
    const detail::LineFrame& frame;
    std::uint64_t& evals;

    double segment(std::uint32_t level, std::uint64_t index) const
    {
      std::vector<QuadNode> scratch;
      const std::vector<QuadNode>& nodes = detail::segmentNodes(
        surface, curve, ordinal, cache, cfg.quadOrder, level, index, scratch, evals);
      return detail::segmentIntegral(nodes, frame.origin, frame);
    }

    double refine(std::uint32_t level, std::uint64_t index, double value) const
    {
      if(static_cast<int>(level) >= cfg.maxQuadDepth)
      {
        throw Error(ErrorCode::QuadratureFailure,
                    "boundary quadrature did not converge within the depth cap");
      }
      const double left = segment(level + 1, 2 * index);
      const double right = segment(level + 1, 2 * index + 1);
      if(std::abs(value - (left + right)) < cfg.epsQuad)
      {
        return left + right;
      }
      return refine(level + 1, 2 * index, left) + refine(level + 1, 2 * index + 1, right);
    }
  };

  const Helper helper{surface, curve, curveOrdinal, cache, cfg, frame, surfaceEvals};
  return helper.refine(0, 0, helper.segment(0, 0));
}

/// Result of removing a parameter disk from a trimmed patch.
struct DiskExtraction
{
  TrimmedPatch inner;                ///< visible piece inside the disk
  std::vector<TrimLoop> outerLoops;  ///< replacement loops for the remaining patch
  bool innerVisible = false;
};

/*!
 * \brief Splits a trimmed patch into the visible piece inside a parameter
 *        disk and the remainder.
 *
 * The inner piece restricts the surface to the disk's parameter box so its
 * spatial bounds shrink accordingly. When the disk lies entirely in the
 * trimmed away region the extraction is a no op with innerVisible false.
 */
inline DiskExtraction extractParameterDisk(const NurbsPatch& surface,
                                           const std::vector<TrimLoop>& loops, const Vec2& center,
                                           double radius)
{
  DiskExtraction out;
  ClipResult clip = clipLoopsToCircle(loops, center, radius);
  out.outerLoops = std::move(clip.outer);
  out.innerVisible = clip.innerVisible;
  if(!clip.innerVisible)
  {
    return out;
  }
  const double u0 = std::max(surface.domainMinU(), center.x - radius);
  const double u1 = std::min(surface.domainMaxU(), center.x + radius);
  const double v0 = std::max(surface.domainMinV(), center.y - radius);
  const double v1 = std::min(surface.domainMaxV(), center.y + radius);
  if(!(u0 < u1) || !(v0 < v1))
  {
    out.innerVisible = false;
    out.outerLoops = loops;
    return out;
  }
  out.inner.surface = surface.restricted(u0, u1, v0, v1);
  out.inner.loops = std::move(clip.inner);
  return out;
}

/*!
 * \brief A trimmed patch preprocessed for repeated queries.
 *
 * Holds the domain extended surface, its Bezier pieces, inflated bounds,
 * the mean normal cast direction and the per patch quadrature cache.
 */
struct PreparedPatch
{
  TrimmedPatch patch;          ///< normalized loops, original surface
  NurbsPatch extendedSurface;  ///< domain extended by the disk radius
  std::vector<BezierPatch3> grid;  ///< Bezier pieces of the extended surface
  Box3 box;                    ///< inflated axis aligned bounds
  Obb3 obb;                    ///< inflated oriented bounds
  Vec3 meanDir{0, 0, 1};
  bool meanOk = false;
  double paramDiag = 0.0;
  double diskRadius = 0.0;
  double cuspTol = 0.0;
  std::shared_ptr<QuadratureCache> cache;
};

/// Preprocesses one trimmed patch for winding number queries.
inline PreparedPatch preparePatch(const TrimmedPatch& tp, const GwnConfig& cfg)
{
  PreparedPatch pp;
  pp.patch = tp;
  if(tp.surface.empty())
  {
    return pp;
  }
  pp.patch.ensureLoops();
  pp.paramDiag = tp.surface.domainBox().diagonal();
  pp.diskRadius = cfg.diskRadiusPct / 100.0 * pp.paramDiag;
  pp.extendedSurface = tp.surface.extendedDomain(pp.diskRadius, pp.diskRadius);
  pp.grid = pp.extendedSurface.bezierGrid();
  pp.box = pp.extendedSurface.aabb();
  pp.box.inflate(0.01);
  pp.obb = pp.extendedSurface.obb();
  pp.obb.inflate(0.01);
  pp.meanOk = tp.surface.meanNormal(pp.meanDir);
  const double modelScale = tp.surface.aabb().diagonal() / std::max(pp.paramDiag, 1e-300);
  pp.cuspTol = cfg.cuspTolFactor * modelScale * modelScale;
  if(cfg.enableCache)
  {
    pp.cache = std::make_shared<QuadratureCache>();
  }
  return pp;
}

namespace detail
{
/// Unit vector orthogonal to a unit vector, chosen deterministically.
inline Vec3 anyPerpendicular(const Vec3& n)
{
  const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
  Vec3 e{0, 0, 1};
  if(ax <= ay && ax <= az)
  {
    e = {1, 0, 0};
  }
  else if(ay <= az)
  {
    e = {0, 1, 0};
  }
  return (e - n * e.dot(n)).normalized();
}

inline double boundaryIntegral(const PreparedPatch& pp, const std::vector<TrimLoop>& loops,
                               bool cacheUsable, const Vec3& q, const Rotation& rot,
                               FieldAxis axis, const GwnConfig& cfg, std::uint64_t& surfaceEvals)
{
  double sum = 0.0;
  int ordinal = 0;
  QuadratureCache* cache = cacheUsable ? pp.cache.get() : nullptr;
  for(const TrimLoop& loop : loops)
  {
    for(const RationalCurve2& curve : loop.curves)
    {
      sum += evaluateLineIntegral(pp.extendedSurface, curve, q, rot, axis, cfg, cache,
                                  cacheUsable ? ordinal : -1, surfaceEvals);
      ++ordinal;
    }
  }
  return sum;
}

GwnResult patchGwnImpl(const PreparedPatch& pp, const Vec3& q, const GwnConfig& cfg,
                       double coincidentTolAbs, Rng& rng, int edgeDepth);

/*!
 * \brief Near field evaluation: cast a line, classify its intersections,
 *        apply half corrections and handle edge cases.
 */
inline GwnResult nearFieldGwn(const PreparedPatch& pp, const Vec3& q, const GwnConfig& cfg,
                              double coincidentTolAbs, Rng& rng, int edgeDepth,
                              const Vec3& castDir)
{
  GwnResult res;
  res.cases.tag = GwnCase::NearField;
  res.castDirection = castDir;

  const Line3 line{q, castDir};
  std::vector<IntersectionRecord> records;
  try
  {
    records = linePatchIntersections(pp.extendedSurface, pp.grid, line, cfg.epsLs, cfg.dedupTol,
                                     cfg.maxIntersectDepth);
  }
  catch(const Error& e)
  {
    if(e.code() != ErrorCode::DegenerateGeometry || edgeDepth >= cfg.maxEdgeRecursion)
    {
      throw;
    }
    // The cast line defeated the subdivision (grazing geometry); recast.
    GwnResult retry = nearFieldGwn(pp, q, cfg, coincidentTolAbs, rng, edgeDepth + 1,
                                   rng.unitVector());
    GwnResult out;
    out.value = retry.value;
    out.correction = retry.correction;
    out.coincident = retry.coincident;
    out.surfaceEvals = retry.surfaceEvals;
    out.castDirection = retry.castDirection;
    out.cases.tag = GwnCase::EdgeTangentRotate;
    out.cases.children.push_back(std::move(retry.cases));
    return out;
  }
  res.surfaceEvals += records.size();

  std::vector<TrimLoop> workLoops = pp.patch.loops;
  bool loopsModified = false;

  for(const IntersectionRecord& rec : records)
  {
    bool onCurve = false;
    const bool contains = trimContains(workLoops, rec.uv, &onCurve);

    if(std::abs(rec.z0) < coincidentTolAbs)
    {
      const bool nearCurve = onCurve || loopsEnterDisk(workLoops, rec.uv, pp.diskRadius);
      if(!contains && !nearCurve)
      {
        continue;  // coincident with trimmed away sheet only
      }
      if(nearCurve)
      {
        // On the surface at its boundary: remove a smaller disk, worth zero.
        const double r = cfg.coincidentDiskFactor * pp.diskRadius;
        DiskExtraction ext =
          extractParameterDisk(pp.extendedSurface, workLoops, rec.uv, r);
        workLoops = std::move(ext.outerLoops);
        loopsModified = true;
        res.coincident = true;
        res.cases.children.push_back({GwnCase::CoincidentBoundary, {}});
      }
      else
      {
        res.coincident = true;
        res.cases.children.push_back({GwnCase::CoincidentSurface, {}});
      }
      continue;
    }

    const bool nearCurve = onCurve || loopsEnterDisk(workLoops, rec.uv, pp.diskRadius);
    if(!contains && !nearCurve)
    {
      continue;  // hit lies in the invisible region
    }

    const bool isCusp = rec.normal.norm() <= pp.cuspTol;
    if(nearCurve || isCusp)
    {
      if(edgeDepth >= cfg.maxEdgeRecursion)
      {
        throw Error(ErrorCode::Unresolved,
                    "edge case recursion exhausted while isolating a boundary hit");
      }
      DiskExtraction ext =
        extractParameterDisk(pp.extendedSurface, workLoops, rec.uv, pp.diskRadius);
      workLoops = std::move(ext.outerLoops);
      loopsModified = true;
      GwnCaseNode node{GwnCase::EdgeDisk, {}};
      if(ext.innerVisible)
      {
        PreparedPatch inner = preparePatch(ext.inner, cfg);
        Rng childRng(rng.next());
        GwnResult childResult =
          patchGwnImpl(inner, q, cfg, coincidentTolAbs, childRng, edgeDepth + 1);
        res.value += childResult.value;
        res.correction += childResult.correction;
        res.coincident = res.coincident || childResult.coincident;
        res.surfaceEvals += childResult.surfaceEvals;
        node.children.push_back(std::move(childResult.cases));
      }
      res.cases.children.push_back(std::move(node));
      continue;
    }

    if(std::abs(rec.normal.normalized().dot(castDir)) < cfg.tangentTol)
    {
      if(edgeDepth >= cfg.maxEdgeRecursion)
      {
        throw Error(ErrorCode::Unresolved,
                    "tangent retries exhausted without a transversal cast line");
      }
      GwnResult retry =
        nearFieldGwn(pp, q, cfg, coincidentTolAbs, rng, edgeDepth + 1, rng.unitVector());
      GwnResult out;
      out.value = retry.value;
      out.correction = retry.correction;
      out.coincident = retry.coincident;
      out.surfaceEvals = res.surfaceEvals + retry.surfaceEvals;
      out.castDirection = retry.castDirection;
      out.cases.tag = GwnCase::EdgeTangentRotate;
      out.cases.children.push_back(std::move(retry.cases));
      return out;
    }

    // Transversal interior crossing: the antiderivative jumps by a half.
    res.correction += std::copysign(0.5, rec.normal.dot(castDir) * rec.z0);
  }

  const Rotation rot = rotationToZ(castDir);
  res.value += res.correction +
    boundaryIntegral(pp, workLoops, !loopsModified, q, rot, FieldAxis::Z, cfg, res.surfaceEvals);
  return res;
}

inline GwnResult patchGwnImpl(const PreparedPatch& pp, const Vec3& q, const GwnConfig& cfg,
                              double coincidentTolAbs, Rng& rng, int edgeDepth)
{
  if(pp.patch.surface.empty())
  {
    return {};
  }

  if(!pp.box.contains(q))
  {
    // A coordinate axis line through q misses the box whenever the query
    // projects outside the matching box slab; prefer z, then x, then y.
    GwnResult res;
    const Box3& b = pp.box;
    const Rotation identity = Rotation::identity();
    if(q.x < b.lo.x || q.x > b.hi.x || q.y < b.lo.y || q.y > b.hi.y)
    {
      res.cases.tag = GwnCase::FarFieldZ;
      res.castDirection = {0, 0, 1};
      res.value = boundaryIntegral(pp, pp.patch.loops, true, q, identity, FieldAxis::Z, cfg,
                                   res.surfaceEvals);
      return res;
    }
    if(q.y < b.lo.y || q.y > b.hi.y || q.z < b.lo.z || q.z > b.hi.z)
    {
      res.cases.tag = GwnCase::FarFieldX;
      res.castDirection = {1, 0, 0};
      res.value = boundaryIntegral(pp, pp.patch.loops, true, q, identity, FieldAxis::X, cfg,
                                   res.surfaceEvals);
      return res;
    }
    if(q.z < b.lo.z || q.z > b.hi.z || q.x < b.lo.x || q.x > b.hi.x)
    {
      res.cases.tag = GwnCase::FarFieldY;
      res.castDirection = {0, 1, 0};
      res.value = boundaryIntegral(pp, pp.patch.loops, true, q, identity, FieldAxis::Y, cfg,
                                   res.surfaceEvals);
      return res;
    }
  }

  if(!pp.obb.contains(q))
  {
    // Any line through q perpendicular to the separation direction stays on
    // the query's side of the supporting plane, hence misses the box.
    const Vec3 away = (q - pp.obb.closestPoint(q)).normalized();
    if(away.norm() > 0.5)
    {
      GwnResult res;
      res.cases.tag = GwnCase::FarFieldRotated;
      res.castDirection = anyPerpendicular(away);
      const Rotation rot = rotationToZ(res.castDirection);
      res.value = boundaryIntegral(pp, pp.patch.loops, true, q, rot, FieldAxis::Z, cfg,
                                   res.surfaceEvals);
      return res;
    }
  }

  const Vec3 castDir = pp.meanOk ? pp.meanDir : rng.unitVector();
  return nearFieldGwn(pp, q, cfg, coincidentTolAbs, rng, edgeDepth, castDir);
}
}  // namespace detail

/*!
 * \brief Generalized winding number of one trimmed patch around a query
 *        point.
 *
 * Far queries reduce to a boundary integral along the trimming loops; near
 * queries cast a line, correct the antiderivative jumps at its transversal
 * surface crossings and isolate boundary or tangent hits in parameter
 * disks. Throws on unresolved geometry (see ErrorCode).
 *
 * \param [in] pp        patch prepared by preparePatch
 * \param [in] q         query point
 * \param [in] cfg       evaluation configuration
 * \param [in] modelDiag reference diagonal for the on-surface tolerance;
 *                       defaults to the patch's own bounds
 * \param [in] salt      extra seed material (query index) for retry draws
 */
inline GwnResult patchGwn(const PreparedPatch& pp, const Vec3& q, const GwnConfig& cfg,
                          double modelDiag = 0.0, std::uint64_t salt = 0)
{
  const double diag = modelDiag > 0.0 ? modelDiag : pp.box.diagonal();
  Rng rng(hashMix(hashMix(cfg.rngSeed, salt), static_cast<std::uint64_t>(pp.patch.id + 1)));
  return detail::patchGwnImpl(pp, q, cfg, cfg.coincidentTol * diag, rng, 0);
}

/// A collection of prepared patches with shared scale information.
struct PreparedModel
{
  std::vector<PreparedPatch> patches;
  double modelDiag = 0.0;
};

/// Prepares every nonempty patch of a model; empty patches are skipped.
inline PreparedModel prepareModel(const std::vector<TrimmedPatch>& patches, const GwnConfig& cfg)
{
  PreparedModel model;
  Box3 bounds;
  for(const TrimmedPatch& tp : patches)
  {
    if(tp.surface.empty())
    {
      continue;
    }
    model.patches.push_back(preparePatch(tp, cfg));
    bounds.addBox(model.patches.back().box);
  }
  model.modelDiag = bounds.valid() ? bounds.diagonal() : 1.0;
  return model;
}

/*!
 * \brief Generalized winding number of a whole model: the sum over its
 *        patches, with per patch branches collected as children.
 */
inline GwnResult modelGwn(const PreparedModel& model, const Vec3& q, const GwnConfig& cfg,
                          std::uint64_t querySalt = 0)
{
  GwnResult total;
  total.cases.tag = GwnCase::NearField;
  for(std::size_t i = 0; i < model.patches.size(); ++i)
  {
    const PreparedPatch& pp = model.patches[i];
    Rng rng(hashMix(hashMix(cfg.rngSeed, querySalt), static_cast<std::uint64_t>(i + 1)));
    GwnResult r =
      detail::patchGwnImpl(pp, q, cfg, cfg.coincidentTol * model.modelDiag, rng, 0);
    total.value += r.value;
    total.correction += r.correction;
    total.coincident = total.coincident || r.coincident;
    total.surfaceEvals += r.surfaceEvals;
    total.cases.children.push_back(std::move(r.cases));
  }
  return total;
}

/// Rounds a winding number to its containment count.
inline long windingRound(double w) { return std::lround(w); }

/// Containment decision: nonzero rule by default, even odd when evenOdd.
inline bool isContained(double w, bool evenOdd = false)
{
  const long r = windingRound(w);
  return evenOdd ? (r % 2 != 0) : (r != 0);
}

}  // namespace gwn
