// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/baselines.hpp"
#include "gwn/core.hpp"
#include "gwn/model_io.hpp"
#include "gwn/winding3d.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace gwn
{

/// Picks the worker count: explicit, then GWN_THREADS, then the hardware.
inline int resolveThreadCount(int requested)
{
  if(requested > 0)
  {
    return requested;
  }
  if(const char* env = std::getenv("GWN_THREADS"))
  {
    const int v = std::atoi(env);
    if(v > 0)
    {
      return v;
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// One patch evaluation inside a query, with its branch trace and cost.
struct PatchEvaluation
{
  int patchIndex = 0;
  double value = 0.0;
  GwnCaseNode cases;
  std::uint64_t surfaceEvals = 0;
  double milliseconds = 0.0;
};

/// Full outcome of one query point against the model.
struct QueryOutcome
{
  Vec3 point;
  double value = 0.0;
  bool coincident = false;
  bool error = false;
  std::string message;
  std::uint64_t surfaceEvals = 0;
  double milliseconds = 0.0;
  std::vector<PatchEvaluation> patches;
};

/*!
 * \brief Evaluates all queries against the model on \a threadCount workers.
 *
 * Each worker prepares its own copy of the model so quadrature caches are
 * thread local, and takes queries round robin by index. Values depend only
 * on the query index (never on the worker), so results are identical for
 * every thread count. Per query failures are captured in the outcome
 * instead of aborting the run.
 */
inline std::vector<QueryOutcome> runQueries(const std::vector<TrimmedPatch>& patches,
                                            const std::vector<Vec3>& queries,
                                            const GwnConfig& cfg, int threadCount = 0)
{
  const int workers =
    std::max(1, std::min<int>(resolveThreadCount(threadCount),
                              queries.empty() ? 1 : static_cast<int>(queries.size())));
  std::vector<QueryOutcome> outcomes(queries.size());

  const auto work = [&](int workerIndex) {
    const PreparedModel model = prepareModel(patches, cfg);
    for(std::size_t qi = workerIndex; qi < queries.size(); qi += workers)
    {
      QueryOutcome& out = outcomes[qi];
      out.point = queries[qi];
      const auto tq0 = std::chrono::steady_clock::now();
      try
      {
        for(std::size_t i = 0; i < model.patches.size(); ++i)
        {
          const auto tp0 = std::chrono::steady_clock::now();
          Rng rng(hashMix(hashMix(cfg.rngSeed, static_cast<std::uint64_t>(qi)),
                          static_cast<std::uint64_t>(i + 1)));
          GwnResult r = detail::patchGwnImpl(model.patches[i], queries[qi], cfg,
                                             cfg.coincidentTol * model.modelDiag, rng, 0);
          const auto tp1 = std::chrono::steady_clock::now();
          PatchEvaluation pe;
          pe.patchIndex = static_cast<int>(i);
          pe.value = r.value;
          pe.cases = std::move(r.cases);
          pe.surfaceEvals = r.surfaceEvals;
          pe.milliseconds = std::chrono::duration<double, std::milli>(tp1 - tp0).count();
          out.value += r.value;
          out.coincident = out.coincident || r.coincident;
          out.surfaceEvals += r.surfaceEvals;
          out.patches.push_back(std::move(pe));
        }
      }
      catch(const Error& e)
      {
        out.error = true;
        out.message = e.what();
      }
      const auto tq1 = std::chrono::steady_clock::now();
      out.milliseconds = std::chrono::duration<double, std::milli>(tq1 - tq0).count();
    }
  };

  std::vector<std::thread> pool;
  for(int w = 1; w < workers; ++w)
  {
    pool.emplace_back(work, w);
  }
  work(0);
  for(std::thread& t : pool)
  {
    t.join();
  }
  return outcomes;
}

/// Broad cost category of an evaluation, from its branch trace.
enum class CaseCategory
{
  FarField,
  NearField,
  Edge
};

namespace detail
{
inline bool hasEdgeTag(const GwnCaseNode& node)
{
  if(node.tag == GwnCase::EdgeDisk || node.tag == GwnCase::EdgeTangentRotate ||
     node.tag == GwnCase::CoincidentBoundary)
  {
    return true;
  }
  for(const GwnCaseNode& child : node.children)
  {
    if(hasEdgeTag(child))
    {
      return true;
    }
  }
  return false;
}
}  // namespace detail

/// Category of one patch evaluation: edge handling anywhere wins, otherwise
/// the root branch decides between far and near field.
inline CaseCategory categorize(const GwnCaseNode& cases)
{
  if(detail::hasEdgeTag(cases))
  {
    return CaseCategory::Edge;
  }
  switch(cases.tag)
  {
  case GwnCase::FarFieldZ:
  case GwnCase::FarFieldX:
  case GwnCase::FarFieldY:
  case GwnCase::FarFieldRotated:
    return CaseCategory::FarField;
  default:
    return CaseCategory::NearField;
  }
}

/// Category of a whole query: the most expensive category of its patches.
inline CaseCategory categorizeQuery(const QueryOutcome& outcome)
{
  CaseCategory cat = CaseCategory::FarField;
  for(const PatchEvaluation& pe : outcome.patches)
  {
    const CaseCategory c = categorize(pe.cases);
    if(c == CaseCategory::Edge)
    {
      return CaseCategory::Edge;
    }
    if(c == CaseCategory::NearField)
    {
      cat = CaseCategory::NearField;
    }
  }
  return cat;
}

namespace detail
{
struct CategoryTally
{
  std::size_t count[3] = {0, 0, 0};
  double ms[3] = {0.0, 0.0, 0.0};
  double totalMs = 0.0;
  std::size_t total = 0;

  void add(CaseCategory cat, double milliseconds)
  {
    count[static_cast<int>(cat)] += 1;
    ms[static_cast<int>(cat)] += milliseconds;
    totalMs += milliseconds;
    total += 1;
  }
};

inline void printTally(std::ostream& out, const CategoryTally& tally)
{
  char buf[128];
  const auto pct = [&](CaseCategory c) {
    return tally.total == 0 ? 0.0 : 100.0 * tally.count[static_cast<int>(c)] / tally.total;
  };
  const auto avg = [&](CaseCategory c) {
    const std::size_t n = tally.count[static_cast<int>(c)];
    return n == 0 ? 0.0 : tally.ms[static_cast<int>(c)] / n;
  };
  std::snprintf(buf, sizeof(buf), "  %-31s: %8.2f\n", "% Far-field Cases",
                pct(CaseCategory::FarField));
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-31s: %8.2f\n", "% Near-field Cases",
                pct(CaseCategory::NearField));
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-31s: %8.2f\n", "% Edge Cases", pct(CaseCategory::Edge));
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-31s: %10.4f\n", "Avg. Time per Query (ms)",
                tally.total == 0 ? 0.0 : tally.totalMs / tally.total);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-31s: %10.4f\n", "Avg. Far-field Case Time (ms)",
                avg(CaseCategory::FarField));
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-31s: %10.4f\n", "Avg. Near-field Case Time (ms)",
                avg(CaseCategory::NearField));
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-31s: %10.4f\n", "Avg. Edge Case Time (ms)",
                avg(CaseCategory::Edge));
  out << buf;
}
}  // namespace detail

/*!
 * \brief Writes the case mix and timing summary for a finished run: one
 *        block per patch evaluation, one per whole query.
 */
inline void statsReport(std::ostream& out, const std::vector<QueryOutcome>& outcomes)
{
  detail::CategoryTally perPatch, perQuery;
  std::size_t errors = 0;
  for(const QueryOutcome& q : outcomes)
  {
    if(q.error)
    {
      ++errors;
      continue;
    }
    for(const PatchEvaluation& pe : q.patches)
    {
      perPatch.add(categorize(pe.cases), pe.milliseconds);
    }
    perQuery.add(categorizeQuery(q), q.milliseconds);
  }
  out << "Per patch evaluation statistics (" << perPatch.total << " evaluations)\n";
  detail::printTally(out, perPatch);
  out << "Per query statistics (" << perQuery.total << " queries)\n";
  detail::printTally(out, perQuery);
  if(errors > 0)
  {
    out << "Unresolved queries: " << errors << "\n";
  }
}

/// Scalar image of winding numbers over an axis aligned plane.
struct SliceImage
{
  int width = 0;
  int height = 0;
  int axis = 2;          ///< 0 = x, 1 = y, 2 = z
  double offset = 0.0;   ///< plane coordinate along the axis
  double h0 = 0, h1 = 0; ///< horizontal world range (left to right)
  double v0 = 0, v1 = 0; ///< vertical world range (bottom to top)
  std::vector<double> values;  ///< row major, top row first
  std::size_t errorCount = 0;  ///< pixels whose evaluation failed
};

/*!
 * \brief Samples the winding number over a slice plane on a pixel grid.
 *
 * Axis z slices the (x, y) plane with x rightward and y upward; axis x
 * slices (y, z); axis y slices (x, z). The window defaults to the model
 * box inflated by ten percent. Pixel values depend only on the pixel index,
 * so images are identical for every thread count.
 */
inline SliceImage renderSlice(const std::vector<TrimmedPatch>& patches, const GwnConfig& cfg,
                              int axis, double offset, int width, int height,
                              int threadCount = 0)
{
  if(axis < 0 || axis > 2 || width < 1 || height < 1)
  {
    throw Error(ErrorCode::InvalidInput, "slice: bad axis or resolution");
  }
  Box3 bounds;
  for(const TrimmedPatch& tp : patches)
  {
    bounds.addBox(tp.surface.aabb());
  }
  if(!bounds.valid())
  {
    throw Error(ErrorCode::InvalidInput, "slice: model has no geometry");
  }
  bounds.inflate(0.10);

  SliceImage img;
  img.width = width;
  img.height = height;
  img.axis = axis;
  img.offset = offset;
  const int hAxis = axis == 0 ? 1 : 0;             // horizontal world axis
  const int vAxis = axis == 2 ? 1 : 2;             // vertical world axis
  const Vec3 lo = bounds.lo, hi = bounds.hi;
  const auto pick = [](const Vec3& v, int a) { return a == 0 ? v.x : (a == 1 ? v.y : v.z); };
  img.h0 = pick(lo, hAxis);
  img.h1 = pick(hi, hAxis);
  img.v0 = pick(lo, vAxis);
  img.v1 = pick(hi, vAxis);
  img.values.assign(static_cast<std::size_t>(width) * height, 0.0);

  const int workers = std::max(1, std::min(resolveThreadCount(threadCount), height));
  std::vector<std::size_t> errorPerWorker(workers, 0);

  const auto work = [&](int workerIndex) {
    const PreparedModel model = prepareModel(patches, cfg);
    for(int row = workerIndex; row < height; row += workers)
    {
      for(int col = 0; col < width; ++col)
      {
        const double h = img.h0 + (img.h1 - img.h0) * (col + 0.5) / width;
        const double v = img.v1 - (img.v1 - img.v0) * (row + 0.5) / height;
        Vec3 q;
        (axis == 0 ? q.x : (axis == 1 ? q.y : q.z)) = offset;
        (hAxis == 0 ? q.x : (hAxis == 1 ? q.y : q.z)) = h;
        (vAxis == 1 ? q.y : q.z) = v;
        const std::size_t pixel = static_cast<std::size_t>(row) * width + col;
        try
        {
          img.values[pixel] = modelGwn(model, q, cfg, pixel).value;
        }
        catch(const Error&)
        {
          img.values[pixel] = 0.0;
          ++errorPerWorker[workerIndex];
        }
      }
    }
  };

  std::vector<std::thread> pool;
  for(int w = 1; w < workers; ++w)
  {
    pool.emplace_back(work, w);
  }
  work(0);
  for(std::thread& t : pool)
  {
    t.join();
  }
  for(const std::size_t e : errorPerWorker)
  {
    img.errorCount += e;
  }
  return img;
}

/*!
 * \brief Writes the slice as a 16 bit binary PGM (P5, big endian samples).
 *
 * Values map linearly from [vmin, vmax] to [0, 65535] with clamping; the
 * mapping is recorded in a header comment.
 */
inline void writeSlicePgm(std::ostream& out, const SliceImage& img, double vmin = -0.5,
                          double vmax = 1.5)
{
  if(!(vmax > vmin))
  {
    throw Error(ErrorCode::InvalidInput, "slice image: empty value range");
  }
  char buf[256];
  out << "P5\n";
  const char axisName[3] = {'x', 'y', 'z'};
  std::snprintf(buf, sizeof(buf), "# winding number slice, plane %c = %.17g\n",
                axisName[img.axis], img.offset);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "# window: horizontal [%.17g, %.17g], vertical [%.17g, %.17g]\n", img.h0, img.h1,
                img.v0, img.v1);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "# gray = clamp((w - (%g)) / (%g), 0, 1) * 65535, big endian\n", vmin,
                vmax - vmin);
  out << buf;
  out << img.width << " " << img.height << "\n65535\n";
  std::string raster;
  raster.reserve(img.values.size() * 2);
  for(const double w : img.values)
  {
    double t = (w - vmin) / (vmax - vmin);
    t = std::min(1.0, std::max(0.0, t));
    const unsigned g = static_cast<unsigned>(std::lround(t * 65535.0));
    raster.push_back(static_cast<char>((g >> 8) & 0xff));
    raster.push_back(static_cast<char>(g & 0xff));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

inline void writeSlicePgmFile(const std::string& path, const SliceImage& img, double vmin = -0.5,
                              double vmax = 1.5)
{
  std::ofstream out(path, std::ios::binary);
  if(!out)
  {
    throw Error(ErrorCode::InvalidInput, "cannot open output file: " + path);
  }
  writeSlicePgm(out, img, vmin, vmax);
  if(!out.good())
  {
    throw Error(ErrorCode::InvalidInput, "write failed: " + path);
  }
}

/// Accuracy and cost of one containment method over a query set.
struct MethodReport
{
  std::string method;
  std::vector<double> values;
  double setupMs = 0.0;        ///< one time cost (tessellation, preparation)
  double avgMs = 0.0;          ///< average per query evaluation time
  double avgEvals = 0.0;       ///< average surface evaluations per query
  double avgAbsDiff = 0.0;     ///< against the reference values
  double maxAbsDiff = 0.0;
  int misclassified = 0;       ///< containment flips against the reference
};

namespace detail
{
/// Splits "name:123:adaptive" into pieces at the colons.
inline std::vector<std::string> splitMethod(const std::string& method)
{
  std::vector<std::string> parts;
  std::size_t start = 0;
  while(true)
  {
    const std::size_t colon = method.find(':', start);
    if(colon == std::string::npos)
    {
      parts.push_back(method.substr(start));
      return parts;
    }
    parts.push_back(method.substr(start, colon - start));
    start = colon + 1;
  }
}

inline int methodArg(const std::vector<std::string>& parts, const std::string& method)
{
  if(parts.size() < 2)
  {
    throw Error(ErrorCode::InvalidInput, "method needs a numeric argument: " + method);
  }
  const int v = std::atoi(parts[1].c_str());
  if(v < 1)
  {
    throw Error(ErrorCode::InvalidInput, "bad method argument in: " + method);
  }
  return v;
}
}  // namespace detail

/*!
 * \brief Evaluates one named method over the query set.
 *
 * Methods: `gwn` (boundary integrals with corrections), `boundary:n`
 * (boundary integrals at fixed order n, no corrections, no adaptivity),
 * `mesh:n` (tessellate n by n per patch, exact triangle winding),
 * `cloud:n` (n by n oriented point samples per patch), `surfquad:n`
 * (direct surface quadrature at fixed order n) and `surfquad:n:adaptive`.
 */
inline MethodReport evaluateMethod(const std::string& method,
                                   const std::vector<TrimmedPatch>& patches,
                                   const std::vector<Vec3>& queries, const GwnConfig& cfg)
{
  using clock = std::chrono::steady_clock;
  const auto msSince = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  MethodReport report;
  report.method = method;
  report.values.resize(queries.size(), 0.0);
  const std::vector<std::string> parts = detail::splitMethod(method);
  const std::string& kind = parts.front();
  std::uint64_t evals = 0;
  double queryMs = 0.0;

  if(kind == "gwn" || kind == "boundary")
  {
    GwnConfig mcfg = cfg;
    if(kind == "boundary")
    {
      // Plain fixed order boundary integrals: no corrections applied, so
      // this shows exactly what the jump terms buy.
      mcfg.fixedQuadOrder = detail::methodArg(parts, method);
      mcfg.enableCache = false;
    }
    const auto ts = clock::now();
    const PreparedModel model = prepareModel(patches, mcfg);
    report.setupMs = msSince(ts);
    const auto tq = clock::now();
    for(std::size_t qi = 0; qi < queries.size(); ++qi)
    {
      if(kind == "gwn")
      {
        GwnResult r = modelGwn(model, queries[qi], mcfg, qi);
        report.values[qi] = r.value;
        evals += r.surfaceEvals;
      }
      else
      {
        double sum = 0.0;
        std::uint64_t dummy = 0;
        for(const PreparedPatch& pp : model.patches)
        {
          sum += detail::boundaryIntegral(pp, pp.patch.loops, false, queries[qi],
                                          Rotation::identity(), FieldAxis::Z, mcfg, dummy);
        }
        report.values[qi] = sum;
        evals += dummy;
      }
    }
    queryMs = msSince(tq);
  }
  else if(kind == "mesh")
  {
    const int n = detail::methodArg(parts, method);
    const auto ts = clock::now();
    std::vector<TriangleMesh> meshes;
    meshes.reserve(patches.size());
    std::uint64_t triangles = 0;
    for(const TrimmedPatch& tp : patches)
    {
      meshes.push_back(tessellateTrimmed(tp, n));
      triangles += meshes.back().triangles.size();
    }
    report.setupMs = msSince(ts);
    const auto tq = clock::now();
    for(std::size_t qi = 0; qi < queries.size(); ++qi)
    {
      double sum = 0.0;
      for(const TriangleMesh& mesh : meshes)
      {
        sum += meshGwn(mesh, queries[qi]);
      }
      report.values[qi] = sum;
      evals += triangles;
    }
    queryMs = msSince(tq);
  }
  else if(kind == "cloud")
  {
    const int n = detail::methodArg(parts, method);
    const auto ts = clock::now();
    std::vector<OrientedPointCloud> clouds;
    clouds.reserve(patches.size());
    std::uint64_t points = 0;
    for(const TrimmedPatch& tp : patches)
    {
      clouds.push_back(samplePointCloud(tp, n));
      points += clouds.back().points.size();
    }
    report.setupMs = msSince(ts);
    const auto tq = clock::now();
    for(std::size_t qi = 0; qi < queries.size(); ++qi)
    {
      double sum = 0.0;
      for(const OrientedPointCloud& cloud : clouds)
      {
        sum += cloudGwn(cloud, queries[qi]);
      }
      report.values[qi] = sum;
      evals += points;
    }
    queryMs = msSince(tq);
  }
  else if(kind == "surfquad")
  {
    const int order = detail::methodArg(parts, method);
    const bool adaptive = parts.size() > 2 && parts[2] == "adaptive";
    if(parts.size() > 2 && parts[2] != "adaptive")
    {
      throw Error(ErrorCode::InvalidInput, "bad method modifier in: " + method);
    }
    const auto tq = clock::now();
    for(std::size_t qi = 0; qi < queries.size(); ++qi)
    {
      double sum = 0.0;
      for(const TrimmedPatch& tp : patches)
      {
        const QuadratureEstimate est =
          surfaceQuadratureGwn(tp, queries[qi], order, adaptive, cfg.epsQuad);
        sum += est.value;
        evals += est.evalCount;
      }
      report.values[qi] = sum;
    }
    queryMs = msSince(tq);
  }
  else
  {
    throw Error(ErrorCode::InvalidInput, "unknown method: " + method);
  }

  if(!queries.empty())
  {
    report.avgMs = queryMs / static_cast<double>(queries.size());
    report.avgEvals = static_cast<double>(evals) / static_cast<double>(queries.size());
  }
  return report;
}

/*!
 * \brief Runs every method over the queries and scores it against the
 *        reference method (containment threshold: winding number > 0.5).
 */
inline std::vector<MethodReport> compareMethods(const std::vector<TrimmedPatch>& patches,
                                                const std::vector<Vec3>& queries,
                                                const GwnConfig& cfg,
                                                const std::vector<std::string>& methods,
                                                const std::string& reference = "gwn")
{
  const MethodReport ref = evaluateMethod(reference, patches, queries, cfg);
  std::vector<MethodReport> reports;
  reports.reserve(methods.size());
  for(const std::string& m : methods)
  {
    MethodReport rep = (m == reference) ? ref : evaluateMethod(m, patches, queries, cfg);
    double sum = 0.0;
    for(std::size_t qi = 0; qi < queries.size(); ++qi)
    {
      const double diff = std::abs(rep.values[qi] - ref.values[qi]);
      sum += diff;
      rep.maxAbsDiff = std::max(rep.maxAbsDiff, diff);
      if((rep.values[qi] > 0.5) != (ref.values[qi] > 0.5))
      {
        ++rep.misclassified;
      }
    }
    rep.avgAbsDiff = queries.empty() ? 0.0 : sum / static_cast<double>(queries.size());
    reports.push_back(std::move(rep));
  }
  return reports;
}

/// Renders the comparison table produced by compareMethods.
inline void printComparison(std::ostream& out, const std::vector<MethodReport>& reports,
                            const std::string& reference)
{
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-22s %12s %12s %10s %12s %12s %12s\n", "method",
                "avg |diff|", "max |diff|", "misclass", "avg evals", "avg ms", "setup ms");
  out << buf;
  for(const MethodReport& r : reports)
  {
    std::snprintf(buf, sizeof(buf), "%-22s %12.3e %12.3e %10d %12.1f %12.4f %12.2f%s\n",
                  r.method.c_str(), r.avgAbsDiff, r.maxAbsDiff, r.misclassified, r.avgEvals,
                  r.avgMs, r.setupMs, r.method == reference ? "  (reference)" : "");
    out << buf;
  }
}

}  // namespace gwn
