// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#include "gwn/runner.hpp"
#include "gwn/shapes.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

using namespace gwn;

namespace
{
std::vector<Vec3> sphereQueries()
{
  return {
    {0, 0, 0},                      // deep inside
    {0.3, -0.2, 0.4},               // inside
    {2.0, 0.0, 0.0},                // far outside
    {0.0, 1.6, -0.4},               // outside
    {0.0, 0.0, 0.999},              // inside, near the surface
    {0.0, 0.0, 1.001},              // outside, near the surface
    {0.0, 0.0, 1.0},                // on the surface
    {0.57, 0.57, 0.57},             // just inside a corner direction
    {-0.4, 0.8, 0.2},               // inside
    {1.2, -1.1, 0.3},               // outside
  };
}

// Results (not cost counters) must be bit identical across worker counts:
// surfaceEvals tallies fresh surface evaluations, so it varies with the
// memo cache warmth, which depends on how queries were partitioned.
bool sameOutcome(const QueryOutcome& a, const QueryOutcome& b)
{
  return std::memcmp(&a.value, &b.value, sizeof(double)) == 0 &&
    a.coincident == b.coincident && a.error == b.error;
}
}  // namespace

TEST_CASE("thread count resolution", "[runner]")
{
  CHECK(resolveThreadCount(3) == 3);
  CHECK(resolveThreadCount(1) == 1);

  setenv("GWN_THREADS", "5", 1);
  CHECK(resolveThreadCount(0) == 5);
  CHECK(resolveThreadCount(2) == 2);  // explicit wins
  setenv("GWN_THREADS", "junk", 1);
  CHECK(resolveThreadCount(0) >= 1);
  unsetenv("GWN_THREADS");
  CHECK(resolveThreadCount(0) >= 1);
  CHECK(resolveThreadCount(-4) >= 1);
}

TEST_CASE("query batches are worker count independent", "[runner]")
{
  const std::vector<TrimmedPatch> sphere = shapes::sixPatchSphere({0, 0, 0}, 1.0);
  const std::vector<Vec3> queries = sphereQueries();
  const GwnConfig cfg;

  const std::vector<QueryOutcome> serial = runQueries(sphere, queries, cfg, 1);
  const std::vector<QueryOutcome> quad = runQueries(sphere, queries, cfg, 4);
  const std::vector<QueryOutcome> odd = runQueries(sphere, queries, cfg, 3);

  REQUIRE(serial.size() == queries.size());
  for(std::size_t i = 0; i < queries.size(); ++i)
  {
    CAPTURE(i);
    CHECK(sameOutcome(serial[i], quad[i]));
    CHECK(sameOutcome(serial[i], odd[i]));
  }

  SECTION("outcomes carry per patch traces that sum to the total")
  {
    for(const QueryOutcome& out : serial)
    {
      REQUIRE(out.patches.size() == sphere.size());
      double sum = 0.0;
      std::uint64_t evals = 0;
      for(std::size_t p = 0; p < out.patches.size(); ++p)
      {
        CHECK(out.patches[p].patchIndex == static_cast<int>(p));
        sum += out.patches[p].value;
        evals += out.patches[p].surfaceEvals;
      }
      CHECK(sum == Catch::Approx(out.value).margin(1e-15));
      CHECK(evals == out.surfaceEvals);
      CHECK_FALSE(out.error);
    }
  }

  SECTION("classification sanity")
  {
    CHECK(serial[0].value == Catch::Approx(1.0).margin(1e-5));
    CHECK(serial[2].value == Catch::Approx(0.0).margin(1e-5));
    CHECK(serial[6].coincident);
    CHECK(serial[6].value == Catch::Approx(0.5).margin(1e-3));
  }
}

TEST_CASE("per query failures are captured, not thrown", "[runner]")
{
  const std::vector<TrimmedPatch> sphere = shapes::sixPatchSphere({0, 0, 0}, 1.0);
  GwnConfig cruel;
  cruel.maxQuadDepth = 0;
  cruel.epsQuad = 1e-300;

  const std::vector<Vec3> queries = {{0, 0, 0}, {2, 0, 0}};
  const std::vector<QueryOutcome> outcomes = runQueries(sphere, queries, cruel, 2);
  REQUIRE(outcomes.size() == 2);
  for(const QueryOutcome& out : outcomes)
  {
    CHECK(out.error);
    CHECK_FALSE(out.message.empty());
  }

  std::ostringstream report;
  statsReport(report, outcomes);
  CHECK(report.str().find("Unresolved queries: 2") != std::string::npos);
}

TEST_CASE("case categorization", "[runner]")
{
  GwnCaseNode far;
  far.tag = GwnCase::FarFieldY;
  CHECK(categorize(far) == CaseCategory::FarField);

  GwnCaseNode rotated;
  rotated.tag = GwnCase::FarFieldRotated;
  CHECK(categorize(rotated) == CaseCategory::FarField);

  GwnCaseNode near;
  near.tag = GwnCase::NearField;
  CHECK(categorize(near) == CaseCategory::NearField);

  GwnCaseNode edgy;
  edgy.tag = GwnCase::NearField;
  edgy.children.push_back({GwnCase::EdgeDisk, {}});
  CHECK(categorize(edgy) == CaseCategory::Edge);

  GwnCaseNode coincidentB;
  coincidentB.tag = GwnCase::NearField;
  coincidentB.children.push_back({GwnCase::CoincidentBoundary, {}});
  CHECK(categorize(coincidentB) == CaseCategory::Edge);

  QueryOutcome out;
  out.patches.resize(3);
  out.patches[0].cases = far;
  out.patches[1].cases = near;
  out.patches[2].cases = far;
  CHECK(categorizeQuery(out) == CaseCategory::NearField);
  out.patches[2].cases = edgy;
  CHECK(categorizeQuery(out) == CaseCategory::Edge);
  out.patches[1].cases = far;
  out.patches[2].cases = far;
  CHECK(categorizeQuery(out) == CaseCategory::FarField);
}

TEST_CASE("stats report layout", "[runner]")
{
  const std::vector<TrimmedPatch> sphere = shapes::sixPatchSphere({0, 0, 0}, 1.0);
  const std::vector<QueryOutcome> outcomes =
    runQueries(sphere, sphereQueries(), GwnConfig{}, 2);

  std::ostringstream out;
  statsReport(out, outcomes);
  const std::string text = out.str();

  CHECK(text.find("Per patch evaluation statistics (60 evaluations)") != std::string::npos);
  CHECK(text.find("Per query statistics (10 queries)") != std::string::npos);
  for(const char* label : {"% Far-field Cases", "% Near-field Cases", "% Edge Cases",
                           "Avg. Time per Query (ms)", "Avg. Far-field Case Time (ms)",
                           "Avg. Near-field Case Time (ms)", "Avg. Edge Case Time (ms)"})
  {
    CAPTURE(label);
    // One occurrence per block.
    const std::size_t first = text.find(label);
    REQUIRE(first != std::string::npos);
    CHECK(text.find(label, first + 1) != std::string::npos);
  }
  CHECK(text.find("Unresolved queries") == std::string::npos);
}

TEST_CASE("slice rendering", "[runner]")
{
  const std::vector<TrimmedPatch> sphere = shapes::sixPatchSphere({0, 0, 0}, 1.0);
  const GwnConfig cfg;

  const SliceImage img = renderSlice(sphere, cfg, 2, 0.0, 9, 9, 2);
  CHECK(img.width == 9);
  CHECK(img.height == 9);
  CHECK(img.axis == 2);
  CHECK(img.errorCount == 0);
  REQUIRE(img.values.size() == 81);
  // Window: control box inflated by ten percent, symmetric about the origin.
  CHECK(img.h0 < -1.0);
  CHECK(img.h1 > 1.0);
  CHECK(img.h0 == Catch::Approx(-img.h1));
  CHECK(img.v0 == Catch::Approx(-img.v1));

  // Center pixel sits at the origin, corners fall outside the ball.
  CHECK(img.values[4 * 9 + 4] == Catch::Approx(1.0).margin(1e-4));
  CHECK(img.values[0] == Catch::Approx(0.0).margin(1e-4));
  CHECK(img.values[80] == Catch::Approx(0.0).margin(1e-4));

  SECTION("identical for any worker count")
  {
    const SliceImage again = renderSlice(sphere, cfg, 2, 0.0, 9, 9, 5);
    CHECK(again.values == img.values);
  }

  SECTION("other axes slice the matching planes")
  {
    const SliceImage xcut = renderSlice(sphere, cfg, 0, 0.0, 7, 5, 2);
    CHECK(xcut.values[2 * 7 + 3] == Catch::Approx(1.0).margin(1e-4));
    const SliceImage offcut = renderSlice(sphere, cfg, 2, 2.0, 5, 5, 2);
    for(const double v : offcut.values)
    {
      CHECK(std::abs(v) < 1e-4);  // plane misses the ball entirely
    }
  }

  SECTION("argument validation")
  {
    CHECK_THROWS_AS(renderSlice(sphere, cfg, 3, 0.0, 4, 4), Error);
    CHECK_THROWS_AS(renderSlice(sphere, cfg, 2, 0.0, 0, 4), Error);
    CHECK_THROWS_AS(renderSlice({}, cfg, 2, 0.0, 4, 4), Error);
  }
}

TEST_CASE("slice image encodes as 16 bit big endian PGM", "[runner]")
{
  SliceImage img;
  img.width = 2;
  img.height = 1;
  img.axis = 2;
  img.offset = 0.25;
  img.values = {1.0, -0.5};

  std::ostringstream out(std::ios::binary);
  writeSlicePgm(out, img);  // default window [-0.5, 1.5]
  const std::string bytes = out.str();

  CHECK(bytes.rfind("P5\n", 0) == 0);
  CHECK(bytes.find("# winding number slice, plane z = 0.25\n") != std::string::npos);
  const std::size_t dims = bytes.find("2 1\n65535\n");
  REQUIRE(dims != std::string::npos);
  const std::size_t raster = dims + std::strlen("2 1\n65535\n");
  REQUIRE(bytes.size() == raster + 4);

  // 1.0 maps to 0.75 * 65535 = 49151 = 0xbfff; -0.5 clamps to zero.
  CHECK(static_cast<unsigned char>(bytes[raster + 0]) == 0xbf);
  CHECK(static_cast<unsigned char>(bytes[raster + 1]) == 0xff);
  CHECK(static_cast<unsigned char>(bytes[raster + 2]) == 0x00);
  CHECK(static_cast<unsigned char>(bytes[raster + 3]) == 0x00);

  CHECK_THROWS_AS(writeSlicePgm(out, img, 1.0, 1.0), Error);
}

TEST_CASE("method comparison harness", "[runner]")
{
  const std::vector<TrimmedPatch> sphere = shapes::sixPatchSphere({0, 0, 0}, 1.0);
  const std::vector<TrimmedPatch> onePatch = {sphere[0]};
  const GwnConfig cfg;

  SECTION("fixed order budgets: surface versus boundary quadrature")
  {
    const std::vector<Vec3> queries = {{0.1, 0.2, 0.3}, {2.0, 0.3, -0.5}, {1.4, 0.2, 0.8}};
    const std::vector<MethodReport> reports =
      compareMethods(onePatch, queries, cfg, {"surfquad:20", "boundary:20"});
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].method == "surfquad:20");
    CHECK(reports[0].avgEvals == 400.0);  // 20 x 20 tensor rule
    CHECK(reports[1].method == "boundary:20");
    CHECK(reports[1].avgEvals == 80.0);   // 4 boundary curves x 20 nodes
    // The bare boundary integral carries no jump corrections, so it matches
    // the surface integral where the vertical line through the query misses
    // the patch — true for the second query, well off the cap's axis.
    CHECK(std::abs(reports[0].values[1] - reports[1].values[1]) < 1e-6);
  }

  SECTION("reference method scores itself perfectly")
  {
    const std::vector<Vec3> queries = {{0, 0, 0}, {0.5, 0.1, -0.2}, {1.7, 0, 0}};
    const std::vector<MethodReport> reports =
      compareMethods(sphere, queries, cfg, {"gwn", "mesh:8", "cloud:8", "surfquad:6:adaptive"});
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].avgAbsDiff == 0.0);
    CHECK(reports[0].maxAbsDiff == 0.0);
    CHECK(reports[0].misclassified == 0);
    CHECK(reports[0].avgEvals > 0.0);

    CHECK(reports[1].avgEvals == 6 * 2 * 64);  // triangles per query
    CHECK(reports[2].avgEvals == 6 * 64);      // cloud points per query
    for(const MethodReport& r : reports)
    {
      CAPTURE(r.method);
      CHECK(r.values.size() == queries.size());
      CHECK(r.maxAbsDiff < 0.06);
      CHECK(r.misclassified == 0);
    }

    std::ostringstream table;
    printComparison(table, reports, "gwn");
    const std::string text = table.str();
    CHECK(text.find("method") != std::string::npos);
    CHECK(text.find("mesh:8") != std::string::npos);
    CHECK(text.find("(reference)") != std::string::npos);
  }

  SECTION("method parsing rejects nonsense")
  {
    const std::vector<Vec3> one = {{0, 0, 0}};
    CHECK_THROWS_AS(evaluateMethod("bogus", sphere, one, cfg), Error);
    CHECK_THROWS_AS(evaluateMethod("mesh", sphere, one, cfg), Error);
    CHECK_THROWS_AS(evaluateMethod("mesh:0", sphere, one, cfg), Error);
    CHECK_THROWS_AS(evaluateMethod("surfquad:5:fast", sphere, one, cfg), Error);
    CHECK_THROWS_AS(evaluateMethod("boundary:-3", sphere, one, cfg), Error);
  }
}
