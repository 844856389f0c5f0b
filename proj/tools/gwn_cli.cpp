// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#include "gwn/gwn.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace
{

/// Exit codes: 0 success, 1 bad input, 2 a query could not be resolved.
constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitUnresolved = 2;

struct CommonOptions
{
  double epsQuad = 1.0e-6;
  double epsLs = 1.0e-6;
  double diskRadiusPct = 1.0;
  int quadOrder = 15;
  std::uint64_t seed = 12345;
  int threads = 0;
  std::string rule = "nonzero";
};

void attachCommon(CLI::App* cmd, CommonOptions& opt)
{
  cmd->add_option("--eps-quad", opt.epsQuad, "quadrature refinement tolerance")
    ->capture_default_str();
  cmd->add_option("--eps-ls", opt.epsLs, "line-surface intersection tolerance")
    ->capture_default_str();
  cmd->add_option("--disk-radius-pct", opt.diskRadiusPct,
                  "edge disk radius, percent of the parameter diagonal")
    ->capture_default_str();
  cmd->add_option("--order", opt.quadOrder, "Gauss-Legendre points per curve span")
    ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "seed for retry direction draws")->capture_default_str();
  cmd->add_option("--threads", opt.threads,
                  "worker threads (0: GWN_THREADS env, then hardware)")
    ->capture_default_str();
  cmd->add_option("--rule", opt.rule, "containment rule: nonzero or evenodd")
    ->check(CLI::IsMember({"nonzero", "evenodd"}))
    ->capture_default_str();
}

gwn::GwnConfig makeConfig(const CommonOptions& opt)
{
  gwn::GwnConfig cfg;
  cfg.epsQuad = opt.epsQuad;
  cfg.epsLs = opt.epsLs;
  cfg.diskRadiusPct = opt.diskRadiusPct;
  cfg.quadOrder = opt.quadOrder;
  cfg.rngSeed = opt.seed;
  return cfg;
}

std::string formatValue(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* categoryName(gwn::CaseCategory c)
{
  switch(c)
  {
  case gwn::CaseCategory::FarField:
    return "far";
  case gwn::CaseCategory::NearField:
    return "near";
  default:
    return "edge";
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"generalized winding numbers for trimmed rational surface models"};
  app.require_subcommand(1);

  // ---- validate ----
  std::string validateModelPath;
  CLI::App* cmdValidate = app.add_subcommand("validate", "parse a model file and report facts");
  cmdValidate->add_option("model", validateModelPath, "model file")->required();

  // ---- query ----
  std::string queryModelPath, queryPointsPath, queryOutPath;
  bool queryDiagnostics = false;
  CommonOptions queryOpt;
  CLI::App* cmdQuery =
    app.add_subcommand("query", "winding numbers and containment for query points");
  cmdQuery->add_option("model", queryModelPath, "model file")->required();
  cmdQuery->add_option("queries", queryPointsPath, "query points, one x y z per line")
    ->required();
  cmdQuery->add_option("--out", queryOutPath, "write results here instead of stdout");
  cmdQuery->add_flag("--diagnostics", queryDiagnostics,
                     "append case, evaluation and timing columns (not deterministic)");
  attachCommon(cmdQuery, queryOpt);

  // ---- slice ----
  std::string sliceModelPath, sliceOutPath = "slice.pgm", sliceAxis = "z";
  double sliceOffset = 0.0, sliceMin = -0.5, sliceMax = 1.5;
  int sliceWidth = 256, sliceHeight = 256;
  CommonOptions sliceOpt;
  CLI::App* cmdSlice =
    app.add_subcommand("slice", "render winding numbers over a plane to a 16 bit PGM");
  cmdSlice->add_option("model", sliceModelPath, "model file")->required();
  cmdSlice->add_option("--axis", sliceAxis, "slice plane normal: x, y or z")
    ->check(CLI::IsMember({"x", "y", "z"}))
    ->capture_default_str();
  cmdSlice->add_option("--offset", sliceOffset, "plane coordinate along the axis")
    ->capture_default_str();
  cmdSlice->add_option("--width", sliceWidth, "pixels across")->capture_default_str();
  cmdSlice->add_option("--height", sliceHeight, "pixels down")->capture_default_str();
  cmdSlice->add_option("--min", sliceMin, "winding number mapped to black")
    ->capture_default_str();
  cmdSlice->add_option("--max", sliceMax, "winding number mapped to white")
    ->capture_default_str();
  cmdSlice->add_option("--out", sliceOutPath, "output PGM file")->capture_default_str();
  attachCommon(cmdSlice, sliceOpt);

  // ---- stats ----
  std::string statsModelPath, statsPointsPath;
  CommonOptions statsOpt;
  CLI::App* cmdStats = app.add_subcommand("stats", "case mix and timing summary for a run");
  cmdStats->add_option("model", statsModelPath, "model file")->required();
  cmdStats->add_option("queries", statsPointsPath, "query points file")->required();
  attachCommon(cmdStats, statsOpt);

  // ---- compare ----
  std::string cmpModelPath, cmpPointsPath, cmpReference = "gwn";
  std::vector<std::string> cmpMethods;
  CommonOptions cmpOpt;
  CLI::App* cmdCompare =
    app.add_subcommand("compare", "score containment methods against a reference");
  cmdCompare->add_option("model", cmpModelPath, "model file")->required();
  cmdCompare->add_option("queries", cmpPointsPath, "query points file")->required();
  cmdCompare
    ->add_option("--method", cmpMethods,
                 "methods: gwn, boundary:n, mesh:n, cloud:n, surfquad:n[:adaptive]")
    ->required();
  cmdCompare->add_option("--reference", cmpReference, "reference method")
    ->capture_default_str();
  attachCommon(cmdCompare, cmpOpt);

  // ---- make ----
  std::string makeShape, makeOutPath;
  double makeRadius = 1.0, makeMinor = 0.35;
  std::vector<double> makeCenter = {0.0, 0.0, 0.0};
  CLI::App* cmdMake = app.add_subcommand("make", "write a builtin model file");
  cmdMake->add_option("shape", makeShape, "sphere, torus or box")
    ->check(CLI::IsMember({"sphere", "torus", "box"}))
    ->required();
  cmdMake->add_option("--out", makeOutPath, "output model file")->required();
  cmdMake->add_option("--radius", makeRadius, "sphere or torus center circle radius")
    ->capture_default_str();
  cmdMake->add_option("--minor-radius", makeMinor, "torus tube radius")->capture_default_str();
  cmdMake->add_option("--center", makeCenter, "center coordinates")->expected(3);

  try
  {
    app.parse(argc, argv);
  }
  catch(const CLI::ParseError& e)
  {
    // Normalize usage problems to exit code 1; --help stays 0.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try
  {
    if(*cmdValidate)
    {
      const auto patches = gwn::readModelFile(validateModelPath);
      const gwn::ModelSummary s = gwn::validateModel(patches);
      std::printf("patches: %d\n", s.patchCount);
      std::printf("trim loops: %d (%d curves)\n", s.loopCount, s.curveCount);
      std::printf("bounds: [%g, %g] x [%g, %g] x [%g, %g]\n", s.bounds.lo.x, s.bounds.hi.x,
                  s.bounds.lo.y, s.bounds.hi.y, s.bounds.lo.z, s.bounds.hi.z);
      std::printf("loops closed: %s (max gap %.3e)\n", s.loopsClosed ? "yes" : "no",
                  s.maxLoopGap);
      if(!s.loopsClosed)
      {
        return kExitBadInput;
      }
      return kExitOk;
    }

    if(*cmdQuery)
    {
      const auto patches = gwn::readModelFile(queryModelPath);
      const auto queries = gwn::readQueryFile(queryPointsPath);
      const gwn::GwnConfig cfg = makeConfig(queryOpt);
      const bool evenOdd = queryOpt.rule == "evenodd";
      const auto outcomes = gwn::runQueries(patches, queries, cfg, queryOpt.threads);

      std::ofstream fileOut;
      if(!queryOutPath.empty())
      {
        fileOut.open(queryOutPath);
        if(!fileOut)
        {
          std::fprintf(stderr, "cannot open output file: %s\n", queryOutPath.c_str());
          return kExitBadInput;
        }
      }
      std::ostream& out = queryOutPath.empty() ? std::cout : fileOut;

      bool anyUnresolved = false;
      for(const gwn::QueryOutcome& o : outcomes)
      {
        if(o.error)
        {
          anyUnresolved = true;
          out << "error " << o.message << "\n";
          continue;
        }
        out << formatValue(o.value) << " "
            << (gwn::isContained(o.value, evenOdd) ? "in" : "out");
        if(o.coincident)
        {
          out << " on-surface";
        }
        if(queryDiagnostics)
        {
          out << " case=" << categoryName(gwn::categorizeQuery(o)) << " evals=" << o.surfaceEvals
              << " ms=" << formatValue(o.milliseconds);
        }
        out << "\n";
      }
      return anyUnresolved ? kExitUnresolved : kExitOk;
    }

    if(*cmdSlice)
    {
      const auto patches = gwn::readModelFile(sliceModelPath);
      const gwn::GwnConfig cfg = makeConfig(sliceOpt);
      const int axis = sliceAxis == "x" ? 0 : (sliceAxis == "y" ? 1 : 2);
      const gwn::SliceImage img =
        gwn::renderSlice(patches, cfg, axis, sliceOffset, sliceWidth, sliceHeight,
                         sliceOpt.threads);
      gwn::writeSlicePgmFile(sliceOutPath, img, sliceMin, sliceMax);
      std::printf("wrote %s (%dx%d, 16 bit)\n", sliceOutPath.c_str(), img.width, img.height);
      if(img.errorCount > 0)
      {
        std::fprintf(stderr, "unresolved pixels: %zu\n", img.errorCount);
        return kExitUnresolved;
      }
      return kExitOk;
    }

    if(*cmdStats)
    {
      const auto patches = gwn::readModelFile(statsModelPath);
      const auto queries = gwn::readQueryFile(statsPointsPath);
      const gwn::GwnConfig cfg = makeConfig(statsOpt);
      const auto outcomes = gwn::runQueries(patches, queries, cfg, statsOpt.threads);
      gwn::statsReport(std::cout, outcomes);
      for(const gwn::QueryOutcome& o : outcomes)
      {
        if(o.error)
        {
          return kExitUnresolved;
        }
      }
      return kExitOk;
    }

    if(*cmdCompare)
    {
      const auto patches = gwn::readModelFile(cmpModelPath);
      const auto queries = gwn::readQueryFile(cmpPointsPath);
      const gwn::GwnConfig cfg = makeConfig(cmpOpt);
      const auto reports = gwn::compareMethods(patches, queries, cfg, cmpMethods, cmpReference);
      gwn::printComparison(std::cout, reports, cmpReference);
      return kExitOk;
    }

    if(*cmdMake)
    {
      const gwn::Vec3 center{makeCenter[0], makeCenter[1], makeCenter[2]};
      std::vector<gwn::TrimmedPatch> patches;
      if(makeShape == "sphere")
      {
        patches = gwn::shapes::sixPatchSphere(center, makeRadius);
      }
      else if(makeShape == "torus")
      {
        patches = gwn::shapes::fourPatchTorus(center, makeRadius, makeMinor);
      }
      else
      {
        const gwn::Vec3 half{makeRadius, makeRadius, makeRadius};
        patches = gwn::shapes::boxModel(center - half, center + half);
      }
      gwn::writeModelFile(makeOutPath, patches);
      std::printf("wrote %s (%zu patches)\n", makeOutPath.c_str(), patches.size());
      return kExitOk;
    }
  }
  catch(const gwn::Error& e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == gwn::ErrorCode::InvalidInput ? kExitBadInput : kExitUnresolved;
  }
  return kExitBadInput;
}
