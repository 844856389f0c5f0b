// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/curve2.hpp"
#include "gwn/patch.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gwn
{

/*!
 * \page model-format Model file format
 *
 * Plain UTF-8 text, one token stream; `#` starts a comment that runs to the
 * end of the line. All counts are explicit so the reader never guesses.
 *
 * \code
 * gwn model 1
 * patch <id> <name>
 * degrees <p> <q>
 * knots_u <count> <values...>
 * knots_v <count> <values...>
 * controls <nu> <nv>          # then nu*nv lines of: x y z weight
 * loop <curve count> <ccw|cw> # zero or more loops
 * curve <degree>
 * knots <count> <values...>
 * controls <count>            # then count lines of: u v weight
 * endpatch
 * \endcode
 *
 * Control rows follow the surface index layout (u index outer, v inner) and
 * store Euclidean coordinates with a separate positive weight. Loops marked
 * `cw` are stored clockwise and are reversed on load, so in memory every
 * loop bounds the kept region counterclockwise. A patch without loops is
 * kept over its whole domain rectangle.
 */

/// Query points are one `x y z` triple per line; `#` comments allowed.

namespace detail
{
/// Token reader that tracks line numbers and strips # comments. The subject
/// names the kind of file being read so errors identify the right input.
class TokenReader
{
public:
  explicit TokenReader(std::istream& in, const char* subject = "model")
    : m_in(in)
    , m_subject(subject)
  {}

  int line() const { return m_line; }

  bool next(std::string& tok)
  {
    while(true)
    {
      if(m_pos >= m_tokens.size())
      {
        if(!refill())
        {
          return false;
        }
        continue;
      }
      tok = m_tokens[m_pos++];
      return true;
    }
  }

  std::string expect(const char* what)
  {
    std::string tok;
    if(!next(tok))
    {
      throw Error(ErrorCode::InvalidInput,
                  std::string(m_subject) + " read: unexpected end of file, expected " + what);
    }
    return tok;
  }

  [[noreturn]] void fail(const std::string& message) const
  {
    throw Error(ErrorCode::InvalidInput,
                std::string(m_subject) + " read (line " + std::to_string(m_line) + "): " + message);
  }

  double number(const char* what)
  {
    const std::string tok = expect(what);
    try
    {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if(used != tok.size())
      {
        fail(std::string("bad number '") + tok + "' for " + what);
      }
      return v;
    }
    catch(const std::exception&)
    {
      fail(std::string("bad number '") + tok + "' for " + what);
    }
  }

  int integer(const char* what)
  {
    const double v = number(what);
    const int i = static_cast<int>(v);
    if(static_cast<double>(i) != v)
    {
      fail(std::string("expected an integer for ") + what);
    }
    return i;
  }

  void keyword(const char* word)
  {
    const std::string tok = expect(word);
    if(tok != word)
    {
      fail(std::string("expected '") + word + "', found '" + tok + "'");
    }
  }

private:
  bool refill()
  {
    std::string lineText;
    while(std::getline(m_in, lineText))
    {
      ++m_line;
      const std::size_t hash = lineText.find('#');
      if(hash != std::string::npos)
      {
        lineText.erase(hash);
      }
      m_tokens.clear();
      m_pos = 0;
      std::istringstream split(lineText);
      std::string tok;
      while(split >> tok)
      {
        m_tokens.push_back(tok);
      }
      if(!m_tokens.empty())
      {
        return true;
      }
    }
    return false;
  }

  std::istream& m_in;
  const char* m_subject;
  std::vector<std::string> m_tokens;
  std::size_t m_pos = 0;
  int m_line = 0;
};

/// Shortest decimal text that reads back to the same double.
inline std::string formatDouble(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

/// Reads a model from a token stream; throws with line numbers on errors.
inline std::vector<TrimmedPatch> readModel(std::istream& in)
{
  detail::TokenReader r(in);
  r.keyword("gwn");
  r.keyword("model");
  const int version = r.integer("format version");
  if(version != 1)
  {
    r.fail("unsupported format version " + std::to_string(version));
  }

  std::vector<TrimmedPatch> patches;
  std::string tok;
  while(r.next(tok))
  {
    if(tok != "patch")
    {
      r.fail("expected 'patch', found '" + tok + "'");
    }
    TrimmedPatch tp;
    tp.id = r.integer("patch id");
    tp.name = r.expect("patch name");

    r.keyword("degrees");
    const int p = r.integer("degree in u");
    const int q = r.integer("degree in v");

    r.keyword("knots_u");
    const int nku = r.integer("knot count in u");
    std::vector<double> knotsU(nku);
    for(double& k : knotsU)
    {
      k = r.number("knot value");
    }
    r.keyword("knots_v");
    const int nkv = r.integer("knot count in v");
    std::vector<double> knotsV(nkv);
    for(double& k : knotsV)
    {
      k = r.number("knot value");
    }

    r.keyword("controls");
    const int nu = r.integer("control count in u");
    const int nv = r.integer("control count in v");
    if(nu <= 0 || nv <= 0)
    {
      r.fail("control counts must be positive");
    }
    std::vector<Vec4> ctrl(static_cast<std::size_t>(nu) * nv);
    for(Vec4& c : ctrl)
    {
      const double x = r.number("control x");
      const double y = r.number("control y");
      const double z = r.number("control z");
      const double w = r.number("control weight");
      if(!(w > 0.0))
      {
        r.fail("control weights must be positive");
      }
      c = {x * w, y * w, z * w, w};
    }
    try
    {
      tp.surface = NurbsPatch(p, q, std::move(knotsU), std::move(knotsV), std::move(ctrl));
    }
    catch(const Error& e)
    {
      r.fail(e.what());
    }

    while(true)
    {
      const std::string section = r.expect("'loop' or 'endpatch'");
      if(section == "endpatch")
      {
        break;
      }
      if(section != "loop")
      {
        r.fail("expected 'loop' or 'endpatch', found '" + section + "'");
      }
      const int curveCount = r.integer("curve count");
      const std::string orient = r.expect("loop orientation (ccw or cw)");
      if(orient != "ccw" && orient != "cw")
      {
        r.fail("loop orientation must be 'ccw' or 'cw', found '" + orient + "'");
      }
      TrimLoop loop;
      for(int c = 0; c < curveCount; ++c)
      {
        r.keyword("curve");
        const int degree = r.integer("curve degree");
        r.keyword("knots");
        const int nk = r.integer("curve knot count");
        std::vector<double> knots(nk);
        for(double& k : knots)
        {
          k = r.number("curve knot value");
        }
        r.keyword("controls");
        const int nc = r.integer("curve control count");
        std::vector<Vec3h> cc(nc);
        for(Vec3h& pctrl : cc)
        {
          const double u = r.number("curve control u");
          const double v = r.number("curve control v");
          const double w = r.number("curve control weight");
          if(!(w > 0.0))
          {
            r.fail("curve control weights must be positive");
          }
          pctrl = {u * w, v * w, w};
        }
        try
        {
          loop.curves.emplace_back(degree, std::move(knots), std::move(cc));
        }
        catch(const Error& e)
        {
          r.fail(e.what());
        }
      }
      if(orient == "cw")
      {
        // Stored clockwise: reverse curve order and each curve's direction
        // so the in-memory loop is always counterclockwise.
        TrimLoop flipped;
        for(auto it = loop.curves.rbegin(); it != loop.curves.rend(); ++it)
        {
          flipped.curves.push_back(it->reversed());
        }
        loop = std::move(flipped);
      }
      tp.loops.push_back(std::move(loop));
    }
    patches.push_back(std::move(tp));
  }
  if(patches.empty())
  {
    throw Error(ErrorCode::InvalidInput, "model read: file contains no patches");
  }
  return patches;
}

/// Writes the model in the text format; numbers round trip at full precision.
inline void writeModel(std::ostream& out, const std::vector<TrimmedPatch>& patches)
{
  const auto num = detail::formatDouble;
  out << "# trimmed rational surface collection\n";
  out << "gwn model 1\n";
  for(const TrimmedPatch& tp : patches)
  {
    const NurbsPatch& s = tp.surface;
    out << "patch " << tp.id << " " << (tp.name.empty() ? "unnamed" : tp.name) << "\n";
    out << "degrees " << s.degreeU() << " " << s.degreeV() << "\n";
    out << "knots_u " << s.knotsU().size();
    for(const double k : s.knotsU())
    {
      out << " " << num(k);
    }
    out << "\nknots_v " << s.knotsV().size();
    for(const double k : s.knotsV())
    {
      out << " " << num(k);
    }
    out << "\ncontrols " << s.controlCountU() << " " << s.controlCountV() << "\n";
    for(const Vec4& c : s.controls())
    {
      out << num(c.x / c.w) << " " << num(c.y / c.w) << " " << num(c.z / c.w) << " " << num(c.w)
          << "\n";
    }
    for(const TrimLoop& loop : tp.loops)
    {
      out << "loop " << loop.curves.size() << " ccw\n";
      for(const RationalCurve2& curve : loop.curves)
      {
        out << "curve " << curve.degree() << "\n";
        out << "knots " << curve.knotVector().size();
        for(const double k : curve.knotVector())
        {
          out << " " << num(k);
        }
        out << "\ncontrols " << curve.controlCount() << "\n";
        for(const Vec3h& c : curve.controls())
        {
          out << num(c.x / c.w) << " " << num(c.y / c.w) << " " << num(c.w) << "\n";
        }
      }
    }
    out << "endpatch\n";
  }
}

inline std::vector<TrimmedPatch> readModelFile(const std::string& path)
{
  std::ifstream in(path);
  if(!in)
  {
    throw Error(ErrorCode::InvalidInput, "cannot open model file: " + path);
  }
  return readModel(in);
}

inline void writeModelFile(const std::string& path, const std::vector<TrimmedPatch>& patches)
{
  std::ofstream out(path);
  if(!out)
  {
    throw Error(ErrorCode::InvalidInput, "cannot open output file: " + path);
  }
  writeModel(out, patches);
  if(!out.good())
  {
    throw Error(ErrorCode::InvalidInput, "write failed: " + path);
  }
}

/// Reads query points, one `x y z` triple per line; `#` comments allowed.
inline std::vector<Vec3> readQueries(std::istream& in)
{
  detail::TokenReader r(in, "queries");
  std::vector<Vec3> out;
  std::string tok;
  while(r.next(tok))
  {
    Vec3 q;
    try
    {
      std::size_t used = 0;
      q.x = std::stod(tok, &used);
      if(used != tok.size())
      {
        r.fail("bad number '" + tok + "' in query point");
      }
    }
    catch(const std::exception&)
    {
      r.fail("bad number '" + tok + "' in query point");
    }
    q.y = r.number("query y");
    q.z = r.number("query z");
    out.push_back(q);
  }
  return out;
}

inline std::vector<Vec3> readQueryFile(const std::string& path)
{
  std::ifstream in(path);
  if(!in)
  {
    throw Error(ErrorCode::InvalidInput, "cannot open query file: " + path);
  }
  return readQueries(in);
}

/// Structural facts gathered by validateModel.
struct ModelSummary
{
  int patchCount = 0;
  int loopCount = 0;
  int curveCount = 0;
  Box3 bounds;
  double maxLoopGap = 0.0;   ///< worst head-to-tail mismatch across loops
  bool loopsClosed = true;   ///< every loop chains head to tail and closes
};

/*!
 * \brief Structural validation: constructor level checks already passed, so
 *        this inspects loop closure and gathers summary facts.
 */
inline ModelSummary validateModel(const std::vector<TrimmedPatch>& patches)
{
  ModelSummary s;
  s.patchCount = static_cast<int>(patches.size());
  for(const TrimmedPatch& tp : patches)
  {
    s.bounds.addBox(tp.surface.aabb());
    for(const TrimLoop& loop : tp.loops)
    {
      ++s.loopCount;
      s.curveCount += static_cast<int>(loop.curves.size());
      if(loop.curves.empty())
      {
        s.loopsClosed = false;
        continue;
      }
      // Loop gap tolerance scales with the patch parameter domain.
      const double domainScale = std::max(
        tp.surface.domainMaxU() - tp.surface.domainMinU(),
        tp.surface.domainMaxV() - tp.surface.domainMinV());
      for(std::size_t c = 0; c < loop.curves.size(); ++c)
      {
        const Vec2 tail = loop.curves[c].endPoint();
        const Vec2 head = loop.curves[(c + 1) % loop.curves.size()].startPoint();
        const double gap = (tail - head).norm();
        s.maxLoopGap = std::max(s.maxLoopGap, gap);
        if(gap > 1e-9 * std::max(domainScale, 1.0))
        {
          s.loopsClosed = false;
        }
      }
    }
  }
  return s;
}

}  // namespace gwn
