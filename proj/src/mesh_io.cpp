#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "eigencert/error.hpp"
#include "eigencert/mesh.hpp"

namespace eigencert {

// Text format:
//   NV NT
//   x y flag        (NV lines, flag 1 = Dirichlet boundary)
//   i j k           (NT lines, 0-based, counterclockwise)
// Coordinates are written with 17 significant digits so a round trip is exact.

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <typename T>
T parse_number(const std::string& tok, int line) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("cannot parse '" + tok + "' as a number", line);
  return value;
}

}  // namespace

Triangulation read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string(), 0);

  int line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      auto t = tokens(line);
      if (!t.empty()) return t;
    }
    throw ParseError("unexpected end of file", line_no + 1);
  };

  auto header = next_line();
  if (header.size() != 2) throw ParseError("header must be 'NV NT'", line_no);
  const long nv = parse_number<long>(header[0], line_no);
  const long nt = parse_number<long>(header[1], line_no);
  if (nv <= 0 || nt <= 0) throw ParseError("vertex and triangle counts must be positive", line_no);

  std::vector<Point> verts;
  std::vector<std::uint8_t> flags;
  verts.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    auto t = next_line();
    if (t.size() != 3) throw ParseError("vertex line must be 'x y flag'", line_no);
    const double x = parse_number<double>(t[0], line_no);
    const double y = parse_number<double>(t[1], line_no);
    const int flag = parse_number<int>(t[2], line_no);
    if (flag != 0 && flag != 1) throw ParseError("boundary flag must be 0 or 1", line_no);
    verts.push_back({x, y});
    flags.push_back(static_cast<std::uint8_t>(flag));
  }

  std::vector<TriangleIndices> tris;
  tris.reserve(static_cast<std::size_t>(nt));
  for (long i = 0; i < nt; ++i) {
    auto t = next_line();
    if (t.size() != 3) throw ParseError("triangle line must be 'i j k'", line_no);
    TriangleIndices tri{};
    for (int k = 0; k < 3; ++k) {
      tri[static_cast<std::size_t>(k)] = parse_number<int>(t[static_cast<std::size_t>(k)], line_no);
      if (tri[static_cast<std::size_t>(k)] < 0 || tri[static_cast<std::size_t>(k)] >= nv)
        throw ParseError("vertex index " + t[static_cast<std::size_t>(k)] + " out of range [0, " +
                             std::to_string(nv) + ")",
                         line_no);
    }
    tris.push_back(tri);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!tokens(line).empty()) throw ParseError("trailing content after the last triangle", line_no);
  }

  // h is not stored; for a file mesh it is the longest edge.
  double h = 0.0;
  for (const auto& tri : tris)
    for (int k = 0; k < 3; ++k) {
      const Point a = verts[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
      const Point b = verts[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])];
      h = std::max(h, std::hypot(a.x - b.x, a.y - b.y));
    }
  return Triangulation(std::move(verts), std::move(tris), std::move(flags), h);
}

void write_mesh(const Triangulation& t, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error("cannot write mesh file " + path.string());
  std::fprintf(f, "%d %d\n", t.num_vertices(), t.num_triangles());
  for (int v = 0; v < t.num_vertices(); ++v) {
    const Point p = t.vertices()[static_cast<std::size_t>(v)];
    std::fprintf(f, "%.17g %.17g %d\n", p.x, p.y, t.is_boundary(v) ? 1 : 0);
  }
  for (const auto& [a, b, c] : t.triangles()) std::fprintf(f, "%d %d %d\n", a, b, c);
  if (std::fclose(f) != 0) throw Error("error while writing mesh file " + path.string());
}

}  // namespace eigencert
