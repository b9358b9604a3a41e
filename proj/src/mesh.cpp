#include "eigencert/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

#include "eigencert/error.hpp"

namespace eigencert {

namespace {

double signed_area(Point a, Point b, Point c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return distance(p, {a.x + s * dx, a.y + s * dy});
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

// ---------------------------------------------------------------------------
// DomainSpec

DomainSpec DomainSpec::unit_square() { return {DomainKind::unit_square, {}}; }

DomainSpec DomainSpec::dumbbell() { return {DomainKind::dumbbell, {}}; }

DomainSpec DomainSpec::polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
  return {DomainKind::polygon, std::move(vertices)};
}

std::vector<Point> DomainSpec::boundary() const {
  switch (kind) {
    case DomainKind::unit_square:
      return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    case DomainKind::dumbbell:
      return {{0.0, 0.0},  {1.0, 0.0},  {1.0, 0.49}, {1.1, 0.49}, {1.1, 0.0}, {2.1, 0.0},
              {2.1, 1.0},  {1.1, 1.0},  {1.1, 0.51}, {1.0, 0.51}, {1.0, 1.0}, {0.0, 1.0}};
    case DomainKind::polygon:
      return polygon_vertices;
  }
  return {};
}

double DomainSpec::area() const {
  const auto poly = boundary();
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point p = poly[i], q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

bool DomainSpec::on_boundary(Point p, double tol) const {
  const auto poly = boundary();
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]) <= tol) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Triangulation

std::vector<Edge> audit_edges(int num_vertices, const std::vector<TriangleIndices>& triangles) {
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(triangles.size() * 2);
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e) ++count[edge_key(tri[e], tri[(e + 1) % 3])];

  std::vector<Edge> edges;
  edges.reserve(count.size());
  for (const auto& [key, n] : count) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (n > 2)
      throw ValidationError("edge (" + std::to_string(a) + ", " + std::to_string(b) + ") is shared by " +
                            std::to_string(n) + " triangles");
    if (a < 0 || b >= num_vertices) throw ValidationError("edge references a missing vertex");
    edges.push_back({a, b, n});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
    return l.a != r.a ? l.a < r.a : l.b < r.b;
  });
  return edges;
}

Triangulation::Triangulation(std::vector<Point> vertices, std::vector<TriangleIndices> triangles,
                             std::vector<std::uint8_t> boundary_flags, double h)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary_flags)),
      h_(h) {
  const int nv = num_vertices();
  if (boundary_.size() != vertices_.size()) throw ValidationError("boundary flag count differs from vertex count");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ValidationError("mesh size h must be positive");
  if (triangles_.empty()) throw ValidationError("mesh has no triangles");

  for (int t = 0; t < num_triangles(); ++t) {
    for (int v : triangles_[static_cast<std::size_t>(t)])
      if (v < 0 || v >= nv) throw ValidationError("triangle " + std::to_string(t) + " references vertex out of range");
    if (!(triangle_area(t) > 0.0))
      throw ValidationError("triangle " + std::to_string(t) + " has non-positive area (orientation must be CCW)");
  }

  edges_ = audit_edges(nv, triangles_);

  std::vector<std::uint8_t> on_boundary_edge(vertices_.size(), 0);
  std::vector<std::uint8_t> used(vertices_.size(), 0);
  for (const auto& e : edges_) {
    used[static_cast<std::size_t>(e.a)] = used[static_cast<std::size_t>(e.b)] = 1;
    if (e.triangles == 1) on_boundary_edge[static_cast<std::size_t>(e.a)] = on_boundary_edge[static_cast<std::size_t>(e.b)] = 1;
  }
  for (int v = 0; v < nv; ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (!used[i]) throw ValidationError("vertex " + std::to_string(v) + " is not used by any triangle");
    if ((boundary_[i] != 0) != (on_boundary_edge[i] != 0))
      throw ValidationError("boundary flag of vertex " + std::to_string(v) + " disagrees with the boundary edges");
  }
}

int Triangulation::num_interior_vertices() const {
  return static_cast<int>(std::count(boundary_.begin(), boundary_.end(), std::uint8_t{0}));
}

double Triangulation::triangle_area(int t) const {
  const auto& tri = triangles_[static_cast<std::size_t>(t)];
  return signed_area(vertices_[static_cast<std::size_t>(tri[0])], vertices_[static_cast<std::size_t>(tri[1])],
                     vertices_[static_cast<std::size_t>(tri[2])]);
}

double Triangulation::total_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += triangle_area(t);
  return a;
}

double Triangulation::longest_edge() const {
  double h = 0.0;
  for (const auto& e : edges_)
    h = std::max(h, distance(vertices_[static_cast<std::size_t>(e.a)], vertices_[static_cast<std::size_t>(e.b)]));
  return h;
}

double Triangulation::min_angle_degrees() const {
  double m = 180.0;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const Point p = vertices_[static_cast<std::size_t>(tri[k])];
      const Point q = vertices_[static_cast<std::size_t>(tri[(k + 1) % 3])];
      const Point r = vertices_[static_cast<std::size_t>(tri[(k + 2) % 3])];
      const double ux = q.x - p.x, uy = q.y - p.y, vx = r.x - p.x, vy = r.y - p.y;
      const double ang = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
      m = std::min(m, ang * 180.0 / std::numbers::pi);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Generators

Triangulation generate_uniform_square_mesh(int n) {
  if (n < 1) throw InvalidArgument("square mesh needs n >= 1 subdivisions, got " + std::to_string(n));
  const int stride = n + 1;
  std::vector<Point> verts;
  std::vector<std::uint8_t> flags;
  verts.reserve(static_cast<std::size_t>(stride * stride));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      flags.push_back(i == 0 || j == 0 || i == n || j == n ? 1 : 0);
    }
  }
  std::vector<TriangleIndices> tris;
  tris.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * stride + i, v10 = v00 + 1, v01 = v00 + stride, v11 = v01 + 1;
      // Union-jack pattern: diagonals alternate so that for even n the mesh
      // keeps every symmetry of the square.
      if ((i + j) % 2 == 0) {
        tris.push_back({v00, v10, v11});
        tris.push_back({v00, v11, v01});
      } else {
        tris.push_back({v00, v10, v01});
        tris.push_back({v10, v11, v01});
      }
    }
  }
  return Triangulation(std::move(verts), std::move(tris), std::move(flags), 1.0 / n);
}

namespace {

// Axis-aligned cell in integer units of 1/200.
struct Cell {
  int x0, y0, x1, y1;
};

// Cells graded toward the corner (200, 100) of the quadrant [100,200]x[0,100],
// where the bar attaches. Smallest cells are 4 units (0.02).
void lower_right_quadrant(std::vector<Cell>& out) {
  const int xs[] = {100, 136, 168, 200};
  const int ys[] = {0, 36, 68, 100};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      if (!(i == 2 && j == 2)) out.push_back({xs[i], ys[j], xs[i + 1], ys[j + 1]});
  int size = 32;
  while (size > 4) {
    const int half = size / 2;
    const int x0 = 200 - size, y0 = 100 - size;
    out.push_back({x0, y0, x0 + half, y0 + half});
    out.push_back({x0 + half, y0, 200, y0 + half});
    out.push_back({x0, y0 + half, x0 + half, 100});
    size = half;
  }
  out.push_back({196, 96, 200, 100});
}

std::vector<Cell> dumbbell_cells() {
  std::vector<Cell> left;
  left.push_back({0, 0, 100, 100});
  left.push_back({0, 100, 100, 200});
  std::vector<Cell> quad;
  lower_right_quadrant(quad);
  for (const auto& c : quad) {
    left.push_back(c);
    left.push_back({c.x0, 200 - c.y1, c.x1, 200 - c.y0});  // mirror in y
  }
  std::vector<Cell> cells = left;
  for (const auto& c : left) cells.push_back({420 - c.x1, c.y0, 420 - c.x0, c.y1});  // mirror in x
  for (int i = 0; i < 5; ++i) cells.push_back({200 + 4 * i, 98, 204 + 4 * i, 102});
  return cells;
}

}  // namespace

Triangulation generate_dumbbell_mesh() {
  const std::vector<Cell> cells = dumbbell_cells();

  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> ipts;
  auto vertex = [&](int x, int y) {
    auto [it, inserted] = index.try_emplace({x, y}, static_cast<int>(ipts.size()));
    if (inserted) ipts.emplace_back(x, y);
    return it->second;
  };
  for (const auto& c : cells) {
    vertex(c.x0, c.y0);
    vertex(c.x1, c.y0);
    vertex(c.x1, c.y1);
    vertex(c.x0, c.y1);
  }

  std::vector<TriangleIndices> tris;
  for (const auto& c : cells) {
    // Boundary vertices of the cell in counterclockwise order starting at (x0,y0).
    std::vector<std::pair<int, int>> bottom, right, top, left;
    for (const auto& [x, y] : ipts) {
      const bool inx = x >= c.x0 && x <= c.x1, iny = y >= c.y0 && y <= c.y1;
      if (y == c.y0 && inx && x < c.x1) bottom.emplace_back(x, y);
      else if (x == c.x1 && iny && y < c.y1) right.emplace_back(x, y);
      else if (y == c.y1 && inx && x > c.x0) top.emplace_back(x, y);
      else if (x == c.x0 && iny && y > c.y0) left.emplace_back(x, y);
    }
    std::sort(bottom.begin(), bottom.end());
    std::sort(right.begin(), right.end(), [](auto a, auto b) { return a.second < b.second; });
    std::sort(top.begin(), top.end(), [](auto a, auto b) { return a.first > b.first; });
    std::sort(left.begin(), left.end(), [](auto a, auto b) { return a.second > b.second; });
    std::vector<int> ring;
    for (const auto* side : {&bottom, &right, &top, &left})
      for (const auto& [x, y] : *side) ring.push_back(index.at({x, y}));

    if (ring.size() == 4) {
      tris.push_back({ring[0], ring[1], ring[2]});
      tris.push_back({ring[0], ring[2], ring[3]});
    } else {
      const int centre = vertex((c.x0 + c.x1) / 2, (c.y0 + c.y1) / 2);
      for (std::size_t k = 0; k < ring.size(); ++k) tris.push_back({centre, ring[k], ring[(k + 1) % ring.size()]});
    }
  }

  std::vector<Point> verts;
  verts.reserve(ipts.size());
  for (const auto& [x, y] : ipts) verts.push_back({x / 200.0, y / 200.0});

  auto edges = audit_edges(static_cast<int>(verts.size()), tris);
  std::vector<std::uint8_t> flags(verts.size(), 0);
  double h = 0.0;
  for (const auto& e : edges) {
    if (e.triangles == 1) flags[static_cast<std::size_t>(e.a)] = flags[static_cast<std::size_t>(e.b)] = 1;
    h = std::max(h, distance(verts[static_cast<std::size_t>(e.a)], verts[static_cast<std::size_t>(e.b)]));
  }
  return Triangulation(std::move(verts), std::move(tris), std::move(flags), h);
}

Triangulation refine_uniform(const Triangulation& t) {
  std::vector<Point> verts = t.vertices();
  std::vector<std::uint8_t> flags = t.boundary_flags();
  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(t.edges().size());
  for (const auto& e : t.edges()) {
    const Point a = verts[static_cast<std::size_t>(e.a)], b = verts[static_cast<std::size_t>(e.b)];
    midpoint.emplace(edge_key(e.a, e.b), static_cast<int>(verts.size()));
    verts.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    flags.push_back(e.triangles == 1 ? 1 : 0);
  }
  std::vector<TriangleIndices> tris;
  tris.reserve(t.triangles().size() * 4);
  for (const auto& [a, b, c] : t.triangles()) {
    const int ab = midpoint.at(edge_key(a, b)), bc = midpoint.at(edge_key(b, c)), ca = midpoint.at(edge_key(c, a));
    tris.push_back({a, ab, ca});
    tris.push_back({ab, b, bc});
    tris.push_back({ca, bc, c});
    tris.push_back({ab, bc, ca});
  }
  return Triangulation(std::move(verts), std::move(tris), std::move(flags), 0.5 * t.h());
}

Triangulation refine_uniform(const Triangulation& t, int times) {
  if (times < 0) throw InvalidArgument("refinement count must be non-negative");
  Triangulation out = t;
  for (int i = 0; i < times; ++i) out = refine_uniform(out);
  return out;
}

}  // namespace eigencert
