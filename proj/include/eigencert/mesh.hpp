#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace eigencert {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using TriangleIndices = std::array<int, 3>;

enum class DomainKind { unit_square, dumbbell, polygon };

/// Polygonal domain description. The dumbbell is two unit squares,
/// [0,1]x[0,1] and [1.1,2.1]x[0,1], joined by the bar [1,1.1]x[0.49,0.51].
struct DomainSpec {
  DomainKind kind = DomainKind::unit_square;
  std::vector<Point> polygon_vertices;  // counterclockwise, only for `polygon`

  static DomainSpec unit_square();
  static DomainSpec dumbbell();
  static DomainSpec polygon(std::vector<Point> vertices);

  /// Counterclockwise boundary polygon for any kind.
  std::vector<Point> boundary() const;
  double area() const;
  /// Whether p lies on the boundary polygon within `tol`.
  bool on_boundary(Point p, double tol = 1e-12) const;
};

struct Edge {
  int a = 0;  // a < b
  int b = 0;
  int triangles = 0;  // incident triangle count
};

/// Conforming 2D triangle mesh. Validated on construction and immutable after.
class Triangulation {
 public:
  /// Throws ValidationError on non-positive areas, non-conforming edges,
  /// or boundary flags that disagree with the boundary edges.
  Triangulation(std::vector<Point> vertices, std::vector<TriangleIndices> triangles,
                std::vector<std::uint8_t> boundary_flags, double h);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<TriangleIndices>& triangles() const noexcept { return triangles_; }
  const std::vector<std::uint8_t>& boundary_flags() const noexcept { return boundary_; }
  bool is_boundary(int v) const { return boundary_[static_cast<std::size_t>(v)] != 0; }
  double h() const noexcept { return h_; }

  int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }
  int num_interior_vertices() const;

  double triangle_area(int t) const;
  double total_area() const;
  double longest_edge() const;
  double min_angle_degrees() const;

  /// Unique edges with incidence counts, sorted by (a, b).
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  std::vector<Point> vertices_;
  std::vector<TriangleIndices> triangles_;
  std::vector<std::uint8_t> boundary_;
  double h_;
  std::vector<Edge> edges_;
};

/// Edge-incidence audit; throws ValidationError when an edge is used by more
/// than two triangles.
std::vector<Edge> audit_edges(int num_vertices, const std::vector<TriangleIndices>& triangles);

/// (n+1)^2 vertices, 2n^2 isosceles right triangles in a union-jack pattern
/// (cell (i,j) is cut along (i,j)-(i+1,j+1) when i+j is even), h = 1/n (leg length).
Triangulation generate_uniform_square_mesh(int n);

/// Conforming initial mesh of the dumbbell built from graded axis-aligned
/// cells; min angle is at least 15 degrees. h is the longest edge.
Triangulation generate_dumbbell_mesh();

/// Red refinement: each triangle split into four congruent children through
/// its edge midpoints. h halves.
Triangulation refine_uniform(const Triangulation& t);

Triangulation refine_uniform(const Triangulation& t, int times);

Triangulation read_mesh(const std::filesystem::path& path);
void write_mesh(const Triangulation& t, const std::filesystem::path& path);

}  // namespace eigencert
