#include "eigencert/fem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "eigencert/error.hpp"
#include "eigencert/quadrature.hpp"

namespace eigencert {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct ElementGeometry {
  double area;
  std::array<std::array<double, 2>, 3> grad;  // gradients of the barycentric coordinates
};

ElementGeometry geometry(const Triangulation& t, const TriangleIndices& tri) {
  const auto& v = t.vertices();
  const Point p0 = v[static_cast<std::size_t>(tri[0])];
  const Point p1 = v[static_cast<std::size_t>(tri[1])];
  const Point p2 = v[static_cast<std::size_t>(tri[2])];
  const double twice = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  ElementGeometry g{};
  g.area = 0.5 * twice;
  g.grad[0] = {(p1.y - p2.y) / twice, (p2.x - p1.x) / twice};
  g.grad[1] = {(p2.y - p0.y) / twice, (p0.x - p2.x) / twice};
  g.grad[2] = {(p0.y - p1.y) / twice, (p1.x - p0.x) / twice};
  return g;
}

SparseMatrix from_triplets(int n, const Triplets& trip) {
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

// Deletes eliminated rows/columns; keeps the order of the free dofs.
SparseMatrix restrict_to_free(const SparseMatrix& full, const std::vector<int>& global_to_free, int nfree) {
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(full.nonZeros()));
  for (int r = 0; r < full.outerSize(); ++r) {
    const int fr = global_to_free[static_cast<std::size_t>(r)];
    if (fr < 0) continue;
    for (SparseMatrix::InnerIterator it(full, r); it; ++it) {
      const int fc = global_to_free[static_cast<std::size_t>(it.col())];
      if (fc >= 0) trip.emplace_back(fr, fc, it.value());
    }
  }
  return from_triplets(nfree, trip);
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

AssembledSystem eliminate(ElementKind kind, const FullSystem& full, const std::vector<std::uint8_t>& dirichlet) {
  AssembledSystem sys;
  sys.element = kind;
  sys.global_to_free.assign(dirichlet.size(), -1);
  for (std::size_t g = 0; g < dirichlet.size(); ++g) {
    if (dirichlet[g]) continue;
    sys.global_to_free[g] = static_cast<int>(sys.dof_map.size());
    sys.dof_map.push_back(static_cast<int>(g));
  }
  if (sys.dof_map.empty()) throw EmptySystem("no free degrees of freedom after Dirichlet elimination");
  sys.stiffness = restrict_to_free(full.stiffness, sys.global_to_free, sys.size());
  sys.mass = restrict_to_free(full.mass, sys.global_to_free, sys.size());
  return sys;
}

}  // namespace

FullSystem assemble_p1_full(const Triangulation& t) {
  Triplets k, m;
  k.reserve(t.triangles().size() * 9);
  m.reserve(t.triangles().size() * 9);
  for (const auto& tri : t.triangles()) {
    const auto g = geometry(t, tri);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double kij = g.area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
        const double mij = g.area / 12.0 * (i == j ? 2.0 : 1.0);
        k.emplace_back(tri[i], tri[j], kij);
        m.emplace_back(tri[i], tri[j], mij);
      }
    }
  }
  return {from_triplets(t.num_vertices(), k), from_triplets(t.num_vertices(), m)};
}

AssembledSystem assemble_p1(const Triangulation& t) {
  if (t.num_interior_vertices() == 0) throw EmptySystem("mesh has no interior vertices");
  return eliminate(ElementKind::p1, assemble_p1_full(t), t.boundary_flags());
}

FullSystem assemble_cr_full(const Triangulation& t) {
  const auto& edges = t.edges();
  std::unordered_map<std::uint64_t, int> edge_index;
  edge_index.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) edge_index.emplace(edge_key(edges[e].a, edges[e].b), static_cast<int>(e));

  Triplets k, m;
  k.reserve(t.triangles().size() * 9);
  m.reserve(t.triangles().size() * 3);
  for (const auto& tri : t.triangles()) {
    const auto g = geometry(t, tri);
    // Basis for the edge opposite vertex i is 1 - 2 lambda_i.
    std::array<int, 3> dof{};
    for (int i = 0; i < 3; ++i) dof[i] = edge_index.at(edge_key(tri[(i + 1) % 3], tri[(i + 2) % 3]));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double kij = 4.0 * g.area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
        k.emplace_back(dof[i], dof[j], kij);
      }
      m.emplace_back(dof[i], dof[i], g.area / 3.0);
    }
  }
  const int n = static_cast<int>(edges.size());
  return {from_triplets(n, k), from_triplets(n, m)};
}

AssembledSystem assemble_cr(const Triangulation& t) {
  std::vector<std::uint8_t> dirichlet;
  dirichlet.reserve(t.edges().size());
  for (const auto& e : t.edges()) dirichlet.push_back(e.triangles == 1 ? 1 : 0);
  return eliminate(ElementKind::cr, assemble_cr_full(t), dirichlet);
}

Eigen::VectorXd assemble_p1_load(const Triangulation& t, const AssembledSystem& sys,
                                 const std::function<double(double, double)>& f) {
  if (sys.element != ElementKind::p1) throw InvalidArgument("load assembly expects a P1 system");
  static const TriangleRule rule = gauss_triangle(14);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.size());
  const auto& v = t.vertices();
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    const auto& tri = t.triangles()[static_cast<std::size_t>(ti)];
    const double area = t.triangle_area(ti);
    std::array<double, 3> acc{};
    for (const auto& qp : rule.points) {
      double x = 0.0, y = 0.0;
      for (int k = 0; k < 3; ++k) {
        x += qp.bary[k] * v[static_cast<std::size_t>(tri[k])].x;
        y += qp.bary[k] * v[static_cast<std::size_t>(tri[k])].y;
      }
      const double fw = f(x, y) * qp.weight * area;
      for (int k = 0; k < 3; ++k) acc[k] += fw * qp.bary[k];
    }
    for (int k = 0; k < 3; ++k) {
      const int fr = sys.global_to_free[static_cast<std::size_t>(tri[k])];
      if (fr >= 0) b[fr] += acc[k];
    }
  }
  return b;
}

kernels::CsrView csr_view(const SparseMatrix& a) {
  if (!a.isCompressed()) throw InvalidArgument("CSR view requires a compressed matrix");
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto nnz = static_cast<std::size_t>(a.nonZeros());
  return {static_cast<int>(a.rows()), static_cast<int>(a.cols()),
          std::span<const int>(a.outerIndexPtr(), rows + 1), std::span<const int>(a.innerIndexPtr(), nnz),
          std::span<const double>(a.valuePtr(), nnz)};
}

void apply(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  kernels::csr_spmv(csr_view(a), x, y);
}

Eigen::MatrixXd apply(const SparseMatrix& a, const Eigen::MatrixXd& x) {
  if (x.rows() != a.cols()) throw InvalidArgument("operator/vector dimension mismatch");
  Eigen::MatrixXd y(a.rows(), x.cols());
  const auto view = csr_view(a);
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    kernels::csr_spmv(view, std::span<const double>(x.col(c).data(), static_cast<std::size_t>(x.rows())),
                      std::span<double>(y.col(c).data(), static_cast<std::size_t>(y.rows())));
  return y;
}

// ---------------------------------------------------------------------------
// C_h

ChTable::ChTable(std::map<int, double> values) : values_(std::move(values)) {
  for (const auto& [level, value] : values_)
    if (level < 0 || !(value > 0.0)) throw InvalidArgument("C_h table needs non-negative levels and positive values");
}

ChTable ChTable::dumbbell_reference() {
  return ChTable({{0, 0.0419}, {1, 0.0233}, {2, 0.0118}, {3, 0.00588}, {4, 0.00290}, {5, 0.00155}});
}

ChTable ChTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open C_h table " + path.string(), 0);
  std::map<int, double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    int level = 0;
    double value = 0.0;
    if (!(is >> level)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("expected 'level value'", line_no);
    }
    std::string rest;
    if (!(is >> value) || (is >> rest)) throw ParseError("expected 'level value'", line_no);
    if (!values.emplace(level, value).second) throw ParseError("duplicate level " + std::to_string(level), line_no);
  }
  return ChTable(std::move(values));
}

double ChTable::at(int level) const {
  const auto it = values_.find(level);
  if (it == values_.end()) throw MissingConstant("no C_h value for refinement level " + std::to_string(level));
  return it->second;
}

namespace {

// Leg length when every triangle is an axis-aligned isosceles right triangle
// of the same size, otherwise nullopt.
std::optional<double> uniform_right_triangle_leg(const Triangulation& t) {
  const auto& v = t.vertices();
  std::optional<double> leg;
  for (const auto& tri : t.triangles()) {
    int legs = 0;
    for (int k = 0; k < 3; ++k) {
      const Point a = v[static_cast<std::size_t>(tri[k])];
      const Point b = v[static_cast<std::size_t>(tri[(k + 1) % 3])];
      const double dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
      const double len = std::max(dx, dy);
      if (std::min(dx, dy) > 1e-12 * len) continue;
      if (!leg) leg = len;
      if (std::abs(len - *leg) > 1e-12 * *leg) return std::nullopt;
      ++legs;
    }
    if (legs != 2) return std::nullopt;
  }
  return leg;
}

}  // namespace

double compute_ch(const Triangulation& t, const DomainSpec& domain, std::optional<int> level, const ChTable* table) {
  if (domain.kind == DomainKind::unit_square && !table) {
    const auto leg = uniform_right_triangle_leg(t);
    if (!leg) throw MissingConstant("C_h = 0.493 h only holds for uniform right-triangle meshes of the square");
    return 0.493 * *leg;
  }
  if (!table) throw MissingConstant("this domain needs a C_h table");
  if (!level) throw MissingConstant("C_h lookup needs the refinement level");
  return table->at(*level);
}

}  // namespace eigencert
