#include "eigencert/oracle.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "eigencert/error.hpp"
#include "eigencert/subspace.hpp"

namespace eigencert {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

// Maximizes f over a box by a coarse grid followed by zoomed local grids.
template <int D, typename F>
double grid_maximize(F&& f, std::array<double, D> lo, std::array<double, D> hi, int per_axis) {
  std::array<double, D> best_x{};
  double best = -1.0;
  auto sweep = [&](const std::array<double, D>& a, const std::array<double, D>& b, int n) {
    std::array<int, D> idx{};
    while (true) {
      std::array<double, D> x{};
      for (int d = 0; d < D; ++d) x[d] = n == 1 ? a[d] : a[d] + (b[d] - a[d]) * idx[d] / (n - 1);
      const double v = f(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
      int d = 0;
      while (d < D && ++idx[d] == n) idx[d++] = 0;
      if (d == D) break;
    }
  };
  sweep(lo, hi, per_axis);
  std::array<double, D> step{};
  for (int d = 0; d < D; ++d) step[d] = (hi[d] - lo[d]) / std::max(1, per_axis - 1);
  for (int pass = 0; pass < 6; ++pass) {
    std::array<double, D> a{}, b{};
    for (int d = 0; d < D; ++d) {
      a[d] = best_x[d] - step[d];
      b[d] = best_x[d] + step[d];
      step[d] /= 10.0;
    }
    sweep(a, b, 21);
  }
  return best;
}

// (v, u) for each mode by tensor Gauss quadrature over the unit square.
std::vector<double> mode_coefficients(const std::function<double(double, double)>& v,
                                      const std::vector<ExactEigenpair>& modes, int points) {
  const auto g = gauss_legendre(points);
  std::vector<double> coef(modes.size(), 0.0);
  for (const auto& [x, wx] : g)
    for (const auto& [y, wy] : g) {
      const double fv = v(x, y) * wx * wy;
      for (std::size_t m = 0; m < modes.size(); ++m) coef[m] += fv * modes[m].value(x, y);
    }
  return coef;
}

}  // namespace

ExactEigenpair ExactEigenpair::mode(int i, int j) {
  if (i < 0 || j < 0) throw InvalidArgument("mode indices must be non-negative");
  return {i, j, (i * i + j * j) * pi * pi};
}

double ExactEigenpair::value(double x, double y) const { return std::sin(i * pi * x) * std::sin(j * pi * y); }

std::array<double, 2> ExactEigenpair::gradient(double x, double y) const {
  return {i * pi * std::cos(i * pi * x) * std::sin(j * pi * y), j * pi * std::sin(i * pi * x) * std::cos(j * pi * y)};
}

double ExactEigenpair::l2_norm_sq() const { return i == 0 || j == 0 ? 0.0 : 0.25; }

std::vector<ExactEigenpair> exact_spectrum_square(int count) {
  if (count < 1) throw InvalidArgument("count must be positive");
  std::vector<ExactEigenpair> all;
  const int limit = count + 1;
  for (int i = 1; i <= limit; ++i)
    for (int j = 1; j <= limit; ++j) all.push_back(ExactEigenpair::mode(i, j));
  std::sort(all.begin(), all.end(), [](const ExactEigenpair& a, const ExactEigenpair& b) {
    return std::make_tuple(a.i * a.i + a.j * a.j, a.i, a.j) < std::make_tuple(b.i * b.i + b.j * b.j, b.i, b.j);
  });
  all.resize(static_cast<std::size_t>(count));
  return all;
}

ProjectedMode project_exact_to_mesh(const ExactEigenpair& pair, const Triangulation& t, const AssembledSystem& sys,
                                    const TriangleRule& rule) {
  if (sys.element != ElementKind::p1) throw InvalidArgument("projection expects a P1 system");
  ProjectedMode out{Eigen::VectorXd::Zero(sys.size()), Eigen::VectorXd::Zero(sys.size())};
  const auto& v = t.vertices();
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    const auto& tri = t.triangles()[static_cast<std::size_t>(ti)];
    const Point p0 = v[static_cast<std::size_t>(tri[0])];
    const Point p1 = v[static_cast<std::size_t>(tri[1])];
    const Point p2 = v[static_cast<std::size_t>(tri[2])];
    const double twice = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    const double area = 0.5 * twice;
    const std::array<std::array<double, 2>, 3> grad{{{(p1.y - p2.y) / twice, (p2.x - p1.x) / twice},
                                                      {(p2.y - p0.y) / twice, (p0.x - p2.x) / twice},
                                                      {(p0.y - p1.y) / twice, (p1.x - p0.x) / twice}}};
    std::array<double, 3> l2{};
    std::array<double, 2> gsum{};
    for (const auto& qp : rule.points) {
      const double x = qp.bary[0] * p0.x + qp.bary[1] * p1.x + qp.bary[2] * p2.x;
      const double y = qp.bary[0] * p0.y + qp.bary[1] * p1.y + qp.bary[2] * p2.y;
      const double w = qp.weight * area;
      const double u = pair.value(x, y);
      for (int k = 0; k < 3; ++k) l2[k] += w * u * qp.bary[k];
      const auto g = pair.gradient(x, y);
      gsum[0] += w * g[0];
      gsum[1] += w * g[1];
    }
    for (int k = 0; k < 3; ++k) {
      const int f = sys.global_to_free[static_cast<std::size_t>(tri[k])];
      if (f < 0) continue;
      out.l2[f] += l2[k];
      out.energy[f] += gsum[0] * grad[k][0] + gsum[1] * grad[k][1];
    }
  }
  return out;
}

ExactDistances exact_directed_distance_square(const Spectrum& spec, const Triangulation& t, const AssembledSystem& sys,
                                              int first, int last) {
  if (first < 1 || last < first || last > spec.count()) throw InvalidArgument("cluster outside the spectrum");
  const auto modes = exact_spectrum_square(last);
  const int m = last - first + 1;
  const Eigen::MatrixXd v = spec.eigenvectors.middleCols(first - 1, m);

  Eigen::MatrixXd pl2(sys.size(), m), pen(sys.size(), m);
  Eigen::MatrixXd g_l2 = Eigen::MatrixXd::Zero(m, m), g_en = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    const auto& mode = modes[static_cast<std::size_t>(first - 1 + a)];
    const auto p = project_exact_to_mesh(mode, t, sys);
    pl2.col(a) = p.l2;
    pen.col(a) = p.energy;
    // Distinct modes are orthogonal in both inner products.
    g_l2(a, a) = mode.l2_norm_sq();
    g_en(a, a) = mode.lambda * mode.l2_norm_sq();
  }
  const GramTriple energy{pen.transpose() * v, g_en,
                          [&] {
                            Eigen::MatrixXd h = v.transpose() * apply(sys.stiffness, v);
                            return Eigen::MatrixXd(0.5 * (h + h.transpose()));
                          }()};
  const GramTriple l2{pl2.transpose() * v, g_l2, [&] {
                        Eigen::MatrixXd h = v.transpose() * apply(sys.mass, v);
                        return Eigen::MatrixXd(0.5 * (h + h.transpose()));
                      }()};
  return {directed_distance_from_gram(energy), directed_distance_from_gram(l2)};
}

std::vector<double> parseval_residuals(const std::function<double(double, double)>& v, double norm_sq, int modes,
                                       int points) {
  const auto ms = exact_spectrum_square(modes);
  const auto coef = mode_coefficients(v, ms, points);
  std::vector<double> out;
  double acc = 0.0;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    acc += coef[m] * coef[m] / ms[m].l2_norm_sq();
    out.push_back(norm_sq - acc);
  }
  return out;
}

std::vector<double> parseval_energy_residuals(const std::function<double(double, double)>& v, double grad_norm_sq,
                                              int modes, int points) {
  const auto ms = exact_spectrum_square(modes);
  const auto coef = mode_coefficients(v, ms, points);
  std::vector<double> out;
  double acc = 0.0;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    // (grad v, grad u) = lambda (v, u) for u vanishing on the boundary.
    acc += ms[m].lambda * coef[m] * coef[m] / ms[m].l2_norm_sq();
    out.push_back(grad_norm_sq - acc);
  }
  return out;
}

double brute_force_subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int resolution) {
  if (a.cols() < 1 || a.cols() > 3 || b.cols() < 1 || b.cols() > 3)
    throw InvalidArgument("brute-force distance supports dimensions 1 to 3");
  if (a.rows() != b.rows()) throw InvalidArgument("bases live in different spaces");
  if (resolution < 2) throw InvalidArgument("resolution must be at least 2");
  const Eigen::MatrixXd qa = orthonormal_columns(a);
  const Eigen::MatrixXd qb = orthonormal_columns(b);
  auto dist = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd v = qa * c;
    return (v - qb * (qb.transpose() * v)).norm();
  };
  double d = 0.0;
  switch (a.cols()) {
    case 1:
      d = dist(Eigen::VectorXd::Ones(1));
      break;
    case 2:
      d = grid_maximize<1>(
          [&](const std::array<double, 1>& t) {
            Eigen::VectorXd c(2);
            c << std::cos(t[0]), std::sin(t[0]);
            return dist(c);
          },
          {0.0}, {pi}, resolution);
      break;
    default: {
      const int per_axis = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(resolution))));
      d = grid_maximize<2>(
          [&](const std::array<double, 2>& t) {
            Eigen::VectorXd c(3);
            c << std::sin(t[0]) * std::cos(t[1]), std::sin(t[0]) * std::sin(t[1]), std::cos(t[0]);
            return dist(c);
          },
          {0.0, 0.0}, {pi / 2, 2 * pi}, per_axis);
    }
  }
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace eigencert
