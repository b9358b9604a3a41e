#include <doctest.h>

#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>

#include "eigencert/error.hpp"
#include "eigencert/fem.hpp"
#include "eigencert/spectra.hpp"
#include "test_util.hpp"

using namespace eigencert;
using std::numbers::pi;

namespace {

double dense_sum(const SparseMatrix& a) {
  double s = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) s += it.value();
  return s;
}

// ||grad u||^2 for -Laplace u = 1 on the unit square from its sine series.
double energy_of_unit_load() {
  double s = 0.0;
  for (int i = 1; i < 4000; i += 2)
    for (int j = 1; j < 4000; j += 2) s += 64.0 / (std::pow(pi, 6) * i * i * j * j * (i * i + j * j));
  return s;
}

}  // namespace

TEST_CASE("n=2 square: one interior dof") {
  const auto t = generate_uniform_square_mesh(2);
  const auto sys = assemble_p1(t);
  REQUIRE(sys.size() == 1);
  CHECK(sys.stiffness.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  // Eight triangles of area 1/8 each contribute area/6 to the diagonal.
  CHECK(sys.mass.coeff(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const auto full = assemble_p1_full(t);
  const int centre = sys.dof_map[0];
  CHECK(Eigen::RowVectorXd(full.mass.row(centre)).sum() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(Eigen::RowVectorXd(full.stiffness.row(centre)).sum() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("full P1 matrices: constants are in the kernel, total mass is the area") {
  for (const auto& t : {generate_uniform_square_mesh(7), refine_uniform(generate_dumbbell_mesh())}) {
    const auto full = assemble_p1_full(t);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(t.num_vertices());
    CHECK((full.stiffness * ones).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(dense_sum(full.mass) == doctest::Approx(t.total_area()).epsilon(1e-13));
    CHECK(SparseMatrix(full.stiffness - SparseMatrix(full.stiffness.transpose())).norm() <= 1e-13);
  }
}

TEST_CASE("Dirichlet elimination keeps interior vertices only") {
  const auto t = generate_uniform_square_mesh(6);
  const auto sys = assemble_p1(t);
  CHECK(sys.size() == 25);
  for (int k = 0; k < sys.size(); ++k) {
    CHECK_FALSE(t.is_boundary(sys.dof_map[static_cast<std::size_t>(k)]));
    CHECK(sys.global_to_free[static_cast<std::size_t>(sys.dof_map[static_cast<std::size_t>(k)])] == k);
  }
  CHECK_THROWS_AS(assemble_p1(generate_uniform_square_mesh(1)), EmptySystem);
}

TEST_CASE("Crouzeix-Raviart mass is diagonal with area/3 per incident triangle") {
  const auto t = generate_uniform_square_mesh(4);
  const auto full = assemble_cr_full(t);
  const double area = 1.0 / 32.0;
  for (int k = 0; k < full.mass.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(full.mass, k); it; ++it) {
      CHECK(it.row() == it.col());
      const int incident = t.edges()[static_cast<std::size_t>(it.row())].triangles;
      CHECK(it.value() == doctest::Approx(incident * area / 3.0).epsilon(1e-14));
    }
  const auto cr = assemble_cr(t);
  CHECK(cr.size() == static_cast<int>(t.edges().size()) - 16);
}

TEST_CASE("Crouzeix-Raviart first eigenvalue lies below 2 pi^2") {
  const auto cr = assemble_cr(generate_uniform_square_mesh(16));
  const auto spec = solve_generalized(cr, 1);
  CHECK(spec.value(1) < 2 * pi * pi);
  CHECK(spec.value(1) > 2 * pi * pi - 1.0);
}

TEST_CASE("Galerkin solve with a sine load approximates the exact energy") {
  const auto f = [](double x, double y) { return 2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
  double previous = 1.0;
  for (int n : {8, 16, 32}) {
    const auto t = generate_uniform_square_mesh(n);
    const auto sys = assemble_p1(t);
    const Eigen::VectorXd load = assemble_p1_load(t, sys, f);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.stiffness);
    const Eigen::VectorXd x = ldlt.solve(load);
    CHECK((sys.stiffness * x - load).norm() <= 1e-12 * load.norm());
    // Galerkin orthogonality: |u - u_h|_1^2 = |u|_1^2 - |u_h|_1^2.
    const double err_sq = pi * pi / 2 - load.dot(x);
    CHECK(err_sq >= 0.0);
    const double ch = compute_ch(t, DomainSpec::unit_square());
    CHECK(std::sqrt(err_sq) <= ch * pi * pi);
    CHECK(err_sq < previous);
    previous = err_sq;
  }
}

TEST_CASE("C_h bounds the projection error of the unit load") {
  const double exact = energy_of_unit_load();
  for (int n : {4, 8, 16}) {
    const auto t = generate_uniform_square_mesh(n);
    const auto sys = assemble_p1(t);
    const Eigen::VectorXd load = assemble_p1_load(t, sys, [](double, double) { return 1.0; });
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.stiffness);
    const double err_sq = exact - load.dot(ldlt.solve(load));
    CHECK(err_sq >= -1e-9);
    CHECK(std::sqrt(std::max(err_sq, 0.0)) <= compute_ch(t, DomainSpec::unit_square()) * 1.0);
  }
}

TEST_CASE("C_h lookup") {
  const auto square = generate_uniform_square_mesh(16);
  CHECK(compute_ch(square, DomainSpec::unit_square()) == doctest::Approx(0.493 / 16));
  const auto table = ChTable::dumbbell_reference();
  CHECK(table.at(0) == 0.0419);
  CHECK(table.at(3) == 0.00588);
  CHECK(table.at(5) == 0.00155);
  CHECK_THROWS_AS(table.at(6), MissingConstant);
  const auto dumbbell = generate_dumbbell_mesh();
  CHECK(compute_ch(dumbbell, DomainSpec::dumbbell(), 0, &table) == 0.0419);
  CHECK_THROWS_AS(compute_ch(dumbbell, DomainSpec::dumbbell()), MissingConstant);
  CHECK_THROWS_AS(compute_ch(dumbbell, DomainSpec::dumbbell(), std::nullopt, &table), MissingConstant);
  CHECK_THROWS_AS(compute_ch(refine_uniform(generate_dumbbell_mesh()), DomainSpec::unit_square()), MissingConstant);
}

TEST_CASE("C_h table file matches the built-in reference") {
  const auto file = ChTable::read(testutil::source_dir() / "data" / "dumbbell_ch.txt");
  CHECK(file.values() == ChTable::dumbbell_reference().values());
  const auto dir = testutil::scratch("ch_table");
  CHECK_THROWS_AS(ChTable::read(testutil::write_file(dir / "bad.txt", "0 0.1\n1 abc\n")), ParseError);
  CHECK_THROWS_AS(ChTable::read(dir / "missing.txt"), Error);
}

TEST_CASE("SIMD apply matches Eigen") {
  const auto sys = assemble_p1(generate_uniform_square_mesh(9));
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(sys.size(), 3);
  CHECK((apply(sys.stiffness, x) - sys.stiffness * x).norm() <= 1e-12 * x.norm());
}
