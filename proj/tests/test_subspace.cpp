#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "eigencert/error.hpp"
#include "eigencert/subspace.hpp"

using namespace eigencert;
using std::numbers::pi;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

Eigen::MatrixXd unit_2d(double angle) {
  Eigen::MatrixXd v(2, 1);
  v << std::cos(angle), std::sin(angle);
  return v;
}

}  // namespace

TEST_CASE("Gram triple trivial cases") {
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(4, 1), e2 = Eigen::MatrixXd::Zero(4, 1);
  e1(0, 0) = 1.0;
  e2(1, 0) = 1.0;
  const auto same = gram_triple(e1, e1);
  CHECK(same.F(0, 0) == 1.0);
  CHECK(same.G(0, 0) == 1.0);
  CHECK(same.H(0, 0) == 1.0);
  CHECK(epsilon_hat_sq(same) == doctest::Approx(1.0));
  const auto orth = gram_triple(e1, e2);
  CHECK(orth.F(0, 0) == 0.0);
  CHECK(epsilon_hat_sq(orth) == 0.0);
  CHECK_THROWS_AS(gram_triple(e1, Eigen::MatrixXd::Zero(3, 1)), InvalidArgument);
  CHECK_THROWS_AS(gram_triple(Eigen::MatrixXd(4, 0), e1), InvalidArgument);
  CHECK_THROWS_AS(epsilon_hat_sq(gram_triple(Eigen::MatrixXd::Zero(4, 1), e1)), IllConditionedBasis);
}

TEST_CASE("Gram triple entries match direct products through the operator") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd l = random_matrix(6, 6, rng);
  const Eigen::MatrixXd spd = l * l.transpose() + 6.0 * Eigen::MatrixXd::Identity(6, 6);
  const SparseMatrix op = spd.sparseView();
  const Eigen::MatrixXd a = random_matrix(6, 2, rng), b = random_matrix(6, 3, rng);
  const auto gt = gram_triple(a, b, InnerProduct(op));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(gt.F(i, j) - a.col(i).dot(spd * b.col(j))) <= 1e-13 * 100);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(gt.G(i, j) - a.col(i).dot(spd * a.col(j))) <= 1e-13 * 100);
  CHECK((gt.H - gt.H.transpose()).norm() == 0.0);
}

TEST_CASE("one-dimensional spans at an angle") {
  for (double alpha : {pi / 6, pi / 4, pi / 3}) {
    const auto a = unit_2d(0.0), b = unit_2d(alpha);
    CHECK(std::abs(epsilon_hat_sq(gram_triple(a, b)) - std::cos(alpha) * std::cos(alpha)) <= 1e-12);
    CHECK(std::abs(directed_distance_exact(a, b) - std::sin(alpha)) <= 1e-12);
    CHECK(std::abs(directed_distance_from_gram(gram_triple(3.0 * a, 0.5 * b)) - std::sin(alpha)) <= 1e-12);
  }
}

TEST_CASE("epsilon_hat_sq of a basis with itself is one") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd a = random_matrix(8, 1 + t % 4, rng);
    CHECK(epsilon_hat_sq(gram_triple(a, a)) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Gershgorin estimates") {
  CHECK(epsilon_hat_sq_upper(0.0, 0.0, 0.0) == 0.0);
  CHECK(epsilon_hat_sq_upper(0.01, 0.1, 0.1) == doctest::Approx(0.012345679012345678).epsilon(1e-15));
  CHECK_THROWS_AS(epsilon_hat_sq_upper(0.01, 1.0, 0.1), ConditionViolated);
  CHECK_THROWS_AS(epsilon_hat_sq_upper(Etas{0.01, 0.1, 1.5}), ConditionViolated);

  GramTriple diag{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  diag.F(0, 0) = std::sqrt(0.3);
  diag.F(1, 1) = std::sqrt(0.2);
  const Etas e = gershgorin_etas(diag);
  CHECK(e.G == 0.0);
  CHECK(e.H == 0.0);
  CHECK(e.F >= 0.3);
  CHECK(e.F == doctest::Approx(0.3).epsilon(1e-14));

  std::mt19937_64 rng(13);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 6;
    const Eigen::MatrixXd r = random_matrix(n, n, rng);
    const Eigen::MatrixXd s = 0.5 * (r + r.transpose());
    const double exact = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().cwiseAbs().maxCoeff();
    CHECK(gershgorin_radius(s) >= exact * (1 - 1e-14));
  }
}

TEST_CASE("Gershgorin upper bound dominates near-orthonormal instances") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 12, m = 1 + t % 3, mp = 1 + (t / 3) % 3;
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(n, n, rng)).householderQ();
    const Eigen::MatrixXd a = q.leftCols(m) + 0.02 * random_matrix(n, m, rng);
    const Eigen::MatrixXd b = q.middleCols(m, mp) + 0.02 * random_matrix(n, mp, rng);
    const auto gt = gram_triple(a, b);
    const Etas e = gershgorin_etas(gt);
    if (!(e.G < 1.0 && e.H < 1.0)) continue;
    ++checked;
    CHECK(epsilon_hat_sq_upper(e) >= epsilon_hat_sq(gt) * (1 - 1e-12));
  }
  CHECK(checked > 900);
}

TEST_CASE("directed distance properties") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const Eigen::MatrixXd a = random_matrix(7, 2, rng), b = random_matrix(7, 2, rng);
    const double ab = directed_distance_exact(a, b), ba = directed_distance_exact(b, a);
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(std::abs(directed_distance_from_gram(gram_triple(a, b)) - ab) <= 1e-12);
    CHECK(directed_distance_exact(a, a) <= 1e-12);
  }
  const Eigen::MatrixXd big = random_matrix(7, 3, rng), small = random_matrix(7, 1, rng);
  CHECK(directed_distance_from_gram(gram_triple(big, small)) == 1.0);
  CHECK(directed_distance_exact(small, big) < 1.0);
}

TEST_CASE("pair distance from delta") {
  CHECK(pair_distance_from_delta(1, 1, 0) == 0.0);
  CHECK(pair_distance_from_delta(1, 1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(pair_distance_from_delta(1, 1, 0.01) - 0.01) <= 1e-6);
  CHECK_THROWS_AS(pair_distance_from_delta(1, 1, 1.5), InvalidArgument);
  CHECK_THROWS_AS(pair_distance_from_delta(1, 1, -0.1), InvalidArgument);
}
