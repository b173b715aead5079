#include <doctest.h>

#include <Eigen/SVD>

#include "fastkm/bench/problems.hpp"
#include "fastkm/operators.hpp"
#include "test_util.hpp"

using namespace fastkm;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("dot") {
  CHECK(dot(vec({1, 0}), vec({0, 1})) == 0.0);
  CHECK(dot(vec({2, 3}), vec({2, 3})) == 13.0);
  CHECK(dot(vec({1, 1, 1}), vec({1, 2, 3})) == 6.0);
  CHECK_THROWS_AS(dot(vec({1, 2}), vec({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("norm") {
  CHECK(norm(vec({0, 0, 0})) == 0.0);
  CHECK(norm(vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm(Vector::Unit(7, 3)) == 1.0);
}

TEST_CASE("estimate_operator_norm") {
  SUBCASE("identity") {
    CHECK(estimate_operator_norm(dense_map(Matrix::Identity(4, 4)), 50, 1) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("diagonal") {
    Matrix D = Vector(vec({1, 2, 5})).asDiagonal();
    CHECK(estimate_operator_norm(dense_map(D), 100, 2) == doctest::Approx(5.0).epsilon(1e-8));
  }
  SUBCASE("zero map") { CHECK(estimate_operator_norm(dense_map(Matrix::Zero(3, 3)), 10, 3) == 0.0); }
  SUBCASE("grid divergence vs dense SVD") {
    LinearMap Div = bench::build_div(3);
    Matrix D = to_dense(Div);
    Eigen::JacobiSVD<Matrix> svd(D);
    const double sigma1 = svd.singularValues()[0];
    CHECK(estimate_operator_norm(Div, 2000, 4) == doctest::Approx(sigma1).epsilon(1e-6));
  }
  SUBCASE("monotone in iters") {
    std::mt19937_64 rng(5);
    Matrix A(6, 6);
    for (int i = 0; i < 6; ++i) A.col(i) = testutil::random_vec(rng, 6);
    LinearMap L = dense_map(A);
    double prev = 0.0;
    for (int iters : {1, 2, 5, 10, 50}) {
      double est = estimate_operator_norm(L, iters, 42);
      CHECK(est >= prev - 1e-13);
      prev = est;
    }
    Eigen::JacobiSVD<Matrix> svd(A);
    CHECK(prev <= svd.singularValues()[0] + 1e-12);
  }
  CHECK_THROWS_AS(estimate_operator_norm(dense_map(Matrix::Identity(2, 2)), 0, 0),
                  std::invalid_argument);
}

TEST_CASE("soft_threshold") {
  const Vector v = vec({3, -2, 0.5});
  CHECK((soft_threshold(v, 1.0) - vec({2, -1, 0})).norm() == 0.0);
  CHECK((soft_threshold(v, 0.0) - v).norm() == 0.0);
  CHECK(soft_threshold(Vector::Zero(4), 2.0).norm() == 0.0);
  CHECK_THROWS_AS(soft_threshold(v, -0.1), std::invalid_argument);
}

TEST_CASE("group_soft_threshold") {
  Matrix row(1, 2);
  row << 3, 4;
  CHECK(group_soft_threshold(row, 5.0).norm() == 0.0);
  Matrix shrunk = group_soft_threshold(row, 2.5);
  CHECK(shrunk(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(shrunk(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
  std::mt19937_64 rng(7);
  Matrix rows(5, 2);
  for (int i = 0; i < 5; ++i) rows.row(i) = testutil::random_vec(rng, 2).transpose();
  CHECK((group_soft_threshold(rows, 0.0) - rows).norm() == 0.0);

  SUBCASE("reduces to soft_threshold when second components vanish") {
    Matrix degenerate(4, 2);
    degenerate << 3, 0, -2, 0, 0.5, 0, 0, 0;
    Matrix out = group_soft_threshold(degenerate, 1.0);
    Vector expected = soft_threshold(vec({3, -2, 0.5, 0}), 1.0);
    for (int i = 0; i < 4; ++i) {
      CHECK(out(i, 0) == doctest::Approx(expected[i]).epsilon(1e-15));
      CHECK(out(i, 1) == 0.0);
    }
  }
}

TEST_CASE("project_ball") {
  const Vector center = vec({1, 1});
  CHECK((project_ball(center, center, 1.0) - center).norm() == 0.0);
  CHECK((project_ball(vec({3, 1}), center, 1.0) - vec({2, 1})).norm() <= 1e-15);
  const Vector on_sphere = vec({1, 2});
  CHECK((project_ball(on_sphere, center, 1.0) - on_sphere).norm() == 0.0);
  CHECK_THROWS_AS(project_ball(center, center, 0.0), std::invalid_argument);
}

TEST_CASE("prox_half_sq_dist") {
  const Vector center = vec({1, 1});
  auto proj = [&](const Vector& x) { return project_ball(x, center, 1.0); };
  const Vector inside = vec({1.5, 1});
  CHECK((prox_half_sq_dist(inside, proj, 3.0) - inside).norm() <= 1e-15);
  const Vector x = vec({3, 1});
  CHECK((prox_half_sq_dist(x, proj, 0.0) - x).norm() == 0.0);
  CHECK((prox_half_sq_dist(x, proj, 1.0) - vec({2.5, 1})).norm() <= 1e-15);
}

TEST_CASE("skew_resolvent_op") {
  CHECK_THROWS_AS(skew_resolvent_op(3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(skew_resolvent_op(4, 0.0), std::invalid_argument);

  SUBCASE("identity limit") {
    NonexpansiveOp T = skew_resolvent_op(6, 1e-12);
    std::mt19937_64 rng(11);
    const Vector x = testutil::random_vec(rng, 6);
    CHECK((T.eval(x) - x).norm() <= 1e-10 * x.norm());
  }
  SUBCASE("defining equation") {
    NonexpansiveOp T = skew_resolvent_op(2, 0.1);
    const Vector x = vec({1, 1});
    const Vector y = T.eval(x);
    // (I + tau Sigma) y = (y1 + tau y2, y2 - tau y1)
    const Vector back = vec({y[0] + 0.1 * y[1], y[1] - 0.1 * y[0]});
    CHECK((back - x).norm() <= 1e-12);
    CHECK(T.eval(Vector::Zero(2)).norm() == 0.0);
  }
  SUBCASE("defining equation on random points, d = 10") {
    NonexpansiveOp T = skew_resolvent_op(10, 0.3);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x = testutil::random_vec(rng, 10, 3.0);
      const Vector y = T.eval(x);
      Vector back(10);
      back.head(5) = y.head(5) + 0.3 * y.tail(5);
      back.tail(5) = y.tail(5) - 0.3 * y.head(5);
      CHECK((back - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
    }
  }
  SUBCASE("nonexpansive on random pairs") {
    NonexpansiveOp T = skew_resolvent_op(8, 0.2);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = testutil::random_vec(rng, 8), y = testutil::random_vec(rng, 8);
      CHECK((T.eval(x) - T.eval(y)).norm() <= (x - y).norm() * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("averaged_map") {
  NonexpansiveOp minus = {[](const Vector& x) -> Vector { return -x; }, 1, Vector::Zero(1)};
  SUBCASE("s = 1 is T itself") {
    NonexpansiveOp T = averaged_map(minus, 1.0);
    CHECK(T.eval(vec({2}))[0] == -2.0);
  }
  SUBCASE("s = 1/2 with T = -I collapses to zero") {
    NonexpansiveOp T = averaged_map(minus, 0.5);
    CHECK(T.eval(vec({1}))[0] == 0.0);
  }
  SUBCASE("fixed points preserved") {
    NonexpansiveOp T = skew_resolvent_op(4, 0.1);
    for (double s : {0.3, 1.0, 1.7}) {
      NonexpansiveOp Ts = averaged_map(T, s);
      CHECK(Ts.eval(Vector::Zero(4)).norm() == 0.0);
    }
  }
  SUBCASE("nonexpansive for s in (0, 1]") {
    NonexpansiveOp T = skew_resolvent_op(6, 0.4);
    std::mt19937_64 rng(19);
    for (double s : {0.25, 0.75, 1.0}) {
      NonexpansiveOp Ts = averaged_map(T, s);
      for (int trial = 0; trial < 100; ++trial) {
        const Vector x = testutil::random_vec(rng, 6), y = testutil::random_vec(rng, 6);
        CHECK((Ts.eval(x) - Ts.eval(y)).norm() <= (x - y).norm() * (1.0 + 1e-10));
      }
    }
  }
  CHECK_THROWS_AS(averaged_map(minus, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(averaged_map(minus, 2.5), std::invalid_argument);
}

TEST_CASE("prox operators are firmly nonexpansive") {
  std::mt19937_64 rng(23);
  auto firm = [&](auto&& P, Eigen::Index n) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = testutil::random_vec(rng, n, 2.0), y = testutil::random_vec(rng, n, 2.0);
      const Vector px = P(x), py = P(y);
      CHECK((px - py).dot(x - y) >= (px - py).squaredNorm() - 1e-10);
    }
  };
  firm([](const Vector& v) { return soft_threshold(v, 0.7); }, 5);
  const Vector center = vec({1, 1});
  firm([&](const Vector& v) { return project_ball(v, center, 1.0); }, 2);
  firm(
      [&](const Vector& v) {
        return prox_half_sq_dist(
            v, [&](const Vector& x) { return project_ball(x, center, 1.0); }, 1.3);
      },
      2);
  // group prox on flattened 3x2 rows
  firm(
      [](const Vector& v) -> Vector {
        Eigen::Map<const Matrix> rows(v.data(), 3, 2);
        Matrix out = group_soft_threshold(rows, 0.9);
        return Eigen::Map<Vector>(out.data(), 6);
      },
      6);
}

TEST_CASE("library operations keep entries finite") {
  std::mt19937_64 rng(29);
  const Vector x = testutil::random_vec(rng, 10, 50.0);
  CHECK(soft_threshold(x, 3.0).allFinite());
  CHECK(skew_resolvent_op(10, 0.1).eval(x).allFinite());
  CHECK(project_ball(x, Vector::Zero(10), 2.0).allFinite());
}
