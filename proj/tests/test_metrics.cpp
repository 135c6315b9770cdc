#include <doctest.h>

#include <Eigen/Dense>

#include "fastcv/errors.hpp"
#include "fastcv/metrics.hpp"

using namespace fastcv;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(xs.size());
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("accuracy on decision values, zero counts as +1") {
  CHECK(accuracy(vec({1.0, -1.0, 0.5, -0.2}), vec({1, -1, -1, 1})) ==
        doctest::Approx(0.5));
  CHECK(accuracy(vec({0.0}), vec({1})) == doctest::Approx(1.0));
  CHECK(accuracy(vec({0.0}), vec({-1})) == doctest::Approx(0.0));
}

TEST_CASE("accuracy is invariant to positive rescaling") {
  Eigen::VectorXd d = vec({2.0, -0.3, 0.7, -1.9, 0.1});
  Eigen::VectorXd y = vec({1, 1, -1, -1, 1});
  CHECK(accuracy(d, y) == accuracy(Eigen::VectorXd(17.0 * d), y));
}

TEST_CASE("label accuracy") {
  std::vector<int> pred = {1, 2, 3, 1}, truth = {1, 2, 1, 1};
  CHECK(accuracy(pred, truth) == doctest::Approx(0.75));
  std::vector<int> one = {1}, two = {1, 2};
  CHECK_THROWS_AS(accuracy(one, two), ArgumentError);
}

TEST_CASE("auc: perfect, reversed, and tied cases") {
  CHECK(auc(vec({3, 2, -1, -2}), vec({1, 1, -1, -1})) == doctest::Approx(1.0));
  CHECK(auc(vec({-3, -2, 1, 2}), vec({1, 1, -1, -1})) == doctest::Approx(0.0));
  // ties give half credit: pairs (1,1)=0.5, (1,0)=1, (0,1)=0, (0,0)=0.5
  CHECK(auc(vec({1, 1, 0, 0}), vec({1, -1, 1, -1})) == doctest::Approx(0.5));
}

TEST_CASE("auc is undefined with one class present") {
  CHECK_THROWS_AS(auc(vec({1, 2}), vec({1, 1})), UndefinedMetricError);
}

TEST_CASE("relative efficiency is log10 of the time ratio") {
  CHECK(relative_efficiency(100.0, 1.0) == doctest::Approx(2.0));
  CHECK(relative_efficiency(1.0, 10.0) == doctest::Approx(-1.0));
  CHECK(relative_efficiency(5.0, 5.0) == doctest::Approx(0.0));
}
