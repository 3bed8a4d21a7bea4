#include <doctest.h>

#include <vector>

#include "uvlce/kernels.hpp"
#include "uvlce/matrix.hpp"
#include "uvlce/rng.hpp"

using namespace uvlce;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-2.0, 2.0);
  return m;
}

std::vector<double> random_vec(int n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference exactly") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform_below(90));
    const int cols = 1 + static_cast<int>(rng.uniform_below(150));
    const Matrix m = random_matrix(rows, cols, rng);
    const std::vector<double> x = random_vec(cols, rng);
    const std::vector<double> v = random_vec(rows, rng);

    std::vector<double> a(rows), b(rows);
    kernels::matvec(m, x.data(), a.data());
    kernels::serial::matvec(m, x.data(), b.data());
    CHECK(a == b);

    std::vector<double> c(cols), d(cols);
    kernels::matvec_t(m, v.data(), c.data());
    kernels::serial::matvec_t(m, v.data(), d.data());
    CHECK(c == d);

    std::vector<double> e(cols), f(cols);
    kernels::soft_threshold(x.data(), cols, 0.7, e.data());
    kernels::serial::soft_threshold(x.data(), cols, 0.7, f.data());
    CHECK(e == f);

    const int batch = 1 + static_cast<int>(rng.uniform_below(8));
    const Matrix ga = random_matrix(batch, cols, rng);
    const Matrix gb = random_matrix(batch, rows, rng);
    Matrix acc_p(cols, rows), acc_s(cols, rows);
    kernels::outer_accumulate(ga, gb, acc_p);
    kernels::serial::outer_accumulate(ga, gb, acc_s);
    CHECK(acc_p == acc_s);
  }
}

TEST_CASE("matvec_t equals matvec of the transpose") {
  Rng rng(11);
  const Matrix m = random_matrix(23, 31, rng);
  const Matrix mt = transpose(m);
  const std::vector<double> v = random_vec(23, rng);
  std::vector<double> a(31), b(31);
  kernels::matvec_t(m, v.data(), a.data());
  kernels::matvec(mt, v.data(), b.data());
  CHECK(a == b);  // identical summation order, must agree bitwise
}

TEST_CASE("soft threshold scalar behaviour") {
  CHECK(kernels::soft_threshold_scalar(2.0, 0.5) == doctest::Approx(1.5));
  CHECK(kernels::soft_threshold_scalar(-0.3, 0.5) == 0.0);
  CHECK(kernels::soft_threshold_scalar(-2.0, 0.5) == doctest::Approx(-1.5));
  CHECK(kernels::soft_threshold_scalar(0.7, 0.0) == 0.7);
}

TEST_CASE("soft threshold contracts toward zero and keeps signs") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = rng.uniform(-5.0, 5.0);
    const double tau = rng.uniform(0.0, 3.0);
    const double out = kernels::soft_threshold_scalar(r, tau);
    CHECK(std::fabs(out) <= std::fabs(r));
    if (out != 0.0) CHECK(out * r > 0.0);
  }
}

TEST_CASE("count_above counts the support") {
  const std::vector<double> x = {0.0, 1e-13, -1e-11, 2.0, -3.0};
  CHECK(kernels::count_above(x.data(), 5, 1e-12) == 3);
}
