// Compares the OpenMP kernels against the serial reference at a few sizes.
// The two must agree bit-for-bit; this tool reports throughput.

#include <chrono>
#include <cstdio>
#include <vector>

#include "uvlce/kernels.hpp"
#include "uvlce/matrix.hpp"
#include "uvlce/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_loop(F&& f, int reps) {
  f();  // warm up
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) f();
  return seconds_since(t0) / reps;
}

void bench_size(int rows, int cols, int reps) {
  uvlce::Rng rng(42);
  uvlce::Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  std::vector<double> x(cols), v(rows), out_r(rows), out_c(cols);
  for (auto& e : x) e = rng.uniform(-1.0, 1.0);
  for (auto& e : v) e = rng.uniform(-1.0, 1.0);

  const double flops = 2.0 * rows * cols;
  const double t_mv_s = time_loop([&] { uvlce::kernels::serial::matvec(m, x.data(), out_r.data()); }, reps);
  const double t_mv_p = time_loop([&] { uvlce::kernels::matvec(m, x.data(), out_r.data()); }, reps);
  const double t_mt_s = time_loop([&] { uvlce::kernels::serial::matvec_t(m, v.data(), out_c.data()); }, reps);
  const double t_mt_p = time_loop([&] { uvlce::kernels::matvec_t(m, v.data(), out_c.data()); }, reps);

  std::printf("%6d x %-6d  matvec  %8.1f | %8.1f MFLOP/s   matvec_t  %8.1f | %8.1f MFLOP/s\n",
              rows, cols, flops / t_mv_s / 1e6, flops / t_mv_p / 1e6, flops / t_mt_s / 1e6,
              flops / t_mt_p / 1e6);

  // sanity: parallel and serial reference must agree exactly
  std::vector<double> ref_r(rows), ref_c(cols);
  uvlce::kernels::serial::matvec(m, x.data(), ref_r.data());
  uvlce::kernels::matvec(m, x.data(), out_r.data());
  uvlce::kernels::serial::matvec_t(m, v.data(), ref_c.data());
  uvlce::kernels::matvec_t(m, v.data(), out_c.data());
  for (int i = 0; i < rows; ++i)
    if (ref_r[i] != out_r[i]) std::printf("  !! matvec mismatch at %d\n", i);
  for (int k = 0; k < cols; ++k)
    if (ref_c[k] != out_c[k]) std::printf("  !! matvec_t mismatch at %d\n", k);
}

}  // namespace

int main() {
  std::printf("%26s  %8s | %8s (serial | parallel)\n", "", "serial", "omp");
  bench_size(64, 120, 20000);
  bench_size(256, 512, 2000);
  bench_size(1024, 2048, 200);
  bench_size(4096, 4096, 40);
  return 0;
}
