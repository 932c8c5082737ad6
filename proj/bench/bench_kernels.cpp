// Times the serial reference kernels against their OpenMP counterparts and
// checks that both produce identical results.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hgm/gauss_manin.hpp"
#include "hgm/hgm_engine.hpp"
#include "hgm/kernels.hpp"
#include "hgm/series_oracle.hpp"

using namespace hgm;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-34s %10.3f %10.3f %8.2fx  %s\n", name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              same ? "identical" : "MISMATCH");
}

template <class T>
Matrix<T> random_matrix(std::mt19937_64& eng, std::size_t n) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  Matrix<T> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat q(num(eng), den(eng));
      q.canonicalize();
      m(i, j) = from_rat<T>(q);
    }
  return m;
}

template <class T>
void bench_dense(const char* label, std::mt19937_64& eng, std::size_t n, int reps) {
  const Matrix<T> a = random_matrix<T>(eng, n);
  const Matrix<T> b = random_matrix<T>(eng, n);
  Matrix<T> s, p;
  const double ts = best_of(reps, [&] { s = kernels::serial::multiply(a, b); });
  const double tp = best_of(reps, [&] { p = kernels::omp::multiply(a, b); });
  char name[64];
  std::snprintf(name, sizeof name, "multiply %s %zux%zu", label, n, n);
  report(name, ts, tp, s == p);

  std::vector<T> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = a(i, (i * 7) % n);
  std::optional<std::vector<T>> xs, xp;
  const double ss = best_of(reps, [&] { xs = kernels::serial::solve<T>(a, std::span<const T>(rhs)); });
  const double sp = best_of(reps, [&] { xp = kernels::omp::solve<T>(a, std::span<const T>(rhs)); });
  std::snprintf(name, sizeof name, "solve %s %zux%zu", label, n, n);
  report(name, ss, sp, xs == xp);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial versus OpenMP kernel timings"};
  int reps = 3;
  std::size_t rat_size = 40, dbl_size = 300;
  app.add_option("--reps", reps, "repetitions per measurement (best is reported)")->check(CLI::PositiveNumber);
  app.add_option("--rational-size", rat_size, "dimension of the rational matrices");
  app.add_option("--double-size", dbl_size, "dimension of the binary64 matrices");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  std::mt19937_64 eng(2024);
  bench_dense<Rat>("rational", eng, rat_size, reps);
  bench_dense<double>("binary64", eng, dbl_size, reps);

  {
    const Shape s(3, 3);
    const ParamVector alpha(s, std::vector<long>{-1, -4, -3, -5, 6, 2, 4, 1});
    const XMatrix x(s, {{Rat(1, 2), Rat(1, 3), Rat(2, 7)},
                        {Rat(1, 5), Rat(1, 7), Rat(3, 4)},
                        {Rat(5, 4), Rat(1, 6), Rat(2, 3)}});
    const Connection<Rat> conn(alpha);
    const MinorTable<Rat> minors(x);
    std::vector<LabeledMatrix<Rat>> a, b;
    const double ts = best_of(reps, [&] { a = conn.psi_all_serial(minors); });
    const double tp = best_of(reps, [&] { b = conn.psi_all(minors); });
    report("connection coefficients 3x3 shape", ts, tp, a == b);
  }

  {
    const std::vector<long> rows{4, 3, 5, 3}, cols{5, 4, 3, 3};
    Matrix<Rat> p(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) p(i, j) = Rat(static_cast<long>(1 + (i * 5 + j * 3) % 7), static_cast<long>(2 + i + j));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) p(i, j).canonicalize();
    OracleSums a, b;
    const double ts = best_of(reps, [&] { a = oracle_sums_serial(rows, cols, p); });
    const double tp = best_of(reps, [&] { b = oracle_sums(rows, cols, p); });
    report("table enumeration 4x4 totals 15", ts, tp, a.Z == b.Z && a.E == b.E);
  }
  return 0;
}
