#pragma once

// Some OpenBLAS builds pick kernels for the host CPU that return wrong results
// (seen with 0.3.20's Cooperlake path on virtualized Xeons). The kernel choice is
// made when the library loads, so the only remedy is to restart the process with
// OPENBLAS_CORETYPE pinned. Executables call ensure_working_lapack() first thing
// in main().

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <lapacke.h>
#include <unistd.h>

namespace pimwnn {

/// Solves a well-conditioned 600 x 300 system with a known solution through the
/// QR and SVD drivers and checks both answers.
inline bool lapack_self_test()
{
  const int m = 600;
  const int n = 300;
  std::vector<double> a(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      a[static_cast<std::size_t>(j) * m + i] = std::sin(0.37 * i + 1.13 * j + 0.01 * i * j) + (i == j ? 4.0 : 0.0);
  std::vector<double> b(m, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      b[i] += a[static_cast<std::size_t>(j) * m + i];

  auto check = [&](bool use_svd) {
    std::vector<double> aa = a;
    std::vector<double> bb = b;
    lapack_int info = 0;
    if (use_svd) {
      std::vector<double> s(n);
      lapack_int rank = 0;
      info = LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, aa.data(), m, bb.data(), m, s.data(), -1.0, &rank);
    } else {
      info = LAPACKE_dgels(LAPACK_COL_MAJOR, 'N', m, n, 1, aa.data(), m, bb.data(), m);
    }
    if (info != 0)
      return false;
    for (int j = 0; j < n; ++j)
      if (!(std::abs(bb[j] - 1.0) < 1e-8))
        return false;
    return true;
  };
  return check(false) && check(true);
}

inline void ensure_working_lapack(char** argv)
{
  if (lapack_self_test())
    return;
  if (std::getenv("OPENBLAS_CORETYPE") == nullptr && argv != nullptr) {
    ::setenv("OPENBLAS_CORETYPE", "Haswell", 1);
    ::execv("/proc/self/exe", argv);
  }
  std::fprintf(stderr, "warning: the linked LAPACK failed its self test; least-squares results are unreliable\n");
}

} // namespace pimwnn
