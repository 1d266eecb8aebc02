// Walks the disk of radius 2 towards the deep-well limit and prints how the
// lowest eigenvalues approach their Dirichlet values, next to the first-order
// prediction lambda_D - h * 2 lambda_D / a.

#include <cstdio>

#include "pwell/experiments.hpp"

int main() {
  using namespace pwell;
  const WellDomain disk = WellDomain::ball(2, 2.0);
  const auto rows = experiments::sweep(disk, {0.2, 0.1, 0.05, 0.025}, 6);
  std::printf("%7s %3s %3s %3s %12s %12s %12s\n", "h", "j", "nu", "l", "lambda_h", "predicted",
              "lambda_D");
  for (const auto& r : rows) {
    std::printf("%7.3f %3d %3d %3d %12.6f %12.6f %12.6f\n", r.h, r.j, r.nu, r.l, r.lambda_h,
                r.lambda_D - r.first_order, r.lambda_D);
  }
  return 0;
}
