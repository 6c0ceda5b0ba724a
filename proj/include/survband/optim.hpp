#pragma once

#include <functional>
#include <vector>

namespace survband {

struct SimplexOptions {
  int max_iter = 2000;
  double ftol = 1e-12;        // spread of simplex values at termination
  double initial_step = 0.5;  // per-coordinate displacement of the start simplex
};

struct SimplexResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;  // ftol reached before max_iter
};

// Nelder-Mead minimization with standard reflection/expansion/contraction/
// shrink coefficients (1, 2, 1/2, 1/2).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const SimplexOptions& opts = {});

namespace detail {

// Symmetric system solve and eigenvalues for the 1x1 / 2x2 matrices this
// library deals in. `a` is row-major n*n.
struct SymSolve {
  bool ok = false;
  double condition = 0.0;  // |lambda|_max / |lambda|_min
  std::vector<double> x;
};
SymSolve solve_sym(const std::vector<double>& a, std::size_t n,
                   const std::vector<double>& b);
std::vector<double> sym_eigenvalues(const std::vector<double>& a, std::size_t n);

}  // namespace detail

}  // namespace survband
