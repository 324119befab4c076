#pragma once

#include <vector>

#include "hartree/boundary_data.hpp"
#include "hartree/kernel.hpp"

namespace hartree {

struct ContractionReport {
  /// d(v^{k+1}, v^k) in the sup-over-substeps H1 metric, k = 0, 1, ...
  std::vector<double> distances;
  /// distances[k] / distances[k-1]
  std::vector<double> factors;
  double factor_est = 0.0;
  /// largest sup-in-time H1 norm seen among the iterates
  double max_norm = 0.0;
  bool escaped = false;
};

/// Iterates the discrete Duhamel map of the homogenised problem on [0, T0]
/// starting from v = 0. One application of the map solves the linear
/// Schroedinger equation with homogeneous Dirichlet data, initial value psi and
/// the source Lap Q~ - i Q~_t - f(v + Q~)(v + Q~) frozen at the previous
/// iterate, using `substeps` Crank-Nicolson steps. Stops early once the
/// distance reaches roundoff, or when an iterate leaves the ball of radius M
/// (reported through `escaped`).
ContractionReport contraction_probe(const ComplexField& psi, const BoundaryData& bd, const Grid& g,
                                    const KernelSpec& k, double T0, double M, int n_iter, int substeps = 16);

}  // namespace hartree
