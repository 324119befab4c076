#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hartree/grid.hpp"

namespace hartree {

enum class KernelFamily { Coulomb, Softened };
enum class KernelBackend { Direct, Fast };

struct KernelSpec {
  KernelFamily family = KernelFamily::Softened;
  double soften_a = 0.1;
  KernelBackend backend = KernelBackend::Fast;
  /// Coupling in front of the kernel. 1 is the physical normalisation; 0 turns
  /// the nonlinearity off (linear-regime tests).
  double strength = 1.0;

  bool operator==(const KernelSpec&) const = default;
};

/// Throws ConfigError when the kernel parameters are unusable on a grid of dimension `dim`.
void validate(const KernelSpec& k, int dim);

std::string to_string(KernelFamily f);
std::string to_string(KernelBackend b);

/// Analytic integral of 1/|x| over the rectangle [-hx/2, hx/2] x [-hy/2, hy/2].
double coulomb_cell_integral(double hx, double hy);

/// Kernel value at offset r (strength included). For Coulomb the zero offset
/// returns the cell-averaged value coulomb_cell_integral / (hx * hy).
double kernel_value(const KernelSpec& k, const Grid& g, const Point& r);

/// Analytic gradient of the kernel at offset r; zero at the Coulomb diagonal.
Point kernel_gradient(const KernelSpec& k, const Grid& g, const Point& r);

/// Quadrature convolution with a fixed kernel on a fixed grid:
///   potential(rho)_i = sum_j w_j k(x_i - x_j) rho_j
/// and the same with grad k. The Fast backend embeds the Toeplitz structure in
/// a zero-padded circular convolution; the Direct backend is the double loop.
///
/// Holds FFT scratch, so one instance must not be used from two threads at once.
class Convolver {
 public:
  Convolver(const Grid& g, const KernelSpec& k);
  ~Convolver();
  Convolver(const Convolver&);
  Convolver& operator=(const Convolver&);
  Convolver(Convolver&&) noexcept;
  Convolver& operator=(Convolver&&) noexcept;

  Eigen::VectorXd potential(const Eigen::VectorXd& density) const;
  /// N x dim
  Eigen::MatrixXd potential_gradient(const Eigen::VectorXd& density) const;

  const KernelSpec& kernel() const noexcept { return spec_; }
  std::uint64_t grid_id() const noexcept { return grid_.id; }

 private:
  struct FftState;

  Eigen::VectorXd direct(const Eigen::VectorXd& weighted, int component) const;
  Eigen::VectorXd fast(const Eigen::VectorXd& weighted, int component) const;

  Grid grid_;
  KernelSpec spec_;
  std::unique_ptr<FftState> fft_;
};

}  // namespace hartree
