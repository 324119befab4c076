#include "hartree/convolution.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace hartree {
namespace {

Index next_pow2(Index v) {
  Index p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

void validate(const KernelSpec& k, int dim) {
  if (!(k.strength >= 0.0) || !std::isfinite(k.strength))
    throw ConfigError("kernel.strength must be finite and >= 0");
  if (k.family == KernelFamily::Softened && !(k.soften_a > 0.0))
    throw ConfigError("softened kernel requires kernel.soften_a > 0");
  if (k.family == KernelFamily::Coulomb && dim != 2) throw ConfigError("coulomb requires dim=2");
  if (k.backend == KernelBackend::Fast && dim > 2)
    throw ConfigError("fast convolution backend supports dim 1 and 2 only");
}

std::string to_string(KernelFamily f) { return f == KernelFamily::Coulomb ? "coulomb" : "softened"; }
std::string to_string(KernelBackend b) { return b == KernelBackend::Direct ? "direct" : "fast"; }

double coulomb_cell_integral(double hx, double hy) {
  const double a = 0.5 * hx;
  const double b = 0.5 * hy;
  return 4.0 * (a * std::asinh(b / a) + b * std::asinh(a / b));
}

double kernel_value(const KernelSpec& k, const Grid& g, const Point& r) {
  const double r2 = r.squaredNorm();
  if (k.family == KernelFamily::Softened) return k.strength / std::sqrt(r2 + k.soften_a * k.soften_a);
  if (r2 == 0.0) return k.strength * coulomb_cell_integral(g.h[0], g.h[1]) / (g.h[0] * g.h[1]);
  return k.strength / std::sqrt(r2);
}

Point kernel_gradient(const KernelSpec& k, const Grid&, const Point& r) {
  const double r2 = r.squaredNorm();
  if (k.family == KernelFamily::Softened) {
    const double s = r2 + k.soften_a * k.soften_a;
    return -k.strength * r / (s * std::sqrt(s));
  }
  // odd integrand about the singularity: the self cell contributes nothing
  if (r2 == 0.0) return Point::Zero();
  return -k.strength * r / (r2 * std::sqrt(r2));
}

struct Convolver::FftState {
  std::array<Index, 2> len{1, 1};
  /// [0] kernel, [1 + a] d/dx_a kernel; each len[0] * len[1], x fastest
  std::vector<std::vector<Complex>> spectra;
  Eigen::FFT<double> fft;
  std::vector<Complex> work, line_in, line_out;

  void transform(std::vector<Complex>& data, bool inverse) {
    for (int axis = 0; axis < 2; ++axis) {
      const Index n = len[axis];
      if (n == 1) continue;
      const Index stride = axis == 0 ? 1 : len[0];
      const Index lines = len[1 - axis];
      const Index line_stride = axis == 0 ? len[0] : 1;
      line_in.resize(n);
      for (Index l = 0; l < lines; ++l) {
        const Index base = l * line_stride;
        for (Index i = 0; i < n; ++i) line_in[i] = data[base + i * stride];
        if (inverse) {
          fft.inv(line_out, line_in);
        } else {
          fft.fwd(line_out, line_in);
        }
        for (Index i = 0; i < n; ++i) data[base + i * stride] = line_out[i];
      }
    }
  }
};

Convolver::Convolver(const Grid& g, const KernelSpec& k) : grid_(g), spec_(k) {
  validate(k, g.dim);
  if (k.backend != KernelBackend::Fast) return;
  fft_ = std::make_unique<FftState>();
  auto& st = *fft_;
  for (int a = 0; a < g.dim; ++a) st.len[a] = next_pow2(2 * g.n[a] - 1);
  const Index total = st.len[0] * st.len[1];
  st.spectra.assign(static_cast<std::size_t>(1 + g.dim), std::vector<Complex>(total, Complex(0.0)));
  const Index nx = g.n[0];
  const Index ny = g.dim > 1 ? g.n[1] : 1;
  for (Index dj = -(ny - 1); dj <= ny - 1; ++dj) {
    for (Index di = -(nx - 1); di <= nx - 1; ++di) {
      Point r = Point::Zero();
      r[0] = static_cast<double>(di) * g.h[0];
      if (g.dim > 1) r[1] = static_cast<double>(dj) * g.h[1];
      const Index ii = (di + st.len[0]) % st.len[0];
      const Index jj = (dj + st.len[1]) % st.len[1];
      const Index slot = ii + st.len[0] * jj;
      st.spectra[0][slot] = kernel_value(k, g, r);
      const Point dk = kernel_gradient(k, g, r);
      for (int a = 0; a < g.dim; ++a) st.spectra[1 + a][slot] = dk[a];
    }
  }
  for (auto& s : st.spectra) st.transform(s, false);
}

Convolver::~Convolver() = default;
Convolver::Convolver(Convolver&&) noexcept = default;
Convolver& Convolver::operator=(Convolver&&) noexcept = default;

Convolver::Convolver(const Convolver& other) : grid_(other.grid_), spec_(other.spec_) {
  if (other.fft_) {
    fft_ = std::make_unique<FftState>();
    fft_->len = other.fft_->len;
    fft_->spectra = other.fft_->spectra;
  }
}

Convolver& Convolver::operator=(const Convolver& other) {
  if (this != &other) *this = Convolver(other);
  return *this;
}

Eigen::VectorXd Convolver::direct(const Eigen::VectorXd& weighted, int component) const {
  const Index n = grid_.size();
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) {
    const Point xi = grid_.point(i);
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (weighted[j] == 0.0) continue;
      const Point r = xi - grid_.point(j);
      const double kv =
          component < 0 ? kernel_value(spec_, grid_, r) : kernel_gradient(spec_, grid_, r)[component];
      acc += kv * weighted[j];
    }
    out[i] = acc;
  }
  return out;
}

Eigen::VectorXd Convolver::fast(const Eigen::VectorXd& weighted, int component) const {
  auto& st = *fft_;
  const Index total = st.len[0] * st.len[1];
  st.work.assign(static_cast<std::size_t>(total), Complex(0.0));
  const Index nx = grid_.n[0];
  const Index ny = grid_.dim > 1 ? grid_.n[1] : 1;
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) st.work[i + st.len[0] * j] = weighted[i + nx * j];
  st.transform(st.work, false);
  const auto& spec = st.spectra[static_cast<std::size_t>(component + 1)];
  for (Index s = 0; s < total; ++s) st.work[s] *= spec[s];
  st.transform(st.work, true);
  Eigen::VectorXd out(grid_.size());
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) out[i + nx * j] = st.work[i + st.len[0] * j].real();
  return out;
}

Eigen::VectorXd Convolver::potential(const Eigen::VectorXd& density) const {
  if (density.size() != grid_.size()) throw GridMismatch("potential: density size does not match grid");
  const Eigen::VectorXd weighted = grid_.quad_w.cwiseProduct(density);
  return fft_ ? fast(weighted, -1) : direct(weighted, -1);
}

Eigen::MatrixXd Convolver::potential_gradient(const Eigen::VectorXd& density) const {
  if (density.size() != grid_.size()) throw GridMismatch("potential_gradient: density size does not match grid");
  const Eigen::VectorXd weighted = grid_.quad_w.cwiseProduct(density);
  Eigen::MatrixXd out(grid_.size(), grid_.dim);
  for (int a = 0; a < grid_.dim; ++a) out.col(a) = fft_ ? fast(weighted, a) : direct(weighted, a);
  return out;
}

}  // namespace hartree
