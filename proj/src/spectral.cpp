#include "filament/spectral.hpp"

#include "filament/error.hpp"
#include "filament/parallel.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace filament {

namespace {

// FFTW plans are created once per size under a lock (the planner is not
// thread-safe) and executed through the new-array interface, which is.
// FFTW_ESTIMATE keeps the chosen algorithm, and hence the bits, fixed.
class FftPlan {
public:
  explicit FftPlan(int n) : n_(n) {
    std::vector<double> real(n);
    std::vector<fftw_complex> spec(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(n, real.data(), spec.data(), flags);
    backward_ = fftw_plan_dft_c2r_1d(n, spec.data(), real.data(), flags);
  }
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan &) = delete;
  FftPlan &operator=(const FftPlan &) = delete;

  void forward(const double *in, std::complex<double> *out) const {
    // r2c does not modify its input
    fftw_execute_dft_r2c(forward_, const_cast<double *>(in),
                         reinterpret_cast<fftw_complex *>(out));
  }
  // Destroys the contents of `in`.
  void backward(std::complex<double> *in, double *out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex *>(in), out);
  }
  int size() const { return n_; }

private:
  int n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

const FftPlan &plan_for(Eigen::Index n) {
  static std::mutex mutex;
  static std::map<Eigen::Index, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto &slot = cache[n];
  if (!slot)
    slot = std::make_unique<FftPlan>(static_cast<int>(n));
  return *slot;
}

void require_even_grid(Eigen::Index n) {
  if (n < 2 || n % 2 != 0)
    throw InvalidArgument("spectral operators need an even sample count");
}

// Applies a per-wavenumber multiplier to each column: out = IFFT(m(k) FFT(g)).
template <typename Multiplier>
Samples spectral_map(const Samples &g, Multiplier &&multiplier) {
  const Eigen::Index n = g.rows();
  require_even_grid(n);
  const FftPlan &plan = plan_for(n);
  const Eigen::Index half = n / 2;
  std::vector<std::complex<double>> spec(half + 1);
  Samples out(n, 3);
  for (int c = 0; c < 3; ++c) {
    plan.forward(g.col(c).data(), spec.data());
    for (Eigen::Index k = 0; k <= half; ++k)
      spec[k] *= multiplier(k, half);
    plan.backward(spec.data(), out.col(c).data());
  }
  out /= static_cast<double>(n);
  return out;
}

} // namespace

Samples derivative(const Samples &g, int order, DerivativeMethod method) {
  if (order != 1 && order != 2)
    throw InvalidArgument("derivative order must be 1 or 2");
  const Eigen::Index n = g.rows();

  if (method == DerivativeMethod::Fd4) {
    if (n < 5)
      throw InvalidArgument("fd4 needs at least 5 samples");
    const double h = grid_step(n);
    Samples out(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto m2 = g.row((i + n - 2) % n);
      const auto m1 = g.row((i + n - 1) % n);
      const auto p1 = g.row((i + 1) % n);
      const auto p2 = g.row((i + 2) % n);
      if (order == 1)
        out.row(i) = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
      else
        out.row(i) = (-m2 + 16.0 * m1 - 30.0 * g.row(i) + 16.0 * p1 - p2) /
                     (12.0 * h * h);
    }
    return out;
  }

  return spectral_map(g, [order](Eigen::Index k, Eigen::Index half) {
    const double kk = static_cast<double>(k);
    if (k == half) // the Nyquist cosine has no odd derivative on the grid
      return std::complex<double>(order == 1 ? 0.0 : -kk * kk);
    const std::complex<double> ik(0.0, kk);
    return order == 1 ? ik : ik * ik;
  });
}

Samples antiderivative(const Samples &g) {
  const Eigen::Index n = g.rows();
  // zero-mean periodic part; the Nyquist cosine integrates to zero at nodes
  Samples periodic = spectral_map(g, [](Eigen::Index k, Eigen::Index half) {
    if (k == 0 || k == half)
      return std::complex<double>(0.0);
    return 1.0 / std::complex<double>(0.0, static_cast<double>(k));
  });
  const Eigen::RowVector3d mean = g.colwise().sum() / static_cast<double>(n);
  const Eigen::RowVector3d origin = periodic.row(0);
  const double h = grid_step(n);
  Samples out(n, 3);
  for (Eigen::Index i = 0; i < n; ++i)
    out.row(i) = mean * (h * static_cast<double>(i)) + periodic.row(i) - origin;
  out.row(0).setZero();
  return out;
}

Eigen::Vector3d period_integral(const Samples &g) {
  return (grid_step(g.rows()) * g.colwise().sum()).transpose();
}

std::int64_t kernel_value(double x, KernelConvention conv) {
  const double ratio = x / kTwoPi;
  return static_cast<std::int64_t>(conv == KernelConvention::Floor
                                       ? std::floor(ratio)
                                       : std::trunc(ratio));
}

namespace {

// Kernel value on the two pieces of [0, 2 pi) split at eta = xi.
double left_piece(double xi, KernelConvention conv) {
  return static_cast<double>(kernel_value(0.5 * xi, conv));
}
double right_piece(double xi, KernelConvention conv) {
  return static_cast<double>(kernel_value(0.5 * (xi - kTwoPi), conv));
}

} // namespace

Samples kernel_integral(const Samples &g, KernelConvention conv) {
  const Eigen::Index n = g.rows();
  const Samples partial = antiderivative(g);
  const Eigen::RowVector3d total = period_integral(g).transpose();
  const double h = grid_step(n);
  Samples out(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = h * static_cast<double>(i);
    out.row(i) = left_piece(xi, conv) * partial.row(i) +
                 right_piece(xi, conv) * (total - partial.row(i));
  }
  return out;
}

KernelWeights::KernelWeights(Eigen::Index n, KernelConvention conv)
    : n_(n), sine_sums_(n, 0.0), left_(n), right_(n) {
  require_even_grid(n);
  const double h = grid_step(n);
  const Eigen::Index half = n / 2;
  for (Eigen::Index d = 1; d < n; ++d) {
    double acc = 0.0;
    for (Eigen::Index k = 1; k < half; ++k)
      acc += std::sin(static_cast<double>(k * d % n) * h) / static_cast<double>(k);
    sine_sums_[d] = 2.0 * acc / static_cast<double>(n);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = h * static_cast<double>(i);
    left_[i] = left_piece(xi, conv);
    right_[i] = right_piece(xi, conv);
  }
}

double KernelWeights::operator()(Eigen::Index i, Eigen::Index j) const {
  const double h = grid_step(n_);
  // integral of the j-th cardinal function over [0, xi_i]
  const double partial = h * static_cast<double>(i) / static_cast<double>(n_) +
                         sine_sums_[(i - j + n_) % n_] + sine_sums_[j];
  return left_[i] * partial + right_[i] * (h - partial);
}

Samples KernelWeights::apply(const Samples &g) const {
  if (g.rows() != n_)
    throw InvalidArgument("sample count does not match the weight matrix");
  Samples out = Samples::Zero(n_, 3);
  parallel_for(static_cast<std::size_t>(n_), [&](std::size_t b, std::size_t e) {
    for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
      Eigen::RowVector3d acc = Eigen::RowVector3d::Zero();
      for (Eigen::Index j = 0; j < n_; ++j)
        acc += (*this)(i, j) * g.row(j);
      out.row(i) = acc;
    }
  });
  return out;
}

double kernel_jump_factor(KernelConvention conv) {
  return static_cast<double>(kernel_value(std::numbers::pi, conv) -
                             kernel_value(-std::numbers::pi, conv));
}

} // namespace filament
