#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <numbers>
#include <vector>

namespace filament {

// N x 3 block of periodic samples on the grid xi_i = 2 pi i / N.
using Samples = Eigen::Matrix<double, Eigen::Dynamic, 3>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double grid_step(Eigen::Index n) { return kTwoPi / static_cast<double>(n); }

enum class DerivativeMethod { Spectral, Fd4 };

// Periodic derivative of each column. The spectral path differentiates the
// trigonometric interpolant; the first derivative drops the Nyquist
// coefficient, the second keeps it with -(N/2)^2. Keeping it matters: a zero
// Nyquist eigenvalue makes the sawtooth mode of the ring linearly unstable.
Samples derivative(const Samples &g, int order,
                   DerivativeMethod method = DerivativeMethod::Spectral);

// S_i = integral over [0, xi_i] of the trigonometric interpolant of g.
Samples antiderivative(const Samples &g);

// Integral over a full period: h * sum_i g_i (exact for the interpolant).
Eigen::Vector3d period_integral(const Samples &g);

// Reading of the integer-part bracket [x] of the step kernel.
enum class KernelConvention { Floor, Truncate };

// [x] = floor(x / 2 pi) (or trunc under the mutation convention).
std::int64_t kernel_value(double x,
                          KernelConvention conv = KernelConvention::Floor);

// Z_i = integral over [0, 2 pi) of [xi_i - eta] g(eta) d eta, evaluated
// exactly for the trigonometric interpolant of g. O(N log N).
Samples kernel_integral(const Samples &g,
                        KernelConvention conv = KernelConvention::Floor);

// Same integral as an explicit N x N quadrature-weight matrix acting on the
// samples: W_ij = integral of [xi_i - eta] against the j-th cardinal function.
class KernelWeights {
public:
  explicit KernelWeights(Eigen::Index n,
                         KernelConvention conv = KernelConvention::Floor);

  Eigen::Index size() const { return n_; }
  double operator()(Eigen::Index i, Eigen::Index j) const;
  Samples apply(const Samples &g) const;

private:
  Eigen::Index n_;
  std::vector<double> sine_sums_;       // s(d), d = 0..N-1
  std::vector<double> left_, right_;    // kernel value on eta < xi_i / eta > xi_i
};

// Jump of the kernel integral across the period, [2 pi^-] - [0] pieces, so
// that z(2 pi^-) - z(0) = R0 * jump_factor * Phi.
double kernel_jump_factor(KernelConvention conv = KernelConvention::Floor);

} // namespace filament
