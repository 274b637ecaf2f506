#include "filament/constants.hpp"

#include "filament/error.hpp"

#include <cmath>
#include <string>

namespace filament {

namespace {

void require_positive(double value, const char *name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw InvalidArgument(std::string(name) + " must be positive");
}

} // namespace

ModelConstants make_constants(double R0, double m0, double t0, double gamma,
                              int sigma) {
  require_positive(R0, "R0");
  require_positive(m0, "m0");
  require_positive(t0, "t0");
  if (!std::isfinite(gamma))
    throw InvalidArgument("gamma must be finite");
  if (sigma != 1 && sigma != -1)
    throw InvalidArgument("sigma must be +1 or -1");

  ModelConstants c;
  c.R0 = R0;
  c.m0 = m0;
  c.t0 = t0;
  c.gamma = gamma;
  c.sigma = sigma;
  c.E0 = m0 * R0 * R0 / (t0 * t0);
  c.beta = -2.0 / (c.E0 * t0);
  return c;
}

ModelConstants with_gamma(const ModelConstants &c, double gamma) {
  return make_constants(c.R0, c.m0, c.t0, gamma, c.sigma);
}

void validate(const ModelConstants &c) {
  const ModelConstants fresh = make_constants(c.R0, c.m0, c.t0, c.gamma, c.sigma);
  if (fresh.E0 != c.E0)
    throw InvalidArgument("E0 does not equal m0 R0^2 / t0^2");
  if (fresh.beta != c.beta)
    throw InvalidArgument("beta does not equal -2 / (E0 t0)");
}

} // namespace filament
