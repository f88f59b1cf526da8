#include <cmath>
#include <cstddef>

#include "nemflow/kernels.hpp"

// Reference kernels.  Pointwise loops use std::fma where the AVX2 variant
// uses vfmadd so the two round identically; reductions use Neumaier
// compensation so grid integrals hold ~1e-15 relative over long runs.

namespace nemflow::kernels {
namespace {

void axpby_s(std::size_t n, double a, const double* x, double b,
             const double* y, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(a, x[i], b * y[i]);
}

void scale_s(std::size_t n, double a, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void add_scaled_s(std::size_t n, double a, const double* x, double* inout) {
  for (std::size_t i = 0; i < n; ++i) inout[i] = std::fma(a, x[i], inout[i]);
}

void mul_s(std::size_t n, const double* x, const double* y, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void fill_s(std::size_t n, double v, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = v;
}

void stencil3_s(std::size_t n, double cm, const double* xm, double cc,
                const double* xc, double cp, const double* xp, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::fma(cm, xm[i], std::fma(cc, xc[i], cp * xp[i]));
}

void stencil3_acc_s(std::size_t n, double cm, const double* xm, double cc,
                    const double* xc, double cp, const double* xp,
                    double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::fma(cm, xm[i], std::fma(cc, xc[i], std::fma(cp, xp[i], out[i])));
}

void upwind_flux_s(std::size_t n, const double* ul, const double* ur,
                   const double* lo, const double* hi, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ub = 0.5 * (ul[i] + ur[i]);
    out[i] = std::fmax(ub, 0.0) * lo[i] + std::fmin(ub, 0.0) * hi[i];
  }
}

// Neumaier-compensated sum of already-formed terms.
struct Compensated {
  double s = 0.0, c = 0.0;
  inline void add(double v) {
    const double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  inline double value() const { return s + c; }
};

double sum_s(std::size_t n, const double* x) {
  Compensated acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double dot_s(std::size_t n, const double* x, const double* y) {
  Compensated acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i] * y[i]);
  return acc.value();
}

double wdot_s(std::size_t n, const double* w, const double* x,
              const double* y) {
  Compensated acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(w[i] * x[i] * y[i]);
  return acc.value();
}

double max_abs_s(std::size_t n, const double* x) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

double min_val_s(std::size_t n, const double* x) {
  if (n == 0) return 0.0;
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::fmin(m, x[i]);
  return m;
}

double max_val_s(std::size_t n, const double* x) {
  if (n == 0) return 0.0;
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::fmax(m, x[i]);
  return m;
}

double sum_abs_pow_s(std::size_t n, const double* x, double p) {
  Compensated acc;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc.add(std::fabs(x[i]));
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) acc.add(x[i] * x[i]);
  } else if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) acc.add(x[i] * x[i] * std::fabs(x[i]));
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = x[i] * x[i];
      acc.add(q * q);
    }
  } else if (p == 6.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = x[i] * x[i];
      acc.add(q * q * q);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) acc.add(std::pow(std::fabs(x[i]), p));
  }
  return acc.value();
}

double normalize3_s(std::size_t n, double* x, double* y, double* z) {
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::sqrt((x[i] * x[i] + y[i] * y[i]) + z[i] * z[i]);
    drift = std::fmax(drift, std::fabs(m - 1.0));
    if (m > 0.0) {
      x[i] /= m;
      y[i] /= m;
      z[i] /= m;
    }
  }
  return drift;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      "scalar",     axpby_s,   scale_s,   add_scaled_s, mul_s,
      fill_s,       stencil3_s, stencil3_acc_s, upwind_flux_s,
      sum_s,        dot_s,     wdot_s,    max_abs_s,    min_val_s,
      max_val_s,    sum_abs_pow_s, normalize3_s,
  };
  return t;
}

}  // namespace nemflow::kernels
