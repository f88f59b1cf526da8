// AVX2 kernel variants.  Compiled with -mavx2 -mfma; only dispatched to when
// cpuid reports both features.  Pointwise kernels keep the exact operation
// order of the scalar reference (fma included) so results match bit for bit;
// reductions accumulate per lane and agree with the reference to roundoff.

#ifdef NEMFLOW_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "nemflow/kernels.hpp"

namespace nemflow::kernels {
namespace {

constexpr std::size_t W = 4;  // doubles per ymm

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

void axpby_v(std::size_t n, double a, const double* x, double b,
             const double* y, double* out) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d vx = _mm256_loadu_pd(x + i), vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, vx, _mm256_mul_pd(vb, vy)));
  }
  for (; i < n; ++i) out[i] = std::fma(a, x[i], b * y[i]);
}

void scale_v(std::size_t n, double a, const double* x, double* out) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + W <= n; i += W)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void add_scaled_v(std::size_t n, double a, const double* x, double* inout) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d vx = _mm256_loadu_pd(x + i), vo = _mm256_loadu_pd(inout + i);
    _mm256_storeu_pd(inout + i, _mm256_fmadd_pd(va, vx, vo));
  }
  for (; i < n; ++i) inout[i] = std::fma(a, x[i], inout[i]);
}

void mul_v(std::size_t n, const double* x, const double* y, double* out) {
  std::size_t i = 0;
  for (; i + W <= n; i += W)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void fill_v(std::size_t n, double v, double* out) {
  const __m256d vv = _mm256_set1_pd(v);
  std::size_t i = 0;
  for (; i + W <= n; i += W) _mm256_storeu_pd(out + i, vv);
  for (; i < n; ++i) out[i] = v;
}

void stencil3_v(std::size_t n, double cm, const double* xm, double cc,
                const double* xc, double cp, const double* xp, double* out) {
  const __m256d vm = _mm256_set1_pd(cm), vc = _mm256_set1_pd(cc),
                vp = _mm256_set1_pd(cp);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d tp = _mm256_mul_pd(vp, _mm256_loadu_pd(xp + i));
    const __m256d tc = _mm256_fmadd_pd(vc, _mm256_loadu_pd(xc + i), tp);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vm, _mm256_loadu_pd(xm + i), tc));
  }
  for (; i < n; ++i)
    out[i] = std::fma(cm, xm[i], std::fma(cc, xc[i], cp * xp[i]));
}

void stencil3_acc_v(std::size_t n, double cm, const double* xm, double cc,
                    const double* xc, double cp, const double* xp,
                    double* out) {
  const __m256d vm = _mm256_set1_pd(cm), vc = _mm256_set1_pd(cc),
                vp = _mm256_set1_pd(cp);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d t0 = _mm256_fmadd_pd(vp, _mm256_loadu_pd(xp + i),
                                       _mm256_loadu_pd(out + i));
    const __m256d t1 = _mm256_fmadd_pd(vc, _mm256_loadu_pd(xc + i), t0);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vm, _mm256_loadu_pd(xm + i), t1));
  }
  for (; i < n; ++i)
    out[i] = std::fma(cm, xm[i], std::fma(cc, xc[i], std::fma(cp, xp[i], out[i])));
}

void upwind_flux_v(std::size_t n, const double* ul, const double* ur,
                   const double* lo, const double* hi, double* out) {
  const __m256d half = _mm256_set1_pd(0.5), zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d ub = _mm256_mul_pd(
        half, _mm256_add_pd(_mm256_loadu_pd(ul + i), _mm256_loadu_pd(ur + i)));
    const __m256d up = _mm256_mul_pd(_mm256_max_pd(ub, zero),
                                     _mm256_loadu_pd(lo + i));
    const __m256d dn = _mm256_mul_pd(_mm256_min_pd(ub, zero),
                                     _mm256_loadu_pd(hi + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(up, dn));
  }
  for (; i < n; ++i) {
    const double ub = 0.5 * (ul[i] + ur[i]);
    out[i] = std::fmax(ub, 0.0) * lo[i] + std::fmin(ub, 0.0) * hi[i];
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(s, _mm_unpackhi_pd(s, s)));
}

// Per-lane Neumaier compensation keeps reduction error independent of n,
// which the long-run conservation checks lean on.
struct VecCompensated {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  inline void add(__m256d v) {
    const __m256d t = _mm256_add_pd(s, v);
    const __m256d mask = _mm256_cmp_pd(abs_pd(s), abs_pd(v), _CMP_GE_OQ);
    const __m256d big = _mm256_blendv_pd(v, s, mask);
    const __m256d small = _mm256_blendv_pd(s, v, mask);
    c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
    s = t;
  }
  inline void spill(double* s4, double* c4) const {
    _mm256_storeu_pd(s4, s);
    _mm256_storeu_pd(c4, c);
  }
};

struct ScalarCompensated {
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

inline double collapse(const VecCompensated& acc, ScalarCompensated& tail) {
  double s4[4], c4[4];
  acc.spill(s4, c4);
  for (int l = 0; l < 4; ++l) tail.add(s4[l]);
  for (int l = 0; l < 4; ++l) tail.add(c4[l]);
  return tail.value();
}

double sum_v(std::size_t n, const double* x) {
  VecCompensated acc;
  std::size_t i = 0;
  for (; i + W <= n; i += W) acc.add(_mm256_loadu_pd(x + i));
  ScalarCompensated tail;
  for (; i < n; ++i) tail.add(x[i]);
  return collapse(acc, tail);
}

double dot_v(std::size_t n, const double* x, const double* y) {
  VecCompensated acc;
  std::size_t i = 0;
  for (; i + W <= n; i += W)
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  ScalarCompensated tail;
  for (; i < n; ++i) tail.add(x[i] * y[i]);
  return collapse(acc, tail);
}

double wdot_v(std::size_t n, const double* w, const double* x,
              const double* y) {
  VecCompensated acc;
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i),
                                     _mm256_loadu_pd(x + i));
    acc.add(_mm256_mul_pd(wx, _mm256_loadu_pd(y + i)));
  }
  ScalarCompensated tail;
  for (; i < n; ++i) tail.add(w[i] * x[i] * y[i]);
  return collapse(acc, tail);
}

double max_abs_v(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + W <= n; i += W)
    acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

double min_val_v(std::size_t n, const double* x) {
  if (n == 0) return 0.0;
  double m = x[0];
  std::size_t i = 0;
  if (n >= W) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = W; i + W <= n; i += W)
      acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    m = hmin(acc);
  }
  for (; i < n; ++i) m = std::fmin(m, x[i]);
  return m;
}

double max_val_v(std::size_t n, const double* x) {
  if (n == 0) return 0.0;
  double m = x[0];
  std::size_t i = 0;
  if (n >= W) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = W; i + W <= n; i += W)
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    m = hmax(acc);
  }
  for (; i < n; ++i) m = std::fmax(m, x[i]);
  return m;
}

double sum_abs_pow_v(std::size_t n, const double* x, double p) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (p == 1.0) {
    for (; i + W <= n; i += W)
      acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(x[i]);
    return s;
  }
  if (p == 2.0) {
    for (; i + W <= n; i += W) {
      const __m256d v = _mm256_loadu_pd(x + i);
      acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
  }
  if (p == 3.0) {
    for (; i + W <= n; i += W) {
      const __m256d v = _mm256_loadu_pd(x + i);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), abs_pd(v), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i] * std::fabs(x[i]);
    return s;
  }
  if (p == 4.0) {
    for (; i + W <= n; i += W) {
      const __m256d v = _mm256_loadu_pd(x + i);
      const __m256d q = _mm256_mul_pd(v, v);
      acc = _mm256_fmadd_pd(q, q, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
      const double q = x[i] * x[i];
      s += q * q;
    }
    return s;
  }
  if (p == 6.0) {
    for (; i + W <= n; i += W) {
      const __m256d v = _mm256_loadu_pd(x + i);
      const __m256d q = _mm256_mul_pd(v, v);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(q, q), q, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
      const double q = x[i] * x[i];
      s += q * q * q;
    }
    return s;
  }
  return scalar_table().sum_abs_pow(n, x, p);  // no vector pow; defer
}

double normalize3_v(std::size_t n, double* x, double* y, double* z) {
  const __m256d one = _mm256_set1_pd(1.0), zero = _mm256_setzero_pd();
  __m256d vdrift = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    const __m256d vx = _mm256_loadu_pd(x + i), vy = _mm256_loadu_pd(y + i),
                  vz = _mm256_loadu_pd(z + i);
    // keep the scalar order: (x*x + y*y) + z*z
    const __m256d m2 = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy)),
        _mm256_mul_pd(vz, vz));
    const __m256d m = _mm256_sqrt_pd(m2);
    vdrift = _mm256_max_pd(vdrift, abs_pd(_mm256_sub_pd(m, one)));
    const __m256d ok = _mm256_cmp_pd(m, zero, _CMP_GT_OQ);
    const __m256d safe = _mm256_blendv_pd(one, m, ok);
    _mm256_storeu_pd(x + i, _mm256_blendv_pd(vx, _mm256_div_pd(vx, safe), ok));
    _mm256_storeu_pd(y + i, _mm256_blendv_pd(vy, _mm256_div_pd(vy, safe), ok));
    _mm256_storeu_pd(z + i, _mm256_blendv_pd(vz, _mm256_div_pd(vz, safe), ok));
  }
  double drift = hmax(vdrift);
  for (; i < n; ++i) {
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

const KernelTable& avx2_table() {
  static const KernelTable t = {
      "avx2",       axpby_v,   scale_v,   add_scaled_v, mul_v,
      fill_v,       stencil3_v, stencil3_acc_v, upwind_flux_v,
      sum_v,        dot_v,     wdot_v,    max_abs_v,    min_val_v,
      max_val_v,    sum_abs_pow_v, normalize3_v,
  };
  return t;
}

}  // namespace nemflow::kernels

#endif  // NEMFLOW_HAVE_AVX2
