#pragma once
// Low-level array kernels behind the field operators.
//
// Every kernel has a scalar reference implementation and, where the build and
// the host CPU allow it, an AVX2 variant.  The active table is picked once at
// startup (cpuid, overridable via NEMFLOW_ISA=scalar|avx2) and the two
// implementations are equivalence-tested against each other.  Pointwise
// kernels are written so both variants round identically (scalar uses fma to
// match the vector FMA contraction); reductions may differ in association
// order and agree only to roundoff.

#include <cstddef>

namespace nemflow::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  const char* name;

  // out[i] = a*x[i] + b*y[i]
  void (*axpby)(std::size_t n, double a, const double* x, double b,
                const double* y, double* out);
  // out[i] = a*x[i]
  void (*scale)(std::size_t n, double a, const double* x, double* out);
  // inout[i] += a*x[i]
  void (*add_scaled)(std::size_t n, double a, const double* x, double* inout);
  // out[i] = x[i]*y[i]
  void (*mul)(std::size_t n, const double* x, const double* y, double* out);
  void (*fill)(std::size_t n, double v, double* out);
  // out[i] = cm*xm[i] + cc*xc[i] + cp*xp[i]   (xm/xp are shifted views)
  void (*stencil3)(std::size_t n, double cm, const double* xm, double cc,
                   const double* xc, double cp, const double* xp, double* out);
  // out[i] += cm*xm[i] + cc*xc[i] + cp*xp[i]
  void (*stencil3_acc)(std::size_t n, double cm, const double* xm, double cc,
                       const double* xc, double cp, const double* xp,
                       double* out);
  // face flux: ub = (ul+ur)/2, out = max(ub,0)*lo + min(ub,0)*hi
  void (*upwind_flux)(std::size_t n, const double* ul, const double* ur,
                      const double* lo, const double* hi, double* out);

  double (*sum)(std::size_t n, const double* x);
  double (*dot)(std::size_t n, const double* x, const double* y);
  // sum of w[i]*x[i]*y[i]
  double (*wdot)(std::size_t n, const double* w, const double* x,
                 const double* y);
  double (*max_abs)(std::size_t n, const double* x);
  double (*min_val)(std::size_t n, const double* x);
  double (*max_val)(std::size_t n, const double* x);
  // sum of |x[i]|^p; p in {1,2,3,4,6} hits fast paths
  double (*sum_abs_pow)(std::size_t n, const double* x, double p);
  // normalize (x,y,z) triples to unit length in place; zero vectors are left
  // alone.  Returns max_i | |v_i| - 1 | before normalization.
  double (*normalize3)(std::size_t n, double* x, double* y, double* z);
};

const KernelTable& scalar_table();
#ifdef NEMFLOW_HAVE_AVX2
const KernelTable& avx2_table();
#endif

// Table selected at startup; stable for the life of the process unless
// select() is called (tests only).
const KernelTable& active();
void select(Isa isa);
Isa active_isa();
bool avx2_available();

}  // namespace nemflow::kernels
