#pragma once

#include <cstddef>

// Elementwise math kernels used in the simulation inner loops.
//
// Every function here is implemented twice: a scalar reference version and an
// AVX2 version that performs the identical operation sequence per lane.  The
// two produce bit-identical results (the build disables FP contraction), so
// runtime backend selection never affects simulation output.  libm is not
// used by these kernels; it serves only as an independent oracle in tests.

namespace crsim::kern {

enum class Backend { scalar, avx2 };

bool cpu_supports_avx2();
Backend active_backend();
// Overrides the auto-detected backend (tests). Throws std::invalid_argument
// if the requested backend is unavailable on this CPU.
void set_backend(Backend b);

// Scalar reference kernels.
double exp_d(double x);
double log_d(double x);
double erfc_d(double x);
double phi(double x);       // standard normal CDF, abs error < 1e-15
double inv_phi(double p);   // inverse standard normal CDF, p in (0,1)

// Batch variants dispatched to the active backend.
void exp_batch(const double* x, double* out, std::size_t n);
void phi_batch(const double* x, double* out, std::size_t n);
void inv_phi_batch(const double* p, double* out, std::size_t n);

namespace detail {
void exp_batch_scalar(const double* x, double* out, std::size_t n);
void phi_batch_scalar(const double* x, double* out, std::size_t n);
void inv_phi_batch_scalar(const double* p, double* out, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
void exp_batch_avx2(const double* x, double* out, std::size_t n);
void phi_batch_avx2(const double* x, double* out, std::size_t n);
void inv_phi_batch_avx2(const double* p, double* out, std::size_t n);
#endif
}  // namespace detail

}  // namespace crsim::kern
