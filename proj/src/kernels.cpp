#include "crsim/kernels.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kernels_impl.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <cpuid.h>
#endif

namespace crsim::kern {

namespace {

using SK = impl::Kern<impl::ScalarOps>;

Backend detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_supports_avx2()) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
  return (ebx & (1u << 5)) != 0;
#else
  return false;
#endif
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !cpu_supports_avx2())
    throw std::invalid_argument("avx2 backend requested but not supported by this CPU");
  backend_slot().store(b, std::memory_order_relaxed);
}

double exp_d(double x) { return SK::exp(x); }

double log_d(double x) {
  if (x > 0.0) return SK::log(x);
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

double erfc_d(double x) { return SK::erfc(x); }

double phi(double x) { return SK::phi(x); }

double inv_phi(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inv_phi: p must lie in (0,1)");
  return SK::inv_phi(p);
}

namespace detail {

void exp_batch_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = SK::exp(x[i]);
}

void phi_batch_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = SK::phi(x[i]);
}

void inv_phi_batch_scalar(const double* p, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = SK::inv_phi(p[i]);
}

}  // namespace detail

void exp_batch(const double* x, double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return detail::exp_batch_avx2(x, out, n);
#endif
  detail::exp_batch_scalar(x, out, n);
}

void phi_batch(const double* x, double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return detail::phi_batch_avx2(x, out, n);
#endif
  detail::phi_batch_scalar(x, out, n);
}

void inv_phi_batch(const double* p, double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return detail::inv_phi_batch_avx2(p, out, n);
#endif
  detail::inv_phi_batch_scalar(p, out, n);
}

}  // namespace crsim::kern
