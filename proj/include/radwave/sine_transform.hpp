#ifndef RADWAVE_SINE_TRANSFORM_HPP
#define RADWAVE_SINE_TRANSFORM_HPP

#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "radwave/radial_field.hpp"

namespace radwave {

namespace detail {

// FFTW ships one library per precision; these traits pick the right one.
template <typename Scalar>
struct FftwApi;

template <>
struct FftwApi<double> {
  using plan = fftw_plan;
  static plan make(int n, double* in, double* out) {
    return fftw_plan_r2r_1d(n, in, out, FFTW_RODFT00,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, double* in, double* out) {
    fftw_execute_r2r(p, in, out);
  }
  static void destroy(plan p) { fftw_destroy_plan(p); }
};

template <>
struct FftwApi<float> {
  using plan = fftwf_plan;
  static plan make(int n, float* in, float* out) {
    return fftwf_plan_r2r_1d(n, in, out, FFTW_RODFT00,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, float* in, float* out) {
    fftwf_execute_r2r(p, in, out);
  }
  static void destroy(plan p) { fftwf_destroy_plan(p); }
};

template <>
struct FftwApi<long double> {
  using plan = fftwl_plan;
  static plan make(int n, long double* in, long double* out) {
    return fftwl_plan_r2r_1d(n, in, out, FFTW_RODFT00,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, long double* in, long double* out) {
    fftwl_execute_r2r(p, in, out);
  }
  static void destroy(plan p) { fftwl_destroy_plan(p); }
};

// The FFTW planner is not thread safe, across precisions included.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

/**
 * Unnormalized type-I discrete sine transform
 *
 *   y_k = sum_{j=1}^{n} sin(k j pi / (n + 1)) x_j,   k = 1..n,
 *
 * in O(n log n). Plans are created once per size and shared; applying a
 * plan is safe from several threads at once.
 */
template <typename Scalar>
class SineTransform {
 public:
  explicit SineTransform(Index n) : n_(n) {
    if (n < 1) throw ConfigError("sine transform size must be positive");
    Vector<Scalar> in = Vector<Scalar>::Zero(n), out(n);
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    plan_ = Api::make(static_cast<int>(n), in.data(), out.data());
    if (!plan_) throw NumericalError("FFTW could not plan a DST-I of size " +
                                     std::to_string(n));
  }
  ~SineTransform() {
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    Api::destroy(plan_);
  }
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  Index size() const { return n_; }

  Vector<Scalar> apply(const Vector<Scalar>& x) const {
    if (x.size() != n_)
      throw ConfigError("sine transform input has the wrong length");
    Vector<Scalar> y(n_);
    // RODFT00 preserves its input and computes 2 * sum(...).
    Api::run(plan_, const_cast<Scalar*>(x.data()), y.data());
    y *= Scalar(0.5);
    return y;
  }

  /// Shared plan for size n, built on first use.
  static std::shared_ptr<const SineTransform> cached(Index n) {
    static std::mutex cache_mutex;
    static std::map<Index, std::shared_ptr<const SineTransform>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const SineTransform>(n);
    return slot;
  }

 private:
  using Api = detail::FftwApi<Scalar>;
  Index n_;
  typename Api::plan plan_{};
};

}  // namespace radwave

#endif  // RADWAVE_SINE_TRANSFORM_HPP
