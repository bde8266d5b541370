#include "teachsim/kernels/backend.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "teachsim/kernels/likelihood.hpp"

namespace teachsim::kern {

bool cpu_supports_avx2() {
#if TEACHSIM_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool avx2_compiled() {
#if TEACHSIM_X86
  return true;
#else
  return false;
#endif
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("TEACHSIM_KERNEL")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!(avx2_compiled() && cpu_supports_avx2()))
        throw std::runtime_error("TEACHSIM_KERNEL=avx2 but AVX2 is unavailable");
      return Backend::avx2;
    }
    throw std::runtime_error("TEACHSIM_KERNEL must be 'scalar' or 'avx2'");
  }
  return (avx2_compiled() && cpu_supports_avx2()) ? Backend::avx2 : Backend::scalar;
}

Backend& backend_state() {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

Backend active_backend() { return backend_state(); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !(avx2_compiled() && cpu_supports_avx2()))
    throw std::invalid_argument("AVX2 backend unavailable on this machine/build");
  backend_state() = b;
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void CompiledChoices::resize(int trial_count) {
  trials = trial_count;
  stride = trial_count;  // tail trials are handled by the scalar range kernel
  slot_type.assign(static_cast<std::size_t>(20) * stride, 0);
  chosen_type.assign(static_cast<std::size_t>(5) * stride, 0);
  pick_flag.assign(static_cast<std::size_t>(5) * stride, 0.0);
  chosen_flag.assign(static_cast<std::size_t>(4) * stride, 0.0);
}

double log_likelihood_backend(const CompiledChoices& data, const CellTable& cells, Backend b) {
#if TEACHSIM_X86
  if (b == Backend::avx2) return log_likelihood_avx2(data, cells);
#else
  (void)b;
#endif
  return log_likelihood_scalar(data, cells, 0, data.trials);
}

double log_likelihood(const CompiledChoices& data, const CellTable& cells) {
  return log_likelihood_backend(data, cells, active_backend());
}

}  // namespace teachsim::kern
