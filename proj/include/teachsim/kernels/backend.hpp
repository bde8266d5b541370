#pragma once

#include <string_view>

namespace teachsim::kern {

enum class Backend { scalar, avx2 };

// True when the running CPU can execute the AVX2+FMA kernels.
bool cpu_supports_avx2();

// True when this build contains the AVX2 kernels at all.
bool avx2_compiled();

// Active kernel backend. Defaults to the fastest supported one; the
// TEACHSIM_KERNEL environment variable ("scalar" or "avx2") overrides it at
// startup.
Backend active_backend();

// Throws std::invalid_argument if the requested backend is unavailable.
void set_backend(Backend b);

std::string_view backend_name(Backend b);

}  // namespace teachsim::kern
