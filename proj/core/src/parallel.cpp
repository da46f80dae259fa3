#include "flexagg/parallel.hpp"

#include <cstdlib>
#include <string>

namespace flexagg {

int worker_count() {
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("FLEXAGG_THREADS");
  if (env == nullptr) return static_cast<int>(hardware);
  try {
    const int requested = std::stoi(env);
    if (requested > 0) return requested;
  } catch (const std::exception&) {
    // Unparseable values fall back to auto.
  }
  return static_cast<int>(hardware);
}

}  // namespace flexagg
