#include "combspec/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace combspec {

std::size_t default_thread_count() {
  if (const char* env = std::getenv("COMB_SPECTRA_THREADS"); env && *env) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != std::string(env).size() || v <= 0) {
      throw std::invalid_argument("COMB_SPECTRA_THREADS must be a positive integer, got '" +
                                  std::string(env) + "'");
    }
    return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::size_t resolve_thread_count(std::optional<std::size_t> flag) {
  if (flag) {
    if (*flag == 0) throw std::invalid_argument("thread count must be positive");
    return *flag;
  }
  return default_thread_count();
}

}  // namespace combspec
