#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtomo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error codes shared with the C API layer.
enum class Errc {
  ok = 0,
  invalid_argument,
  invalid_phantom,
  no_disc,
  axis_error,
  incomplete_data,
  out_of_range,
  out_of_gamut,
  out_of_band,
  empty_region,
  normalization,
  singular_configuration,
  no_physical_energy,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace dtomo
