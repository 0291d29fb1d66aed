#ifndef SPHWHITTLE_ERROR_HPP
#define SPHWHITTLE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sphwhittle {

/// Failure categories raised by the library. Every throw site uses
/// `sphwhittle::error`, so callers can switch on `code()`.
enum class errc {
  invalid_argument,
  out_of_range,
  unsupported,
  non_positive_amplitude,
  non_positive_value,
  degenerate_band,
  band_too_narrow,
  unsupported_regime,
  singular_exponent,
  empty_sample,
  degenerate_sample,
  sample_size_out_of_range,
  all_replications_failed,
  io_error,
};

constexpr std::string_view to_string(errc c) noexcept {
  switch (c) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::out_of_range: return "OutOfRange";
    case errc::unsupported: return "Unsupported";
    case errc::non_positive_amplitude: return "NonPositiveAmplitude";
    case errc::non_positive_value: return "NonPositiveValue";
    case errc::degenerate_band: return "DegenerateBand";
    case errc::band_too_narrow: return "BandTooNarrow";
    case errc::unsupported_regime: return "UnsupportedRegime";
    case errc::singular_exponent: return "SingularExponent";
    case errc::empty_sample: return "EmptySample";
    case errc::degenerate_sample: return "DegenerateSample";
    case errc::sample_size_out_of_range: return "SampleSizeOutOfRange";
    case errc::all_replications_failed: return "AllReplicationsFailed";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

namespace detail {

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace detail
}  // namespace sphwhittle

#endif  // SPHWHITTLE_ERROR_HPP
