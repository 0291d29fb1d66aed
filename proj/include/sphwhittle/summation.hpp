#ifndef SPHWHITTLE_SUMMATION_HPP
#define SPHWHITTLE_SUMMATION_HPP

#include <cmath>

namespace sphwhittle {

/// Neumaier's variant of Kahan compensated summation.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace sphwhittle

#endif  // SPHWHITTLE_SUMMATION_HPP
