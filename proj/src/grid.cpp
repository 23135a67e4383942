#include "weightlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weightlab/error.hpp"

namespace weightlab {

Grid::Grid(double half_width, int resolution_exponent)
    : half_width_(half_width),
      exponent_(resolution_exponent),
      size_(std::size_t{1} << resolution_exponent),
      cell_width_(2.0 * half_width / static_cast<double>(size_)) {}

double Grid::midpoint(std::size_t i) const noexcept {
    return -half_width_ + (static_cast<double>(i) + 0.5) * cell_width_;
}

std::vector<double> Grid::midpoints() const {
    std::vector<double> x(size_);
    for (std::size_t i = 0; i < size_; ++i) x[i] = midpoint(i);
    return x;
}

Grid make_grid(double half_width, int resolution_exponent) {
    if (resolution_exponent < kMinResolution || resolution_exponent > kMaxResolution) {
        throw ConfigError("resolution exponent " + std::to_string(resolution_exponent) +
                          " outside [3, 20]");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ConfigError("half width must be positive and finite");
    }
    return Grid(half_width, resolution_exponent);
}

void check_interval(const Interval& interval, std::size_t cells) {
    if (interval.length == 0 || interval.start >= cells || interval.length > cells - interval.start) {
        throw BoundsError("interval [" + std::to_string(interval.start) + ", +" +
                          std::to_string(interval.length) + ") outside grid of " +
                          std::to_string(cells) + " cells");
    }
}

PrefixSums::PrefixSums(std::span<const double> f) : sums_(f.size() + 1, 0.0) {
    for (std::size_t i = 0; i < f.size(); ++i) sums_[i + 1] = sums_[i] + f[i];
}

double PrefixSums::integral_to(double x) const noexcept {
    const double n = static_cast<double>(size());
    x = std::clamp(x, 0.0, n);
    const auto cell = static_cast<std::size_t>(std::floor(x));
    if (cell >= size()) return sums_.back();
    const double frac = x - static_cast<double>(cell);
    return sums_[cell] + frac * (sums_[cell + 1] - sums_[cell]);
}

double average(std::span<const double> f, const Interval& interval) {
    check_interval(interval, f.size());
    return PrefixSums(f).mean(interval.start, interval.end());
}

}  // namespace weightlab
