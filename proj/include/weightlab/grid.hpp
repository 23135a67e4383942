#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace weightlab {

/// Uniform partition of [-L, L] into N = 2^k cells. Cell i has midpoint
/// -L + (i + 1/2) * cell_width.
class Grid {
public:
    Grid(double half_width, int resolution_exponent);

    double half_width() const noexcept { return half_width_; }
    int resolution_exponent() const noexcept { return exponent_; }
    std::size_t size() const noexcept { return size_; }
    double cell_width() const noexcept { return cell_width_; }
    double midpoint(std::size_t i) const noexcept;
    std::vector<double> midpoints() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double half_width_;
    int exponent_;
    std::size_t size_;
    double cell_width_;
};

inline constexpr int kMinResolution = 3;
inline constexpr int kMaxResolution = 20;

/// Throws ConfigError unless 3 <= resolution_exponent <= 20 and half_width > 0.
Grid make_grid(double half_width, int resolution_exponent);

/// Contiguous cell range [start, start + length). Plays the role of a ball.
struct Interval {
    std::size_t start = 0;
    std::size_t length = 1;

    std::size_t end() const noexcept { return start + length; }
    bool contains(std::size_t cell) const noexcept { return cell >= start && cell < end(); }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Throws BoundsError if `interval` is empty or does not fit in `cells` cells.
void check_interval(const Interval& interval, std::size_t cells);

/// Prefix sums with a leading zero: sums[i] = f[0] + ... + f[i-1].
class PrefixSums {
public:
    PrefixSums() = default;
    explicit PrefixSums(std::span<const double> f);

    std::size_t size() const noexcept { return sums_.empty() ? 0 : sums_.size() - 1; }
    double sum(std::size_t begin, std::size_t end) const noexcept { return sums_[end] - sums_[begin]; }
    double mean(std::size_t begin, std::size_t end) const noexcept {
        return (sums_[end] - sums_[begin]) / static_cast<double>(end - begin);
    }
    /// Integral of the piecewise-constant function over [0, x] in cell units;
    /// x may be fractional and is clamped to [0, size()].
    double integral_to(double x) const noexcept;

private:
    std::vector<double> sums_;
};

/// Arithmetic mean of f over the cells of `interval`, via prefix sums.
double average(std::span<const double> f, const Interval& interval);

}  // namespace weightlab
