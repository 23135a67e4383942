#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/grid.hpp"

namespace weightlab {

using Samples = std::vector<double>;

/// A strictly positive weight on a grid, one sample vector per fiber. The
/// essential supremum over the fiber space is the max over this list.
class Weight {
public:
    /// Throws InvariantError on a nonpositive or non-finite sample and
    /// BoundsError if a fiber does not have grid.size() samples.
    Weight(Grid grid, std::vector<Samples> fibers);
    Weight(Grid grid, Samples single_fiber);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t fiber_count() const noexcept { return fibers_.size(); }
    std::span<const double> fiber(std::size_t index) const { return fibers_.at(index); }
    const std::vector<Samples>& fibers() const noexcept { return fibers_; }

    /// Pointwise w^exponent.
    Weight pow(double exponent) const;
    Weight scaled(double factor) const;

private:
    Grid grid_;
    std::vector<Samples> fibers_;
};

Weight operator*(const Weight& a, const Weight& b);
/// Pointwise maximum u v v and minimum u ^ v.
Weight max(const Weight& a, const Weight& b);
Weight min(const Weight& a, const Weight& b);
/// u^theta v^(1-theta).
Weight geometric_mix(const Weight& u, const Weight& v, double theta);

Weight constant_weight(const Grid& grid, double value);
/// |x|^a sampled at cell midpoints.
Weight power_weight(const Grid& grid, double exponent);
/// 1 on [-L, 0), K on [0, L].
Weight step_weight(const Grid& grid, double jump);
/// Piecewise-constant weight with `pieces` equal blocks, log-values uniform in
/// [-spread, spread]; deterministic in `seed`.
Weight random_piecewise_weight(const Grid& grid, std::uint64_t seed, int pieces = 8, double spread = 1.5);

/// Parses `const:c=<v>`, `power:a=<v>`, `step:K=<v>` or `csv:<path>` (one
/// column per fiber, N rows, optional header). Throws ParseError.
Weight parse_weight(std::string_view spec, const Grid& grid);

/// Largest |a_i - b_i| / max(|a_i|, |b_i|) over all samples of all fibers.
double max_relative_difference(const Weight& a, const Weight& b);

}  // namespace weightlab
