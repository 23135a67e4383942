#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "weightlab/grid.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// Uncentered maximal function over grid intervals:
/// (Mf)(i) = max over [l, r] containing i of the mean of f on [l, r].
/// Exact, O(N^2). Throws DomainError on a negative sample.
Samples maximal(std::span<const double> f);

/// Midpoint principal-value rule, evaluated directly in O(N^2):
/// (Hf)(x_i) = (1/pi) sum_{j != i} f(x_j) dx / (x_i - x_j).
Samples hilbert(std::span<const double> f, const Grid& grid);

/// A discretized operator on one grid. Linear kinds (identity, hilbert,
/// custom kernel) expose apply/apply_transpose; hilbert uses an FFT
/// Toeplitz product that matches the direct rule to rounding.
class DiscreteOperator {
public:
    enum class Kind { identity, hilbert, maximal, custom_kernel };
    /// K(x, y); the operator is (Tf)(x_i) = sum_j K(x_i, x_j) f_j dx.
    using Kernel = std::function<double(double x, double y)>;

    static DiscreteOperator identity(const Grid& grid);
    static DiscreteOperator hilbert(const Grid& grid);
    static DiscreteOperator maximal(const Grid& grid);
    /// Dense kernel operator. `kernel` must be antisymmetric; throws DomainError otherwise.
    static DiscreteOperator custom(const Grid& grid, Kernel kernel, std::string name = "custom");

    Kind kind() const noexcept { return kind_; }
    const Grid& grid() const noexcept { return grid_; }
    const std::string& name() const noexcept { return name_; }
    bool is_linear() const noexcept { return kind_ != Kind::maximal; }
    /// True if the kernel depends only on the cell offset i - j.
    bool is_translation_invariant() const noexcept { return kind_ != Kind::custom_kernel; }

    Samples apply(std::span<const double> f) const;
    /// Plain (unweighted) transpose. DomainError for the maximal operator.
    Samples apply_transpose(std::span<const double> f) const;

private:
    struct State;
    DiscreteOperator(Kind kind, Grid grid, std::string name, std::shared_ptr<const State> state);

    Kind kind_;
    Grid grid_;
    std::string name_;
    std::shared_ptr<const State> state_;
};

/// Norm of T on the space with squared norm sum |f_i|^2 w_i dx.
struct WeightedNormReport {
    double norm = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

inline constexpr int kPowerIterationLimit = 10000;
inline constexpr double kPowerIterationTolerance = 1e-8;

/// Power iteration on the weighted adjoint composition T^# T from a fixed
/// start vector. Stops when the relative change of the norm estimate falls
/// below 1e-8; throws ConvergenceError (carrying the last estimate) after
/// 10^4 iterations. DomainError for a nonlinear operator.
WeightedNormReport op_norm_weighted(const DiscreteOperator& op, const Weight& w, std::size_t fiber);

/// Norm of T acting fiberwise on the stacked space of all fibers.
WeightedNormReport op_norm_weighted_joint(const DiscreteOperator& op, const Weight& w);

/// Lower estimate of ||T|| on discrete L^p by Boyd's nonlinear power method
/// from a few fixed start vectors.
double op_norm_lp(const DiscreteOperator& op, double p);

inline constexpr double kMaximalNormSafety = 1.5;

/// Largest ||Mf||_p / ||f||_p over a fixed family (indicators, near-critical
/// power singularities, seeded random profiles) times 1.5. Cached per (p, grid).
/// Throws DomainError for p <= 1.
double maximal_norm_lp(double p, const Grid& grid);

/// Test profile used by the nondegeneracy sweep.
struct TestFunctionTag {
    enum class Family { indicator, random } family = Family::indicator;
    /// Indicator: sub-interval of B relative to B's first cell. Random: seed index.
    std::size_t offset = 0;
    std::size_t length = 0;
    std::uint64_t seed = 0;

    std::string describe() const;
};

struct NondegReport {
    double shift = 0.0;
    double empirical_c = 0.0;
    Interval worst_interval;
    /// +1 for B + r*shift, -1 for B - r*shift.
    int worst_side = 1;
    TestFunctionTag worst_test_function;
};

inline constexpr int kNondegRandomProfiles = 32;

/// min over admissible balls B, test profiles f >= 0 supported on B and cells
/// x in B +- r*shift of |Tf(x)| / mean_B f, with r = |B|/2. Balls have even
/// lengths 2^j and the shifted copies must stay inside the domain.
/// Throws DomainError for shift < 2 and ConfigError if no ball is admissible.
NondegReport nondegeneracy_constant(const DiscreteOperator& op, double shift);

struct ShiftAp2Report {
    double c = 0.0;           ///< empirical nondegeneracy constant
    double m = 0.0;           ///< weighted operator norm (worst fiber)
    double worst_ratio = 0.0; ///< max over B, B' of lhs / (2 c^-2 m^2)
    Interval worst_interval;
    bool shift_pass = false;
    double ap2 = 0.0;
    double doubling_inverse = 0.0;
    double geometry_factor = 0.0; ///< C_w = doubling(w^-1)^k, k = ceil(log2(1 + shift))
    double ap2_over_m2 = 0.0;
    double fitted_ct = 0.0;
    double ap2_ratio = 0.0;       ///< [w]_A2 / (c_T C_w m^2)
    bool ap2_pass = false;
    bool pass = false;
};

/// Checks the shifted A_2 estimate on every admissible ball and both shifts,
/// then [w]_A2 <= c_T C_w m^2 with c_T = `fitted_ct`.
ShiftAp2Report verify_shift_ap2(const DiscreteOperator& op, const Weight& w, double shift, double fitted_ct);

}  // namespace weightlab
