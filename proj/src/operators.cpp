#include "weightlab/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

#include "weightlab/constants.hpp"
#include "weightlab/error.hpp"

namespace weightlab {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

double hilbert_offset_kernel(long d) {
    return d == 0 ? 0.0 : 1.0 / (std::numbers::pi * static_cast<double>(d));
}

/// Circulant embedding of a Toeplitz operator with offset kernel k(i - j),
/// applied by real FFTs of length 2N.
class ToeplitzFft {
public:
    ToeplitzFft(std::size_t n, const std::function<double(long)>& offset_kernel) : n_(n), spectrum_(n + 1) {
        std::vector<double> c(2 * n, 0.0);
        for (std::size_t d = 0; d < n; ++d) c[d] = offset_kernel(static_cast<long>(d));
        for (std::size_t d = 1; d < n; ++d) c[2 * n - d] = offset_kernel(-static_cast<long>(d));
        {
            std::lock_guard lock(fftw_planner_mutex());
            forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(2 * n), c.data(),
                                            reinterpret_cast<fftw_complex*>(spectrum_.data()), FFTW_ESTIMATE);
            std::vector<std::complex<double>> tmp_spec(n + 1);
            std::vector<double> tmp_real(2 * n);
            backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(2 * n),
                                             reinterpret_cast<fftw_complex*>(tmp_spec.data()), tmp_real.data(),
                                             FFTW_ESTIMATE);
        }
        fftw_execute(forward_);
    }
    ToeplitzFft(const ToeplitzFft&) = delete;
    ToeplitzFft& operator=(const ToeplitzFft&) = delete;
    ~ToeplitzFft() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    Samples apply(std::span<const double> f, bool transpose) const {
        std::vector<double> padded(2 * n_, 0.0);
        std::copy(f.begin(), f.end(), padded.begin());
        std::vector<std::complex<double>> spec(n_ + 1);
        fftw_execute_dft_r2c(forward_, padded.data(), reinterpret_cast<fftw_complex*>(spec.data()));
        for (std::size_t k = 0; k <= n_; ++k) spec[k] *= transpose ? std::conj(spectrum_[k]) : spectrum_[k];
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(spec.data()), padded.data());
        const double scale = 1.0 / static_cast<double>(2 * n_);
        Samples out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = padded[i] * scale;
        return out;
    }

private:
    std::size_t n_;
    std::vector<std::complex<double>> spectrum_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

double lp_norm(std::span<const double> f, double p) {
    double s = 0.0;
    for (double v : f) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

double l2_norm(std::span<const double> f) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s);
}

}  // namespace

Samples maximal(std::span<const double> f) {
    const std::size_t n = f.size();
    for (double v : f) {
        if (!(v >= 0.0)) throw DomainError("maximal operator needs a nonnegative input");
    }
    PrefixSums sums(f);
    std::vector<double> inv_len(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) inv_len[k] = 1.0 / static_cast<double>(k);
    Samples m(f.begin(), f.end());
    // For each left end l, sweep right ends downwards keeping the best mean of
    // an interval [l, r] with r >= i; that interval contains every i in [l, r].
    for (std::size_t l = 0; l < n; ++l) {
        double best = 0.0;
        for (std::size_t r = n; r-- > l;) {
            const double mean = sums.sum(l, r + 1) * inv_len[r + 1 - l];
            best = std::max(best, mean);
            m[r] = std::max(m[r], best);
        }
    }
    return m;
}

Samples hilbert(std::span<const double> f, const Grid& grid) {
    const std::size_t n = f.size();
    if (n != grid.size()) throw BoundsError("hilbert: sample count does not match grid");
    Samples out(n, 0.0);
    const double dx = grid.cell_width();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = grid.midpoint(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += f[j] * dx / (xi - grid.midpoint(j));
        }
        out[i] = acc / std::numbers::pi;
    }
    return out;
}

struct DiscreteOperator::State {
    std::unique_ptr<ToeplitzFft> toeplitz;
    std::vector<double> dense;  // row-major N x N, entries K(x_i, x_j) dx
};

DiscreteOperator::DiscreteOperator(Kind kind, Grid grid, std::string name, std::shared_ptr<const State> state)
    : kind_(kind), grid_(grid), name_(std::move(name)), state_(std::move(state)) {}

DiscreteOperator DiscreteOperator::identity(const Grid& grid) {
    return DiscreteOperator(Kind::identity, grid, "identity", nullptr);
}

DiscreteOperator DiscreteOperator::hilbert(const Grid& grid) {
    auto state = std::make_shared<State>();
    state->toeplitz = std::make_unique<ToeplitzFft>(grid.size(), hilbert_offset_kernel);
    return DiscreteOperator(Kind::hilbert, grid, "hilbert", std::move(state));
}

DiscreteOperator DiscreteOperator::maximal(const Grid& grid) {
    return DiscreteOperator(Kind::maximal, grid, "maximal", nullptr);
}

DiscreteOperator DiscreteOperator::custom(const Grid& grid, Kernel kernel, std::string name) {
    const std::size_t n = grid.size();
    if (n > 4096) throw ConfigError("custom kernels are dense; resolution above 2^12 is not supported");
    auto state = std::make_shared<State>();
    state->dense.assign(n * n, 0.0);
    const double dx = grid.cell_width();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double k = kernel(grid.midpoint(i), grid.midpoint(j));
            if (!std::isfinite(k)) throw DomainError("custom kernel is not finite at a grid pair");
            state->dense[i * n + j] = k * dx;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double a = state->dense[i * n + j];
            const double b = state->dense[j * n + i];
            if (std::abs(a + b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
                throw DomainError("custom kernel is not antisymmetric");
            }
        }
    }
    return DiscreteOperator(Kind::custom_kernel, grid, std::move(name), std::move(state));
}

Samples DiscreteOperator::apply(std::span<const double> f) const {
    if (f.size() != grid_.size()) throw BoundsError("operator input does not match grid");
    switch (kind_) {
        case Kind::identity:
            return Samples(f.begin(), f.end());
        case Kind::hilbert:
            return state_->toeplitz->apply(f, false);
        case Kind::maximal: {
            Samples a(f.size());
            std::transform(f.begin(), f.end(), a.begin(), [](double v) { return std::abs(v); });
            return weightlab::maximal(a);
        }
        case Kind::custom_kernel: {
            const std::size_t n = f.size();
            Samples out(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += state_->dense[i * n + j] * f[j];
                out[i] = acc;
            }
            return out;
        }
    }
    return {};
}

Samples DiscreteOperator::apply_transpose(std::span<const double> f) const {
    if (f.size() != grid_.size()) throw BoundsError("operator input does not match grid");
    switch (kind_) {
        case Kind::identity:
            return Samples(f.begin(), f.end());
        case Kind::hilbert:
            return state_->toeplitz->apply(f, true);
        case Kind::maximal:
            throw DomainError("the maximal operator has no transpose");
        case Kind::custom_kernel: {
            const std::size_t n = f.size();
            Samples out(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                const double fj = f[j];
                for (std::size_t i = 0; i < n; ++i) out[i] += state_->dense[j * n + i] * fj;
            }
            return out;
        }
    }
    return {};
}

WeightedNormReport op_norm_weighted(const DiscreteOperator& op, const Weight& w, std::size_t fiber) {
    if (!op.is_linear()) throw DomainError("weighted operator norm needs a linear operator");
    if (!(w.grid() == op.grid())) throw BoundsError("weight and operator live on different grids");
    const auto wf = w.fiber(fiber);
    const std::size_t n = wf.size();
    std::vector<double> root(n), inv_root(n);
    for (std::size_t i = 0; i < n; ++i) {
        root[i] = std::sqrt(wf[i]);
        inv_root[i] = 1.0 / root[i];
    }
    // Iterate on B^T B with B = W^{1/2} T W^{-1/2}; ||B|| is the weighted norm.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    Samples v(n);
    for (auto& x : v) x = dist(rng);
    double nv = l2_norm(v);
    for (auto& x : v) x /= nv;

    Samples tmp(n);
    double lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= kPowerIterationLimit; ++it) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] * inv_root[i];
        Samples bv = op.apply(tmp);
        for (std::size_t i = 0; i < n; ++i) bv[i] *= root[i];
        double next = 0.0;
        for (double x : bv) next += x * x;
        for (std::size_t i = 0; i < n; ++i) bv[i] *= root[i];
        Samples btbv = op.apply_transpose(bv);
        for (std::size_t i = 0; i < n; ++i) btbv[i] *= inv_root[i];
        const double nb = l2_norm(btbv);
        residual = it == 1 ? std::numeric_limits<double>::infinity()
                           : std::abs(next - lambda) / std::max(next, std::numeric_limits<double>::min());
        lambda = next;
        if (nb == 0.0) return {0.0, it, 0.0};
        for (std::size_t i = 0; i < n; ++i) v[i] = btbv[i] / nb;
        if (residual <= kPowerIterationTolerance) return {std::sqrt(lambda), it, residual};
    }
    throw ConvergenceError("power iteration did not converge in 10^4 iterations", std::sqrt(lambda));
}

WeightedNormReport op_norm_weighted_joint(const DiscreteOperator& op, const Weight& w) {
    WeightedNormReport joint;
    for (std::size_t f = 0; f < w.fiber_count(); ++f) {
        const auto r = op_norm_weighted(op, w, f);
        joint.iterations += r.iterations;
        joint.residual = std::max(joint.residual, r.residual);
        joint.norm = std::max(joint.norm, r.norm);
    }
    return joint;
}

double op_norm_lp(const DiscreteOperator& op, double p) {
    if (!(p > 1.0)) throw DomainError("op_norm_lp needs p > 1");
    if (!op.is_linear()) throw DomainError("op_norm_lp needs a linear operator");
    const std::size_t n = op.grid().size();
    const double q = p / (p - 1.0);
    auto duality_map = [](const Samples& y, double exponent) {
        Samples out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            out[i] = std::copysign(std::pow(std::abs(y[i]), exponent - 1.0), y[i]);
        }
        return out;
    };
    std::vector<Samples> starts;
    {
        std::mt19937_64 rng(0xb0d1ULL);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Samples r(n);
        for (auto& x : r) x = dist(rng);
        starts.push_back(r);
        Samples ramp(n);
        for (std::size_t i = 0; i < n; ++i) ramp[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n) - 0.5;
        starts.push_back(ramp);
        Samples bump(n, 0.0);
        for (std::size_t i = n / 4; i < 3 * n / 4; ++i) bump[i] = 1.0;
        starts.push_back(bump);
    }
    double best = 0.0;
    for (auto x : starts) {
        double est = 0.0;
        for (int it = 0; it < 2000; ++it) {
            const double nx = lp_norm(x, p);
            for (auto& v : x) v /= nx;
            Samples y = op.apply(x);
            const double next = lp_norm(y, p);
            Samples z = op.apply_transpose(duality_map(y, p));
            x = duality_map(z, q);
            const bool done = std::abs(next - est) <= 1e-12 * next;
            est = std::max(est, next);
            if (done || next == 0.0) break;
        }
        best = std::max(best, est);
    }
    return best;
}

double maximal_norm_lp(double p, const Grid& grid) {
    if (!(p > 1.0)) throw DomainError("maximal_norm_lp needs p > 1");
    static std::mutex cache_mutex;
    static std::map<std::tuple<double, double, int>, double> cache;
    const auto key = std::make_tuple(p, grid.half_width(), grid.resolution_exponent());
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    // The ratio barely moves with resolution; cap the O(N^2) work at 2^12 cells.
    const Grid g(grid.half_width(), std::min(grid.resolution_exponent(), 12));
    const std::size_t n = g.size();
    std::vector<Samples> family;
    family.emplace_back(n, 1.0);
    for (std::size_t len = 1; len <= n / 2; len *= 2) {
        Samples f(n, 0.0);
        for (std::size_t i = n / 2 - len / 2; i < n / 2 - len / 2 + len; ++i) f[i] = 1.0;
        family.push_back(std::move(f));
    }
    for (int j = 1; j <= 10; ++j) {
        const double a = (1.0 / p) * (1.0 - std::ldexp(1.0, -j));
        Samples two_sided(n), one_sided(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::abs(g.midpoint(i));
            two_sided[i] = std::pow(x, -a);
            if (g.midpoint(i) > 0.0) one_sided[i] = std::pow(x, -a);
        }
        family.push_back(std::move(two_sided));
        family.push_back(std::move(one_sided));
    }
    std::mt19937_64 rng(0x3a11ULL);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 0; k < 8; ++k) {
        Samples f(n);
        for (auto& v : f) v = dist(rng);
        family.push_back(std::move(f));
    }
    double best = 1.0;
    for (const auto& f : family) {
        const double nf = lp_norm(f, p);
        if (nf == 0.0) continue;
        best = std::max(best, lp_norm(weightlab::maximal(f), p) / nf);
    }
    const double value = kMaximalNormSafety * best;
    std::lock_guard lock(cache_mutex);
    cache.emplace(key, value);
    return value;
}

std::string TestFunctionTag::describe() const {
    if (family == Family::indicator) {
        return "indicator[+" + std::to_string(offset) + ", len " + std::to_string(length) + "]";
    }
    return "random#" + std::to_string(seed);
}

namespace {

std::size_t shift_cells(double shift, std::size_t length) {
    return static_cast<std::size_t>(std::llround(shift * static_cast<double>(length) / 2.0));
}

/// Row i of the operator restricted to columns [a, b): returns sum_j T_ij.
/// For translation-invariant kernels this comes from offset prefix sums.
class RowSums {
public:
    explicit RowSums(const DiscreteOperator& op) : op_(op) {
        const std::size_t n = op.grid().size();
        if (op.kind() == DiscreteOperator::Kind::hilbert) {
            // prefix_[m] = sum of k(d) for d in [-(n-1), m - n)
            prefix_.assign(2 * n, 0.0);
            for (std::size_t m = 1; m < 2 * n; ++m) {
                const long d = static_cast<long>(m) - 1 - static_cast<long>(n - 1);
                prefix_[m] = prefix_[m - 1] + hilbert_offset_kernel(d);
            }
        }
    }

    double operator()(std::size_t i, std::size_t a, std::size_t b) const {
        const std::size_t n = op_.grid().size();
        switch (op_.kind()) {
            case DiscreteOperator::Kind::identity:
                return (i >= a && i < b) ? 1.0 : 0.0;
            case DiscreteOperator::Kind::hilbert: {
                // offsets d = i - j for j in [a, b): d in (i - b, i - a]
                const auto lo = static_cast<long>(i) - static_cast<long>(b) + 1;
                const auto hi = static_cast<long>(i) - static_cast<long>(a);
                const auto base = static_cast<long>(n) - 1;
                return prefix_[static_cast<std::size_t>(hi + base + 1)] - prefix_[static_cast<std::size_t>(lo + base)];
            }
            case DiscreteOperator::Kind::custom_kernel: {
                Samples e(n, 0.0);
                for (std::size_t j = a; j < b; ++j) e[j] = 1.0;
                return op_.apply(e)[i];
            }
            case DiscreteOperator::Kind::maximal:
                break;
        }
        throw DomainError("row sums need a linear operator");
    }

private:
    const DiscreteOperator& op_;
    std::vector<double> prefix_;
};

}  // namespace

NondegReport nondegeneracy_constant(const DiscreteOperator& op, double shift) {
    if (!(shift >= 2.0)) throw DomainError("nondegeneracy shift must be at least 2");
    const std::size_t n = op.grid().size();
    NondegReport report;
    report.shift = shift;
    report.empirical_c = std::numeric_limits<double>::infinity();
    const RowSums rows(op);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    bool any = false;

    auto consider = [&](double ratio, const Interval& b, int side, const TestFunctionTag& tag) {
        if (ratio < report.empirical_c) {
            report.empirical_c = ratio;
            report.worst_interval = b;
            report.worst_side = side;
            report.worst_test_function = tag;
        }
    };

    for (std::size_t len = 2; len <= n; len *= 2) {
        const std::size_t off = shift_cells(shift, len);
        if (len + 2 * off > n) break;
        any = true;
        std::vector<std::size_t> starts;
        if (op.is_translation_invariant()) {
            starts.push_back(off);
        } else {
            for (std::size_t s = off; s + len + off <= n; s += std::max<std::size_t>(1, len / 2)) starts.push_back(s);
        }
        for (const std::size_t start : starts) {
            const Interval ball{start, len};
            // Dyadic sub-interval indicators of B, from B itself down to single cells.
            for (std::size_t sub = len; sub >= 1; sub /= 2) {
                for (std::size_t a = 0; a + sub <= len; a += sub) {
                    const TestFunctionTag tag{TestFunctionTag::Family::indicator, a, sub, 0};
                    const double mean = static_cast<double>(sub) / static_cast<double>(len);
                    for (int side : {1, -1}) {
                        const std::size_t first = side > 0 ? start + off : start - off;
                        for (std::size_t x = first; x < first + len; ++x) {
                            const double value = rows(x, start + a, start + a + sub);
                            consider(std::abs(value) / mean, ball, side, tag);
                        }
                    }
                }
                if (sub == 1) break;
            }
            for (int k = 0; k < kNondegRandomProfiles; ++k) {
                std::mt19937_64 rng(0x0de9ULL * 1000003ULL + static_cast<std::uint64_t>(k));
                Samples f(n, 0.0);
                double total = 0.0;
                for (std::size_t i = start; i < start + len; ++i) {
                    f[i] = dist(rng);
                    total += f[i];
                }
                const double mean = total / static_cast<double>(len);
                const Samples tf = op.apply(f);
                const TestFunctionTag tag{TestFunctionTag::Family::random, 0, len, static_cast<std::uint64_t>(k)};
                for (int side : {1, -1}) {
                    const std::size_t first = side > 0 ? start + off : start - off;
                    for (std::size_t x = first; x < first + len; ++x) consider(std::abs(tf[x]) / mean, ball, side, tag);
                }
            }
        }
    }
    if (!any) throw ConfigError("no admissible interval: grid too coarse for this shift");
    return report;
}

ShiftAp2Report verify_shift_ap2(const DiscreteOperator& op, const Weight& w, double shift, double fitted_ct) {
    ShiftAp2Report report;
    const NondegReport nd = nondegeneracy_constant(op, shift);
    report.c = nd.empirical_c;
    if (!(report.c > 0.0)) throw PreconditionError("operator is degenerate: empirical nondegeneracy constant is 0");
    report.m = op_norm_weighted_joint(op, w).norm;
    const double bound = 2.0 * report.m * report.m / (report.c * report.c);
    const std::size_t n = w.grid().size();
    for (std::size_t f = 0; f < w.fiber_count(); ++f) {
        const auto wf = w.fiber(f);
        Samples inv(n);
        for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / wf[i];
        const PrefixSums sw(wf), sinv(inv);
        for (std::size_t len = 2; len <= n; ++len) {
            const std::size_t off = shift_cells(shift, len);
            if (len + 2 * off > n) break;
            for (std::size_t s = off; s + len + off <= n; ++s) {
                const double inv_mean = sinv.mean(s, s + len);
                for (int side : {1, -1}) {
                    const std::size_t t = side > 0 ? s + off : s - off;
                    const double lhs = sw.mean(t, t + len) * inv_mean;
                    const double ratio = lhs / bound;
                    if (ratio > report.worst_ratio) {
                        report.worst_ratio = ratio;
                        report.worst_interval = {s, len};
                    }
                }
            }
        }
    }
    report.shift_pass = report.worst_ratio <= 1.0;
    report.ap2 = ap_constant(w, 2.0);
    report.doubling_inverse = doubling_constant(w.pow(-1.0));
    const int doublings = static_cast<int>(std::ceil(std::log2(1.0 + shift)));
    report.geometry_factor = std::pow(report.doubling_inverse, doublings);
    report.ap2_over_m2 = report.ap2 / (report.m * report.m);
    report.fitted_ct = fitted_ct;
    report.ap2_ratio = report.ap2 / (fitted_ct * report.geometry_factor * report.m * report.m);
    report.ap2_pass = report.ap2_ratio <= 1.0;
    report.pass = report.shift_pass && report.ap2_pass;
    return report;
}

}  // namespace weightlab
