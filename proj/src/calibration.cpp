#include "weightlab/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "weightlab/constants.hpp"
#include "weightlab/majorants.hpp"
#include "weightlab/operators.hpp"

namespace weightlab {

Samples random_profile(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = grid.size();
    Samples f(n, 1e-3);
    const int bumps = 1 + static_cast<int>(rng() % 4);
    for (int b = 0; b < bumps; ++b) {
        const auto width = std::max<std::size_t>(1, static_cast<std::size_t>(n * (1.0 / 32 + unit(rng) * 7.0 / 32)));
        const auto start = static_cast<std::size_t>(unit(rng) * static_cast<double>(n - width));
        const double height = std::exp(-1.0 + 3.0 * unit(rng));
        for (std::size_t i = start; i < start + width; ++i) f[i] += height;
    }
    return f;
}

Samples random_unit_vector(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0xD1B54A32D192ED03ULL + 5);
    std::normal_distribution<double> normal;
    Samples h(grid.size());
    for (auto& x : h) x = normal(rng);
    const double norm = lp_norm(h, 2.0, grid.cell_width());
    for (auto& x : h) x /= norm;
    return h;
}

A1aptInstance a1apt_instance(const Grid& grid, std::uint64_t seed) {
    const Weight w = random_piecewise_weight(grid, seed, 8, 1.0);
    std::mt19937_64 rng(seed + 0xA1A1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Samples f(w.fiber(0).begin(), w.fiber(0).end());
    for (auto& x : f) x *= unit(rng);
    const double delta = 0.5;
    Weight u = rdf_majorant(w.pow(delta).fiber(0), 2.0, grid).majorant;
    return {std::move(f), w, std::move(u), 2.0, delta};
}

A2rdivInstance a2rdiv_instance(const Grid& grid, std::uint64_t seed) {
    Samples g = random_profile(grid, seed);
    const double norm = lp_norm(g, 2.0, grid.cell_width());
    for (auto& x : g) x /= norm;
    return {std::move(g), random_unit_vector(grid, seed), 2.0};
}

Calibration frozen_calibration() {
    Calibration c;
    // Output of `weightlab calibrate`, rounded up.
    c.shift_ct = 0.2901;
    c.a2_majorant_c = 2.998;
    c.c2 = 3.679;
    c.doubling_inverse = 9.560;
    c.a2rdiv_c = 14.14;
    return c;
}

CalibrationFit fit_calibration(int resolution, std::uint64_t seed_base, int count) {
    const Grid grid = make_grid(1.0, resolution);
    const auto h = DiscreteOperator::hilbert(grid);
    CalibrationFit fit;
    Calibration& raw = fit.raw;
    for (int k = 0; k < count; ++k) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(k);
        // Spreads from nearly flat to strongly oscillating cover the doubling range of the test weights.
        const double spread = 0.05 + 1.45 * k / std::max(1, count - 1);
        const Weight w = random_piecewise_weight(grid, seed, 8, spread);
        raw.shift_ct = std::max(raw.shift_ct, verify_shift_ap2(h, w, 3.0, 1.0).ap2_ratio);

        const Samples f = random_profile(grid, seed);
        for (double q : {1.5, 2.0}) raw.a2_majorant_c = std::max(raw.a2_majorant_c, a2_majorant(f, q, h).ratio);

        const auto rm = restricted_majorant(f, 2.0, h, 2.0);
        if (rm.converged) {
            raw.c2 = std::max(raw.c2, rm.ap2_over_m2);
            raw.doubling_inverse = std::max(raw.doubling_inverse, rm.doubling_inverse);
        } else {
            ++fit.restricted_nonconvergent;
        }

        const auto inst = a2rdiv_instance(grid, seed);
        const auto chain = chain_a2rdiv(inst.g, inst.h, inst.p_z, grid);
        raw.a2rdiv_c = std::max(raw.a2rdiv_c, chain.final_constant);
    }
    fit.frozen = raw;
    fit.frozen.shift_ct *= kCalibrationMargin;
    fit.frozen.a2_majorant_c *= kCalibrationMargin;
    fit.frozen.c2 *= kCalibrationMargin;
    fit.frozen.doubling_inverse *= kCalibrationMargin;
    fit.frozen.a2rdiv_c *= kCalibrationMargin;
    return fit;
}

ChainReport restricted_majorant_report(const RestrictedMajorantResult& r, const Calibration& c) {
    ChainReport report;
    auto step = [&report](std::string label, double lhs, double rhs) {
        report.steps.push_back({std::move(label), lhs, rhs, lhs <= rhs * (1.0 + kChainSlack)});
    };
    const double a = r.equivalence_constant;
    step("convergence", r.iterations, kPicardIterationLimit);
    if (!r.converged) report.steps.back().pass = false;
    double dominated = 0.0;
    const auto w = r.result.majorant.fiber(0);
    for (std::size_t i = 0; i < w.size(); ++i) dominated = std::max(dominated, r.result.input[i] / w[i]);
    step("majorant", dominated, 1.0);
    step("equivalence", r.worst_equivalence, a);
    step("norm bound", r.result.norm_ratio, 2.0 * a);
    step("A_2 bound", r.ap2, c.c2 * r.lq_norm * r.lq_norm);
    step("inverse doubling", r.doubling_inverse, c.doubling_inverse);
    report.final_constant = r.ap2_over_m2;
    return report;
}

}  // namespace weightlab
