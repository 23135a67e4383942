#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "weightlab/calibration.hpp"
#include "weightlab/constants.hpp"
#include "weightlab/error.hpp"
#include "weightlab/operators.hpp"

using namespace weightlab;

namespace {

Samples maximal_oracle(const Samples& f) {
    Samples out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t a = 0; a <= i; ++a) {
            for (std::size_t b = i + 1; b <= f.size(); ++b) {
                double s = 0.0;
                for (std::size_t k = a; k < b; ++k) s += f[k];
                out[i] = std::max(out[i], s / static_cast<double>(b - a));
            }
        }
    }
    return out;
}

Samples seeded(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    Samples f(n);
    for (auto& x : f) x = dist(rng);
    return f;
}

double dot(const Samples& a, const Samples& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("maximal function against brute force") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Samples f = seeded(40, seed);
        const Samples m = maximal(f);
        const Samples o = maximal_oracle(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(m[i] == doctest::Approx(o[i]).epsilon(1e-13));
            CHECK(m[i] >= f[i]);
        }
    }
    CHECK_THROWS_AS(maximal(Samples{1.0, -1.0}), DomainError);
}

TEST_CASE("Hilbert transform: antisymmetry and FFT against direct sum") {
    const Grid g = make_grid(1.0, 9);
    const auto op = DiscreteOperator::hilbert(g);
    const Samples f = seeded(g.size(), 1);
    const Samples h = seeded(g.size(), 2);
    CHECK(dot(op.apply(f), h) == doctest::Approx(-dot(f, op.apply(h))).epsilon(1e-12));
    const Samples fast = op.apply(f);
    const Samples direct = hilbert(f, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(fast[i] - direct[i]));
    CHECK(worst < 1e-10);
    const Samples t = op.apply_transpose(f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(t[i] == doctest::Approx(-fast[i]).epsilon(1e-9));
}

TEST_CASE("Hilbert transform of an indicator") {
    const Grid g = make_grid(1.0, 12);
    Samples chi(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g.midpoint(i)) < 0.5) chi[i] = 1.0;
    }
    const Samples h = DiscreteOperator::hilbert(g).apply(chi);
    const double guard = 3.0 * g.cell_width();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.midpoint(i);
        if (std::abs(x - 0.5) < guard || std::abs(x + 0.5) < guard) continue;
        const double exact = std::log(std::abs((x + 0.5) / (x - 0.5))) / std::numbers::pi;
        if (std::abs(exact) < 1e-3) continue;
        worst = std::max(worst, std::abs(h[i] - exact) / std::abs(exact));
    }
    CHECK(worst < 0.02);
}

TEST_CASE("weighted norm against a dense SVD") {
    const Grid g = make_grid(1.0, 8);
    const std::size_t n = g.size();
    const auto op = DiscreteOperator::hilbert(g);
    for (const Weight& w : {constant_weight(g, 1.0), step_weight(g, 4.0), power_weight(g, 0.5)}) {
        const auto wf = w.fiber(0);
        Eigen::MatrixXd b(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double k = i == j ? 0.0 : g.cell_width() / (std::numbers::pi * (g.midpoint(i) - g.midpoint(j)));
                b(i, j) = std::sqrt(wf[i]) * k / std::sqrt(wf[j]);
            }
        }
        const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
        const auto r = op_norm_weighted(op, w, 0);
        CHECK(r.norm == doctest::Approx(sigma).epsilon(1e-6));
    }
    CHECK_THROWS_AS(op_norm_weighted(DiscreteOperator::maximal(g), constant_weight(g, 1.0), 0), DomainError);
}

TEST_CASE("custom kernels must be antisymmetric") {
    const Grid g = make_grid(1.0, 5);
    CHECK_THROWS_AS(DiscreteOperator::custom(g, [](double x, double y) { return x + y; }), DomainError);
    const auto op = DiscreteOperator::custom(g, [](double x, double y) { return x == y ? 0.0 : 1.0 / (x - y); });
    CHECK_FALSE(op.is_translation_invariant());
    const Samples f = seeded(g.size(), 3);
    const Samples h = seeded(g.size(), 4);
    CHECK(dot(op.apply(f), h) == doctest::Approx(-dot(f, op.apply(h))).epsilon(1e-12));
}

TEST_CASE("maximal operator norm on L^p") {
    const Grid g = make_grid(1.0, 8);
    for (double p : {1.5, 2.0, 3.0}) {
        const double m = maximal_norm_lp(p, g);
        CHECK(m >= 1.0);
        CHECK(m == maximal_norm_lp(p, g));
    }
    CHECK(maximal_norm_lp(1.5, g) > maximal_norm_lp(3.0, g));
    CHECK_THROWS_AS(maximal_norm_lp(1.0, g), DomainError);
    CHECK(op_norm_lp(DiscreteOperator::identity(g), 3.0) == doctest::Approx(1.0));
}

TEST_CASE("nondegeneracy constant is stable across resolutions") {
    std::vector<double> cs;
    for (int k = 10; k <= 12; ++k) cs.push_back(nondegeneracy_constant(DiscreteOperator::hilbert(make_grid(1.0, k)), 3.0).empirical_c);
    for (double c : cs) {
        CHECK(c > 0.0);
        CHECK(c == doctest::Approx(cs.front()).epsilon(0.10));
    }
    CHECK_THROWS_AS(nondegeneracy_constant(DiscreteOperator::hilbert(make_grid(1.0, 8)), 1.0), DomainError);
}

TEST_CASE("shifted A_2 bound with the frozen constant") {
    const Grid g = make_grid(1.0, 9);
    const auto op = DiscreteOperator::hilbert(g);
    const double ct = frozen_calibration().shift_ct;
    for (const Weight& w : {constant_weight(g, 1.0), step_weight(g, 4.0), power_weight(g, 0.5), power_weight(g, -0.5)}) {
        const auto r = verify_shift_ap2(op, w, 3.0, ct);
        CHECK(r.shift_pass);
        CHECK(r.ap2_pass);
        CHECK(r.worst_ratio <= 1.0);
        CHECK(r.ap2 == doctest::Approx(ap_constant(w, 2.0)));
    }
}
