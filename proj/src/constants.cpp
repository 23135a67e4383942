#include "weightlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weightlab/error.hpp"
#include "weightlab/operators.hpp"
#include "weightlab/parallel.hpp"

namespace weightlab {

namespace {

std::vector<double> reciprocal_lengths(std::size_t n) {
    std::vector<double> inv(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) inv[k] = 1.0 / static_cast<double>(k);
    return inv;
}

/// max over intervals of (mean a)(mean b)^exponent; exponent == 1 skips pow.
double sweep_product(const PrefixSums& a, const PrefixSums& b, double exponent) {
    const std::size_t n = a.size();
    const auto inv = reciprocal_lengths(n);
    const bool plain = exponent == 1.0;
    return parallel_max(n, [&](std::size_t lo, std::size_t hi) {
        double best = 0.0;
        for (std::size_t l = lo; l < hi; ++l) {
            for (std::size_t r = l + 1; r <= n; ++r) {
                const double ma = a.sum(l, r) * inv[r - l];
                const double mb = b.sum(l, r) * inv[r - l];
                const double v = plain ? ma * mb : ma * std::pow(mb, exponent);
                best = std::max(best, v);
            }
        }
        return best;
    });
}

}  // namespace

double a1_constant(const Weight& w) {
    double best = 0.0;
    for (const auto& fiber : w.fibers()) {
        const Samples m = maximal(fiber);
        for (std::size_t i = 0; i < fiber.size(); ++i) best = std::max(best, m[i] / fiber[i]);
    }
    return best;
}

double ap_constant(const Weight& w, double p) {
    if (!(p >= 1.0)) throw DomainError("A_p constant needs p >= 1");
    if (p == 1.0) return a1_constant(w);
    const double dual_power = -1.0 / (p - 1.0);
    double best = 0.0;
    for (const auto& fiber : w.fibers()) {
        Samples sigma(fiber.size());
        for (std::size_t i = 0; i < fiber.size(); ++i) {
            sigma[i] = p == 2.0 ? 1.0 / fiber[i] : std::pow(fiber[i], dual_power);
        }
        best = std::max(best, sweep_product(PrefixSums(fiber), PrefixSums(sigma), p - 1.0));
    }
    return best;
}

double fujii_wilson(const Weight& w) {
    double best = 0.0;
    for (const auto& fiber : w.fibers()) {
        const std::size_t n = fiber.size();
        const PrefixSums sums(fiber);
        const auto inv = reciprocal_lengths(n);
        best = std::max(best, parallel_max(n, [&](std::size_t lo, std::size_t hi) {
            double local_best = 0.0;
            std::vector<double> local_max(n, 0.0);
            for (std::size_t a = lo; a < hi; ++a) {
                // Grow B = [a, b]. Since chi_B w vanishes outside B, M[chi_B w]
                // on B only sees sub-intervals of B; extending b adds the
                // intervals [l, b] for a <= l <= b.
                double sum_m = 0.0;
                for (std::size_t b = a; b < n; ++b) {
                    double prefix_best = 0.0;
                    local_max[b] = 0.0;
                    sum_m = 0.0;
                    for (std::size_t l = a; l <= b; ++l) {
                        prefix_best = std::max(prefix_best, sums.sum(l, b + 1) * inv[b + 1 - l]);
                        local_max[l] = std::max(local_max[l], prefix_best);
                        sum_m += local_max[l];
                    }
                    local_best = std::max(local_best, sum_m / sums.sum(a, b + 1));
                }
            }
            return local_best;
        }));
    }
    return best;
}

double doubling_constant(const Weight& w) {
    double best = 0.0;
    for (const auto& fiber : w.fibers()) {
        const std::size_t n = fiber.size();
        const PrefixSums sums(fiber);
        best = std::max(best, parallel_max(n, [&](std::size_t lo, std::size_t hi) {
            double local_best = 0.0;
            for (std::size_t l = lo; l < hi; ++l) {
                for (std::size_t r = l + 1; r <= n; ++r) {
                    const double len = static_cast<double>(r - l);
                    const double center = 0.5 * static_cast<double>(l + r);
                    const double doubled = sums.integral_to(center + len) - sums.integral_to(center - len);
                    local_best = std::max(local_best, doubled / sums.sum(l, r));
                }
            }
            return local_best;
        }));
    }
    return best;
}

double reverse_holder(const Weight& w, double r) {
    if (!(r > 1.0)) throw DomainError("reverse Holder exponent must exceed 1");
    double best = 0.0;
    for (const auto& fiber : w.fibers()) {
        // Scale by the fiber maximum so w^r overflows only when it must.
        const double top = *std::max_element(fiber.begin(), fiber.end());
        Samples powered(fiber.size());
        for (std::size_t i = 0; i < fiber.size(); ++i) {
            powered[i] = std::pow(fiber[i] / top, r);
            if (!std::isfinite(powered[i])) return std::numeric_limits<double>::infinity();
        }
        const PrefixSums sp(powered), sw(fiber);
        const std::size_t n = fiber.size();
        const auto inv = reciprocal_lengths(n);
        const double inv_r = 1.0 / r;
        best = std::max(best, parallel_max(n, [&](std::size_t lo, std::size_t hi) {
            double local_best = 0.0;
            for (std::size_t l = lo; l < hi; ++l) {
                for (std::size_t e = l + 1; e <= n; ++e) {
                    const double num = top * std::pow(sp.sum(l, e) * inv[e - l], inv_r);
                    local_best = std::max(local_best, num / (sw.sum(l, e) * inv[e - l]));
                }
            }
            return local_best;
        }));
    }
    return best;
}

double rh_exponent(const Weight& w, double cap) {
    if (!(cap > 1.0)) throw DomainError("reverse Holder cap must exceed 1");
    if (reverse_holder(w, kRhExponentCeiling) <= cap) return kRhExponentCeiling;
    double lo = 1.0;
    double hi = kRhExponentCeiling;
    while (hi - lo > kRhBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (reverse_holder(w, mid) <= cap) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double f_class_constant(const Weight& w, double alpha, double beta) {
    if (alpha < 0.0 || beta < 0.0) throw DomainError("F(alpha, beta) indices must be nonnegative");
    if (alpha == 0.0 && beta == 0.0) throw DomainError("F(0, 0) is not a weight class");
    if (alpha > 0.0) return ap_constant(w.pow(1.0 / alpha), beta / alpha + 1.0);
    return ap_constant(w.pow(-1.0 / beta), 1.0);
}

ConstantsReport compute_constants(const Weight& w, const ConstantsRequest& request) {
    ConstantsReport report;
    for (double p : request.ps) report.ap[p] = ap_constant(w, p);
    report.a1 = a1_constant(w);
    if (request.include_fujii_wilson) report.fujii_wilson = fujii_wilson(w);
    report.doubling = doubling_constant(w);
    report.doubling_inverse = doubling_constant(w.pow(-1.0));
    for (double r : request.rh_rs) report.rh[r] = reverse_holder(w, r);
    report.rh_exponent = rh_exponent(w, request.rh_cap);
    return report;
}

std::string ap_key(double p) {
    std::ostringstream os;
    os << "ap_" << p;
    return os.str();
}

}  // namespace weightlab
