#pragma once

#include <map>
#include <string>
#include <vector>

#include "weightlab/weight.hpp"

namespace weightlab {

/// Muckenhoupt constant over all grid-aligned intervals and all fibers.
/// p > 1: max of (mean w)(mean w^{-1/(p-1)})^{p-1}.
/// p = 1: max over cells of (Mw)/w with the uncentered grid maximal operator.
/// Throws DomainError for p < 1.
double ap_constant(const Weight& w, double p);

/// Max over cells and fibers of (Mw)/w.
double a1_constant(const Weight& w);

/// Fujii-Wilson constant: max over intervals B of sum_B M[chi_B w] / sum_B w.
/// O(N^3) per fiber; intended for resolutions up to about 2^11.
double fujii_wilson(const Weight& w);

/// Max over intervals B of w(2B) / w(B), where 2B shares B's center and is
/// truncated to the domain. Half-cell edges are integrated exactly.
double doubling_constant(const Weight& w);

/// Max over intervals of (mean w^r)^{1/r} / mean w. Returns +infinity when
/// w^r overflows. Throws DomainError for r <= 1.
double reverse_holder(const Weight& w, double r);

inline constexpr double kRhExponentCeiling = 64.0;
inline constexpr double kRhBisectionTolerance = 1e-4;

/// Largest r in (1, 64] with reverse_holder(w, r) <= cap, by bisection to
/// 1e-4. Returns 64 when the cap is never exceeded on that range.
double rh_exponent(const Weight& w, double cap);

/// F(alpha, beta) constant through the A_p reduction:
/// alpha > 0: ap_constant(w^{1/alpha}, beta/alpha + 1);
/// alpha = 0: ap_constant(w^{-1/beta}, 1). DomainError if both vanish.
double f_class_constant(const Weight& w, double alpha, double beta);

struct ConstantsReport {
    std::map<double, double> ap;
    double a1 = 1.0;
    double fujii_wilson = 1.0;
    double doubling = 1.0;
    double doubling_inverse = 1.0;
    std::map<double, double> rh;
    double rh_exponent = 1.0;
};

struct ConstantsRequest {
    std::vector<double> ps{2.0};
    std::vector<double> rh_rs{2.0};
    double rh_cap = 2.0;
    bool include_fujii_wilson = true;
};

ConstantsReport compute_constants(const Weight& w, const ConstantsRequest& request = {});

/// JSON-style key for an A_p constant: 2 -> "ap_2", 1.5 -> "ap_1.5".
std::string ap_key(double p);

}  // namespace weightlab
