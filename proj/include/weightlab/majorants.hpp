#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weightlab/grid.hpp"
#include "weightlab/operators.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// (sum |f_i|^p dx)^{1/p}; p = infinity gives the max.
double lp_norm(std::span<const double> f, double p, double dx);

enum class ClassTag { a1, a2, f_class };
std::string to_string(ClassTag tag);

struct MajorantResult {
    Samples input;
    Weight majorant;
    double norm_ratio = 0.0;       ///< ||w|| / ||f|| in the ambient L^p
    double advertised_bound = 0.0; ///< bound the producing operation promises for norm_ratio
    ClassTag class_tag = ClassTag::a1;
    double class_constant = 0.0;
    std::optional<double> weighted_T_norm;
};

inline constexpr int kDefaultRdfDepth = 24;
inline constexpr double kRdfTailTolerance = 1e-6;

/// Rubio de Francia series w = sum_{k=0}^{depth} M^k f / (2 ||M||_p)^k with
/// ||M||_p from maximal_norm_lp. Throws DomainError for f < 0 or f == 0,
/// ConfigError for depth < 8, DepthError when the first omitted term exceeds
/// 1e-6 of w somewhere.
MajorantResult rdf_majorant(std::span<const double> f, double p, const Grid& grid, int depth = kDefaultRdfDepth);

struct A2MajorantResult {
    MajorantResult result;
    double lq_norm = 0.0;   ///< measured ||T|| on L^q
    double ratio = 0.0;     ///< weighted norm / lq_norm
};

/// w = rdf_majorant(f, q'), then ||T|| on L^2 with weight w against ||T|| on L^q.
A2MajorantResult a2_majorant(std::span<const double> f, double q, const DiscreteOperator& op);

struct RestrictedMajorantResult {
    MajorantResult result;
    bool converged = false;
    int iterations = 0;
    double equivalence_constant = 0.0; ///< A = max(6, 3 m1)
    double m1 = 0.0;                   ///< norm factor of the F(alpha, 1) routine
    double lq_norm = 0.0;              ///< m = ||T|| on L^q
    double ap2 = 0.0;
    double ap2_over_m2 = 0.0;          ///< [w]_A2 / m^2, to compare with a frozen C2
    double doubling_inverse = 0.0;
    double worst_equivalence = 0.0;    ///< max of (f v u v v)/(u ^ v) at exit, <= A when converged
    Weight u;
    Weight v;
};

inline constexpr int kPicardIterationLimit = 64;

/// F(alpha, 1)-majorant of g in L^p: (R g^{1/alpha})^alpha with R the
/// Rubio de Francia series for exponent p*alpha; norm factor 2^alpha.
MajorantResult f_alpha_majorant(std::span<const double> g, double p, double alpha, const Grid& grid);

/// Picard iteration standing in for the fixed point argument:
/// u_{n+1} = rdf(f v u_n v v_n)/6, v_{n+1} = F(alpha,1)-majorant(...)/(3 m1),
/// stopping once f v u_n v v_n <= A (u_n ^ v_n). Nonconvergence after 64
/// rounds is reported in the result, not thrown.
RestrictedMajorantResult restricted_majorant(std::span<const double> f, double q, const DiscreteOperator& op,
                                             double alpha);

struct ChainStep {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

struct ChainReport {
    std::vector<ChainStep> steps;
    double final_constant = 0.0;
    bool pass() const;
};

inline constexpr double kChainSlack = 1e-10;

/// Sweeps every interval and fiber through the majorant, A_p, Jensen,
/// domination and A_1 inequalities, with c = [w]_A_p and
/// c' = c [u]_A_1^{1/delta}; last step checks Mf <= c' u^{1/delta} pointwise.
/// Each step records its worst lhs/rhs pair. PreconditionError if w < |f| or
/// u < w^delta at some cell.
ChainReport chain_a1apt(std::span<const double> f, const Weight& w, const Weight& u, double p, double delta);

/// For f = g^{1/2} h with Z = L^{p_Z}: Holder split, norm identity, majorant
/// bound, weighted bound for M and cancellation; final constant is the
/// effective c'' bounding ||Mf|| in Z^{1/2} L^2 = L^s, 1/s = 1/(2 p_Z) + 1/2.
ChainReport chain_a2rdiv(std::span<const double> g, std::span<const double> h, double p_z, const Grid& grid);

struct AmbientWeightResult {
    Samples weight;
    double bound = 0.0;       ///< max over candidates of sum |log h|^2 omega dx
    double large_part = 0.0;  ///< worst contribution of {h >= 1}
    double small_part = 0.0;  ///< worst contribution of {h < 1}
    double limit = 0.0;       ///< 4 max ||h||_Z + 1
    bool pass = false;
};

/// omega = a ^ sigma (1 - [log omega1]^-)^{-2}, [x]^- = min(x, 0).
/// Preconditions: every candidate >= omega1 > 0, ||a||_{L^{p_Z'}} = 1,
/// ||sigma||_{L^1} = 1 (to 1e-9); otherwise PreconditionError.
AmbientWeightResult ambient_weight(const std::vector<Samples>& candidates, std::span<const double> omega1,
                                   std::span<const double> a, std::span<const double> sigma, double p_z,
                                   const Grid& grid);

}  // namespace weightlab
