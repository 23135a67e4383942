#include "weightlab/majorants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weightlab/constants.hpp"
#include "weightlab/error.hpp"

namespace weightlab {

namespace {

void require_nonnegative(std::span<const double> f, const char* what) {
    bool positive = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= 0.0) || !std::isfinite(f[i])) {
            std::ostringstream os;
            os << what << " must be finite and nonnegative (cell " << i << ")";
            throw DomainError(os.str());
        }
        positive = positive || f[i] > 0.0;
    }
    if (!positive) throw DomainError(std::string(what) + " vanishes identically");
}

double dual_exponent(double p) { return p / (p - 1.0); }

/// Cheap x^e for the exponents that show up most.
double power(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == -1.0) return 1.0 / x;
    if (e == 0.5) return std::sqrt(x);
    return std::pow(x, e);
}

Samples rdf_series(std::span<const double> f, double p, const Grid& grid, int depth) {
    if (depth < 8) throw ConfigError("Rubio de Francia depth must be at least 8");
    if (!(p > 1.0)) throw DomainError("Rubio de Francia exponent must exceed 1");
    if (f.size() != grid.size()) throw BoundsError("majorant input does not match the grid");
    require_nonnegative(f, "majorant input");

    const double scale = 1.0 / (2.0 * maximal_norm_lp(p, grid));
    Samples w(f.begin(), f.end());
    Samples term(f.begin(), f.end());
    for (int k = 1; k <= depth + 1; ++k) {
        term = maximal(term);
        for (double& t : term) t *= scale;
        if (k == depth + 1) break;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += term[i];
    }
    // `term` is now the first omitted summand.
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (term[i] > kRdfTailTolerance * w[i]) {
            std::ostringstream os;
            os << "Rubio de Francia tail " << term[i] / w[i] << " at cell " << i << " exceeds "
               << kRdfTailTolerance << "; increase depth beyond " << depth;
            throw DepthError(os.str());
        }
    }
    return w;
}

Samples f_alpha_series(std::span<const double> g, double p, double alpha, const Grid& grid) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    if (!(p * alpha > 1.0)) throw DomainError("F(alpha, 1) routine needs p * alpha > 1");
    Samples root(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) root[i] = power(g[i], 1.0 / alpha);
    Samples w = rdf_series(root, p * alpha, grid, kDefaultRdfDepth);
    for (double& x : w) x = power(x, alpha);
    return w;
}

double norm_ratio(std::span<const double> w, std::span<const double> f, double p, double dx) {
    return lp_norm(w, p, dx) / lp_norm(f, p, dx);
}

/// Running worst case of one inequality lhs <= rhs.
struct StepTracker {
    std::string label;
    double ratio = -std::numeric_limits<double>::infinity();
    double lhs = 0.0;
    double rhs = 0.0;

    void add(double l, double r) {
        const double q = r > 0.0 ? l / r : (l > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (q > ratio) {
            ratio = q;
            lhs = l;
            rhs = r;
        }
    }
    ChainStep step() const { return {label, lhs, rhs, lhs <= rhs * (1.0 + kChainSlack)}; }
};

ChainStep equality_step(std::string label, double lhs, double rhs) {
    const bool pass = std::abs(lhs - rhs) <= kChainSlack * std::max(std::abs(lhs), std::abs(rhs));
    return {std::move(label), lhs, rhs, pass};
}

}  // namespace

double lp_norm(std::span<const double> f, double p, double dx) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : f) m = std::max(m, std::abs(x));
        return m;
    }
    double s = 0.0;
    for (double x : f) s += power(std::abs(x), p);
    return power(s * dx, 1.0 / p);
}

std::string to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::a1: return "A1";
        case ClassTag::a2: return "A2";
        case ClassTag::f_class: return "F";
    }
    return "?";
}

bool ChainReport::pass() const {
    return std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.pass; });
}

MajorantResult rdf_majorant(std::span<const double> f, double p, const Grid& grid, int depth) {
    Samples w = rdf_series(f, p, grid, depth);
    const double ratio = norm_ratio(w, f, p, grid.cell_width());
    Weight majorant(grid, std::move(w));
    const double a1 = a1_constant(majorant);
    return {Samples(f.begin(), f.end()), std::move(majorant), ratio, 2.0, ClassTag::a1, a1, std::nullopt};
}

A2MajorantResult a2_majorant(std::span<const double> f, double q, const DiscreteOperator& op) {
    if (!(q > 1.0)) throw DomainError("q must exceed 1");
    if (!op.is_linear()) throw DomainError("a2_majorant needs a linear operator");
    MajorantResult r = rdf_majorant(f, dual_exponent(q), op.grid());
    r.class_tag = ClassTag::a2;
    r.class_constant = ap_constant(r.majorant, 2.0);
    r.weighted_T_norm = op_norm_weighted(op, r.majorant, 0).norm;
    A2MajorantResult out{std::move(r), op_norm_lp(op, q), 0.0};
    out.ratio = *out.result.weighted_T_norm / out.lq_norm;
    return out;
}

MajorantResult f_alpha_majorant(std::span<const double> g, double p, double alpha, const Grid& grid) {
    if (g.size() != grid.size()) throw BoundsError("majorant input does not match the grid");
    require_nonnegative(g, "majorant input");
    Samples w = f_alpha_series(g, p, alpha, grid);
    const double ratio = norm_ratio(w, g, p, grid.cell_width());
    Weight majorant(grid, std::move(w));
    const double constant = f_class_constant(majorant, alpha, 1.0);
    return {Samples(g.begin(), g.end()), std::move(majorant), ratio, std::pow(2.0, alpha), ClassTag::f_class,
            constant, std::nullopt};
}

RestrictedMajorantResult restricted_majorant(std::span<const double> f, double q, const DiscreteOperator& op,
                                             double alpha) {
    if (!(q > 1.0)) throw DomainError("q must exceed 1");
    const Grid& grid = op.grid();
    if (f.size() != grid.size()) throw BoundsError("majorant input does not match the grid");
    require_nonnegative(f, "majorant input");
    const double p = dual_exponent(q);
    const double dx = grid.cell_width();
    const double m1 = std::pow(2.0, alpha);
    const double big_a = std::max(6.0, 3.0 * m1);

    const double f_norm = lp_norm(f, p, dx);
    Samples fn(f.begin(), f.end());
    for (double& x : fn) x /= f_norm;

    Samples u = fn, v = fn, g(fn.size());
    bool converged = false;
    int iterations = 0;
    double worst = 0.0;
    for (int n = 1; n <= kPicardIterationLimit; ++n) {
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::max({fn[i], u[i], v[i]});
        u = rdf_series(g, p, grid, kDefaultRdfDepth);
        for (double& x : u) x /= 6.0;
        v = f_alpha_series(g, p, alpha, grid);
        for (double& x : v) x /= 3.0 * m1;

        worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            worst = std::max(worst, std::max({fn[i], u[i], v[i]}) / std::min(u[i], v[i]));
        }
        iterations = n;
        if (worst <= big_a * (1.0 + 1e-12)) {
            converged = true;
            break;
        }
    }

    Samples w(g.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        u[i] *= f_norm;
        v[i] *= f_norm;
        w[i] = big_a * std::max(u[i], v[i]);
    }
    const double ratio = norm_ratio(w, f, p, dx);
    Weight majorant(grid, std::move(w));
    const double lq = op_norm_lp(op, q);
    const double ap2 = ap_constant(majorant, 2.0);
    const double doubling_inverse = doubling_constant(majorant.pow(-1.0));
    std::optional<double> weighted;
    if (op.is_linear()) weighted = op_norm_weighted(op, majorant, 0).norm;
    return {MajorantResult{Samples(f.begin(), f.end()), std::move(majorant), ratio, 2.0 * big_a, ClassTag::a2, ap2,
                           weighted},
            converged,
            iterations,
            big_a,
            m1,
            lq,
            ap2,
            ap2 / (lq * lq),
            doubling_inverse,
            worst,
            Weight(grid, std::move(u)),
            Weight(grid, std::move(v))};
}

ChainReport chain_a1apt(std::span<const double> f, const Weight& w, const Weight& u, double p, double delta) {
    if (!(p > 1.0)) throw DomainError("chain exponent p must exceed 1");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
    if (!(w.grid() == u.grid()) || w.fiber_count() != u.fiber_count()) {
        throw BoundsError("w and u must share grid and fibers");
    }
    const std::size_t n = w.grid().size();
    if (f.size() != n) throw BoundsError("f does not match the grid");

    for (std::size_t k = 0; k < w.fiber_count(); ++k) {
        const auto wf = w.fiber(k);
        const auto uf = u.fiber(k);
        for (std::size_t i = 0; i < n; ++i) {
            if (wf[i] < std::abs(f[i])) {
                std::ostringstream os;
                os << "majorant condition w >= |f| fails at cell " << i << " (fiber " << k << ")";
                throw PreconditionError(os.str());
            }
            if (uf[i] < std::pow(wf[i], delta) * (1.0 - 1e-12)) {
                std::ostringstream os;
                os << "majorant condition u >= w^delta fails at cell " << i << " (fiber " << k << ")";
                throw PreconditionError(os.str());
            }
        }
    }

    const double c = ap_constant(w, p);
    const double c_prime = c * std::pow(a1_constant(u), 1.0 / delta);
    const double inv_delta = 1.0 / delta;
    const double sigma_power = -1.0 / (p - 1.0);

    StepTracker majorant{"majorant"}, ap{"A_p condition"}, jensen{"Jensen"}, domination{"domination by u"},
        a1{"A_1 condition"}, pointwise{"maximal bound"};
    Samples abs_f(n);
    for (std::size_t i = 0; i < n; ++i) abs_f[i] = std::abs(f[i]);
    const PrefixSums sf(abs_f);
    const Samples mf = maximal(abs_f);

    for (std::size_t k = 0; k < w.fiber_count(); ++k) {
        const auto wf = w.fiber(k);
        const auto uf = u.fiber(k);
        Samples sigma(n), wd(n);
        for (std::size_t i = 0; i < n; ++i) {
            sigma[i] = power(wf[i], sigma_power);
            wd[i] = power(wf[i], delta);
        }
        const PrefixSums sw(wf), ss(sigma), swd(wd), su(uf);
        for (std::size_t l = 0; l < n; ++l) {
            double min_u = uf[l];
            for (std::size_t r = l + 1; r <= n; ++r) {
                min_u = std::min(min_u, uf[r - 1]);
                const double mean_f = sf.mean(l, r);
                const double mean_w = sw.mean(l, r);
                const double dual = power(ss.mean(l, r), -(p - 1.0));
                const double mean_wd = power(swd.mean(l, r), inv_delta);
                const double mean_u = power(su.mean(l, r), inv_delta);
                majorant.add(mean_f, mean_w);
                ap.add(mean_w, c * dual);
                jensen.add(dual, mean_wd);
                domination.add(mean_wd, mean_u);
                a1.add(c * mean_u, c_prime * power(min_u, inv_delta));
            }
        }
        for (std::size_t i = 0; i < n; ++i) pointwise.add(mf[i], c_prime * power(uf[i], inv_delta));
    }

    ChainReport report;
    for (const auto* t : {&majorant, &ap, &jensen, &domination, &a1, &pointwise}) report.steps.push_back(t->step());
    report.final_constant = c_prime;
    return report;
}

ChainReport chain_a2rdiv(std::span<const double> g, std::span<const double> h, double p_z, const Grid& grid) {
    if (!(p_z > 1.0)) throw PreconditionError("lattice exponent p_Z must exceed 1");
    const std::size_t n = grid.size();
    if (g.size() != n || h.size() != n) throw BoundsError("g and h must match the grid");
    for (double x : h) {
        if (!std::isfinite(x)) throw PreconditionError("h must be finite");
    }
    require_nonnegative(g, "g");
    const double dx = grid.cell_width();

    const Samples w = rdf_series(g, p_z, grid, kDefaultRdfDepth);
    Samples f(n), root_w(n), inv_w(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = std::sqrt(g[i]) * std::abs(h[i]);
        root_w[i] = std::sqrt(w[i]);
        inv_w[i] = 1.0 / w[i];
    }
    const Samples mf = maximal(f);
    Samples mf_weighted(n), f_weighted(n);
    for (std::size_t i = 0; i < n; ++i) {
        mf_weighted[i] = mf[i] / root_w[i];
        f_weighted[i] = f[i] / root_w[i];
    }

    // Z^{1/2} L^2 is L^s with 1/s = 1/(2 p_Z) + 1/2.
    const double s = 2.0 * p_z / (p_z + 1.0);
    const double lhs = lp_norm(mf, s, dx);
    const double root_norm = lp_norm(root_w, 2.0 * p_z, dx);
    const double weighted_mf = lp_norm(mf_weighted, 2.0, dx);
    const double weighted_f = lp_norm(f_weighted, 2.0, dx);
    const double h_norm = lp_norm(h, 2.0, dx);
    const double c = std::sqrt(2.0 * lp_norm(g, p_z, dx));
    const double k_m = maximal_norm_lp(2.0, grid) * ap_constant(Weight(grid, inv_w), 2.0);

    ChainReport report;
    report.steps.push_back({"Holder split", lhs, root_norm * weighted_mf, lhs <= root_norm * weighted_mf * (1.0 + kChainSlack)});
    report.steps.push_back(equality_step("power norm identity", root_norm, std::sqrt(lp_norm(w, p_z, dx))));
    report.steps.push_back({"majorant norm", root_norm, c, root_norm <= c * (1.0 + kChainSlack)});
    report.steps.push_back(
        {"weighted maximal bound", weighted_mf, k_m * weighted_f, weighted_mf <= k_m * weighted_f * (1.0 + kChainSlack)});
    report.steps.push_back({"majorant cancellation", weighted_f, h_norm, weighted_f <= h_norm * (1.0 + kChainSlack)});
    report.final_constant = c * k_m * h_norm;
    report.steps.push_back({"final bound", lhs, report.final_constant, lhs <= report.final_constant * (1.0 + kChainSlack)});
    return report;
}

AmbientWeightResult ambient_weight(const std::vector<Samples>& candidates, std::span<const double> omega1,
                                   std::span<const double> a, std::span<const double> sigma, double p_z,
                                   const Grid& grid) {
    if (!(p_z > 1.0)) throw PreconditionError("lattice exponent p_Z must exceed 1");
    const std::size_t n = grid.size();
    if (omega1.size() != n || a.size() != n || sigma.size() != n) throw BoundsError("inputs must match the grid");
    const double dx = grid.cell_width();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(omega1[i] > 0.0) || !(a[i] > 0.0) || !(sigma[i] > 0.0)) {
            std::ostringstream os;
            os << "omega1, a and sigma must be positive (cell " << i << ")";
            throw PreconditionError(os.str());
        }
    }
    const double a_norm = lp_norm(a, dual_exponent(p_z), dx);
    if (std::abs(a_norm - 1.0) > 1e-9) throw PreconditionError("a must have unit norm in the dual lattice");
    if (std::abs(lp_norm(sigma, 1.0, dx) - 1.0) > 1e-9) throw PreconditionError("sigma must have unit L^1 norm");

    AmbientWeightResult out;
    out.weight.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double neg = std::min(std::log(omega1[i]), 0.0);
        out.weight[i] = std::min(a[i], sigma[i] / ((1.0 - neg) * (1.0 - neg)));
    }
    double max_norm = 0.0;
    out.bound = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const Samples& h = candidates[k];
        if (h.size() != n) throw BoundsError("candidate does not match the grid");
        double large = 0.0, small = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(h[i] >= omega1[i])) {
                std::ostringstream os;
                os << "candidate " << k << " drops below omega1 at cell " << i;
                throw PreconditionError(os.str());
            }
            const double lg = std::log(h[i]);
            (h[i] >= 1.0 ? large : small) += lg * lg * out.weight[i] * dx;
        }
        out.large_part = std::max(out.large_part, large);
        out.small_part = std::max(out.small_part, small);
        out.bound = std::max(out.bound, large + small);
        max_norm = std::max(max_norm, lp_norm(h, p_z, dx));
    }
    out.limit = 4.0 * max_norm + 1.0;
    out.pass = out.bound <= out.limit;
    return out;
}

}  // namespace weightlab
