#include "weightlab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <string>

#include "weightlab/calibration.hpp"
#include "weightlab/constants.hpp"
#include "weightlab/error.hpp"
#include "weightlab/majorants.hpp"
#include "weightlab/operators.hpp"
#include "weightlab/scripts.hpp"

namespace weightlab {

namespace {

using nlohmann::ordered_json;

/// Fujii-Wilson is cubic in N; above this resolution it is skipped unless asked for.
constexpr int kFujiiWilsonMaxResolution = 11;
/// The reverse Holder exponent bisects over quadratic sweeps; same policy.
constexpr int kRhExponentMaxResolution = 12;

struct CheckFailed {
    std::string what;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json chain_json(const ChainReport& r) {
    ordered_json steps = ordered_json::array();
    for (const auto& s : r.steps) steps.push_back({{"label", s.label}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"pass", s.pass}});
    return {{"steps", steps}, {"final_constant", r.final_constant}, {"pass", r.pass()}};
}

std::string first_failure(const ChainReport& r) {
    for (const auto& s : r.steps) {
        if (!s.pass) return s.label + ": " + num(s.lhs) + " > " + num(s.rhs);
    }
    return {};
}

void emit_chain(std::ostream& out, const ChainReport& r, ordered_json extra = ordered_json::object()) {
    ordered_json j = chain_json(r);
    for (auto& [k, v] : extra.items()) j[k] = v;
    out << j.dump(2) << "\n";
    if (!r.pass()) throw CheckFailed{first_failure(r)};
}

Rational parse_p(const std::string& text) { return parse_rational(text); }

ordered_json fact_json(const Fact& f) {
    ordered_json j{{"text", f.str()}};
    if (f.kind == FactKind::regularity || f.kind == FactKind::weight_class) {
        j["alpha"] = f.alpha.str();
        j["beta"] = f.beta.str();
        j["constant"] = f.constant.str();
    }
    if (f.kind == FactKind::regularity || f.kind == FactKind::bounded || f.kind == FactKind::identity) {
        j["lattice"] = to_string(f.expr);
    }
    if (f.kind == FactKind::bounded) j["bound"] = f.constant.str();
    if (!f.tag.empty()) j["tag"] = f.tag;
    return j;
}

ordered_json trace_json(const DerivationTrace& t) {
    ordered_json steps = ordered_json::array();
    for (const auto& s : t.steps) {
        steps.push_back({{"id", s.id}, {"rule", s.rule}, {"premises", s.premises}, {"fact", fact_json(s.fact)}});
    }
    ordered_json values = ordered_json::object();
    for (const auto& [k, v] : t.values) values[k] = v.str();
    ordered_json j{{"script", t.script}, {"ok", t.ok}, {"values", values}, {"steps", steps}};
    if (!t.ok) j["failure"] = t.failure;
    if (!t.steps.empty()) j["final"] = t.final_fact().str();
    return j;
}

ordered_json calibration_json(const Calibration& c) {
    return {{"shift_ct", c.shift_ct},
            {"a2_majorant_c", c.a2_majorant_c},
            {"c2", c.c2},
            {"doubling_inverse", c.doubling_inverse},
            {"a2rdiv_c", c.a2rdiv_c}};
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"weightlab: Muckenhoupt weights, majorants and regularity derivations"};
    app.require_subcommand(1);

    double half_width = 1.0;
    int res = 10;
    bool json = false;
    app.add_option("--L", half_width, "half width of the domain [-L, L]");

    auto* constants = app.add_subcommand("constants", "weight constants as a flat JSON object");
    std::string weight_spec;
    std::vector<double> ps{2.0};
    double rh_r = 2.0;
    double rh_cap = 2.0;
    bool force_fw = false;
    bool force_rh_exp = false;
    constants->add_option("--weight", weight_spec, "weight DSL")->required();
    constants->add_option("--p", ps, "A_p exponents (repeatable)");
    constants->add_option("--res", res, "resolution exponent k, N = 2^k");
    constants->add_option("--rh-r", rh_r, "reverse Holder exponent");
    constants->add_option("--rh-cap", rh_cap, "cap for the reverse Holder exponent search");
    constants->add_flag("--fw", force_fw, "compute Fujii-Wilson even above 2^11");
    constants->add_flag("--rh-exp", force_rh_exp, "compute the reverse Holder exponent even above 2^12");
    constants->add_flag("--json", json, "JSON output (the default)");

    auto* transform = app.add_subcommand("transform", "apply H or M to a weight; CSV samples");
    std::string op_name = "hilbert";
    transform->add_option("--op", op_name)->check(CLI::IsMember({"hilbert", "maximal"}));
    transform->add_option("--weight", weight_spec, "weight DSL")->required();
    transform->add_option("--res", res, "resolution exponent");
    transform->add_flag("--json", json, "JSON arrays instead of CSV");

    auto* majorant = app.add_subcommand("majorant", "Rubio de Francia majorant; CSV then a JSON result block");
    std::string f_spec;
    double p = 2.0;
    int depth = kDefaultRdfDepth;
    majorant->add_option("--f", f_spec, "input profile DSL")->required();
    majorant->add_option("--p", p, "exponent p > 1");
    majorant->add_option("--depth", depth, "series depth");
    majorant->add_option("--res", res, "resolution exponent");
    majorant->add_flag("--json", json, "single JSON document with samples");

    auto* verify = app.add_subcommand("verify", "verification suites");
    verify->require_subcommand(1);
    double shift = 3.0;
    std::uint64_t seed = 0;
    int verify_res = kCalibrationResolution;
    auto* shift_ap2 = verify->add_subcommand("shift-ap2", "shifted A_2 estimate for H");
    shift_ap2->add_option("--weight", weight_spec, "weight DSL")->required();
    shift_ap2->add_option("--shift", shift, "shift x0 in multiples of r");
    shift_ap2->add_option("--res", verify_res, "resolution exponent");
    shift_ap2->add_flag("--json", json, "JSON output (the default)");
    std::vector<CLI::App*> seeded;
    for (const char* name : {"a1apt", "a2rdiv", "btsbge"}) {
        auto* sub = verify->add_subcommand(name, std::string("seeded ") + name + " chain");
        sub->add_option("--seed", seed, "instance seed");
        sub->add_option("--res", verify_res, "resolution exponent");
        sub->add_flag("--json", json, "JSON output (the default)");
        seeded.push_back(sub);
    }

    auto* derive = app.add_subcommand("derive", "replay a derivation script");
    std::string script;
    std::string p_text = "2";
    derive->add_option("--script", script)->required()->check(CLI::IsMember(script_names()));
    derive->add_option("--p", p_text, "rational p in (1, 2] for main-chain");
    derive->add_flag("--json", json, "structured JSON trace");

    auto* calibrate = app.add_subcommand("calibrate", "refit the frozen constants on the calibration seeds");
    calibrate->add_flag("--json", json, "JSON output (the default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*constants) {
            const Grid grid = make_grid(half_width, res);
            const Weight w = parse_weight(weight_spec, grid);
            ordered_json j;
            for (double q : ps) j[ap_key(q)] = ap_constant(w, q);
            j["a1"] = a1_constant(w);
            if (res <= kFujiiWilsonMaxResolution || force_fw) j["fw"] = fujii_wilson(w);
            j["doubling"] = doubling_constant(w);
            j["doubling_inverse"] = doubling_constant(w.pow(-1.0));
            j["rh_r"] = reverse_holder(w, rh_r);
            if (res <= kRhExponentMaxResolution || force_rh_exp) j["rh_exp"] = rh_exponent(w, rh_cap);
            out << j.dump(2) << "\n";
            return 0;
        }
        if (*transform) {
            const Grid grid = make_grid(half_width, res);
            const Weight w = parse_weight(weight_spec, grid);
            const auto op = op_name == "hilbert" ? DiscreteOperator::hilbert(grid) : DiscreteOperator::maximal(grid);
            if (json) {
                ordered_json fibers = ordered_json::array();
                for (std::size_t k = 0; k < w.fiber_count(); ++k) {
                    fibers.push_back({{"w", w.fibers()[k]}, {"transform", op.apply(w.fiber(k))}});
                }
                out << ordered_json{{"op", op_name}, {"x", grid.midpoints()}, {"fibers", fibers}}.dump() << "\n";
                return 0;
            }
            out << "fiber,cell,x,w,transform\n";
            for (std::size_t k = 0; k < w.fiber_count(); ++k) {
                const Samples t = op.apply(w.fiber(k));
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    out << k << "," << i << "," << num(grid.midpoint(i)) << "," << num(w.fiber(k)[i]) << "," << num(t[i])
                        << "\n";
                }
            }
            return 0;
        }
        if (*majorant) {
            const Grid grid = make_grid(half_width, res);
            const Weight f = parse_weight(f_spec, grid);
            const MajorantResult m = rdf_majorant(f.fiber(0), p, grid, depth);
            const double bound = 2.0 * maximal_norm_lp(p, grid);
            ordered_json result{{"p", p},
                                {"depth", depth},
                                {"norm_ratio", m.norm_ratio},
                                {"advertised_bound", m.advertised_bound},
                                {"class_tag", to_string(m.class_tag)},
                                {"class_constant", m.class_constant},
                                {"a1_bound", bound},
                                {"pass", m.norm_ratio <= m.advertised_bound && m.class_constant <= bound * 1.05}};
            if (json) {
                result["x"] = grid.midpoints();
                result["f"] = m.input;
                result["w"] = m.majorant.fibers()[0];
                out << result.dump() << "\n";
            } else {
                out << "cell,x,f,w\n";
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    out << i << "," << num(grid.midpoint(i)) << "," << num(m.input[i]) << ","
                        << num(m.majorant.fiber(0)[i]) << "\n";
                }
                out << "\n" << result.dump(2) << "\n";
            }
            if (!result["pass"].get<bool>()) throw CheckFailed{"majorant bounds"};
            return 0;
        }
        if (*verify) {
            const Grid grid = make_grid(half_width, verify_res);
            const Calibration cal = frozen_calibration();
            if (*shift_ap2) {
                const Weight w = parse_weight(weight_spec, grid);
                const auto r = verify_shift_ap2(DiscreteOperator::hilbert(grid), w, shift, cal.shift_ct);
                ordered_json j{{"c", r.c},
                               {"m", r.m},
                               {"worst_ratio", r.worst_ratio},
                               {"worst_interval", {{"start", r.worst_interval.start}, {"length", r.worst_interval.length}}},
                               {"ap2", r.ap2},
                               {"doubling_inverse", r.doubling_inverse},
                               {"geometry_factor", r.geometry_factor},
                               {"fitted_ct", r.fitted_ct},
                               {"ap2_ratio", r.ap2_ratio},
                               {"shift_pass", r.shift_pass},
                               {"ap2_pass", r.ap2_pass},
                               {"pass", r.pass}};
                out << j.dump(2) << "\n";
                if (!r.pass) throw CheckFailed{r.shift_pass ? "A_2 bound with the fitted c_T" : "shifted A_2 estimate"};
                return 0;
            }
            if (*seeded[0]) {
                const auto inst = a1apt_instance(grid, seed);
                emit_chain(out, chain_a1apt(inst.f, inst.w, inst.u, inst.p, inst.delta),
                           {{"seed", seed}, {"p", inst.p}, {"delta", inst.delta}});
                return 0;
            }
            if (*seeded[1]) {
                const auto inst = a2rdiv_instance(grid, seed);
                ChainReport r = chain_a2rdiv(inst.g, inst.h, inst.p_z, grid);
                r.steps.push_back({"frozen c''", r.final_constant, cal.a2rdiv_c, r.final_constant <= cal.a2rdiv_c});
                emit_chain(out, r, {{"seed", seed}, {"p_z", inst.p_z}});
                return 0;
            }
            const auto rm = restricted_majorant(random_profile(grid, seed), 2.0, DiscreteOperator::hilbert(grid), 2.0);
            emit_chain(out, restricted_majorant_report(rm, cal),
                       {{"seed", seed},
                        {"converged", rm.converged},
                        {"iterations", rm.iterations},
                        {"A", rm.equivalence_constant},
                        {"m", rm.lq_norm},
                        {"ap2", rm.ap2}});
            return 0;
        }
        if (*derive) {
            const DerivationTrace t = replay(script, parse_p(p_text));
            if (json) {
                out << trace_json(t).dump(2) << "\n";
            } else {
                out << t.render();
            }
            if (!t.ok) throw CheckFailed{t.failure};
            return 0;
        }
        if (*calibrate) {
            const CalibrationFit fit = fit_calibration();
            ordered_json j{{"resolution", kCalibrationResolution},
                           {"seeds", {kCalibrationSeedBase, kCalibrationSeedBase + kCalibrationSeedCount - 1}},
                           {"margin", kCalibrationMargin},
                           {"raw", calibration_json(fit.raw)},
                           {"frozen", calibration_json(fit.frozen)},
                           {"restricted_nonconvergent", fit.restricted_nonconvergent}};
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const CheckFailed& e) {
        err << "check failed: " << e.what << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const DepthError& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace weightlab
