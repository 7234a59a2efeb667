#include "fracimp/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fracimp/errors.hpp"
#include "fracimp/registry.hpp"
#include "fracimp/report.hpp"
#include "fracimp/special_functions.hpp"

namespace fracimp {

namespace {

using nlohmann::json;

json header(const std::string& command, const ProblemConfig& c) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["problem"] = c.name;
    return j;
}

double density_of(const ProblemConfig& c, const RunOptions& o) {
    return o.grid_density.value_or(c.solver.grid_density);
}

HypothesisData hypothesis_or_estimate(const ProblemConfig& c, const ImpulsiveProblem& problem, bool& estimated) {
    estimated = !c.hypothesis.has_value();
    if (c.hypothesis) return c.hypothesis->data;
    SamplingConfig sc;
    sc.seed = c.solver.seed;
    return estimate_lipschitz(problem, sc);
}

bool within_declared(const HypothesisData& est, const HypothesisData& declared) {
    const auto le = [](double a, double b) { return a <= b * (1.0 + 1e-9) + 1e-12; };
    bool ok = le(est.M_f, declared.M_f) && le(est.N_f, declared.N_f) && le(est.K_h, declared.K_h);
    for (std::size_t i = 0; i < est.L_h.size() && i < declared.L_h.size(); ++i) ok = ok && le(est.L_h[i], declared.L_h[i]);
    return ok;
}

ConstantForm form_of(const ProblemConfig& c) { return c.hypothesis ? c.hypothesis->form : ConstantForm::Derivation; }

// Explicit override, then config, then 1.05 x threshold, then 1.
double resolve_theta(const ProblemConfig& c, const RunOptions& o, std::vector<std::string>& messages) {
    if (o.theta) return *o.theta;
    if (c.solver.theta) return *c.solver.theta;
    if (c.hypothesis) {
        const auto& h = *c.hypothesis;
        if (h.data.variant == HypothesisVariant::Basic) {
            return recommended_theta(c.partition, h.data, c.alpha, c.beta, h.form);
        }
        const auto e = build_exponents(c).value_or(select_holder_exponents(c.partition, h.data, c.alpha, c.beta));
        const double th = theta_threshold_weighted(c.partition, h.data, c.alpha, c.beta, e);
        return th > 0.0 ? 1.05 * th : 1.0;
    }
    messages.push_back("warning: no hypothesis data; using theta = 1");
    return 1.0;
}

SolverConfig solver_config(const ProblemConfig& c, const RunOptions& o, double theta) {
    SolverConfig s;
    s.theta = BieleckiWeight{theta};
    s.tolerance = c.solver.tolerance;
    s.sup_tolerance = c.solver.sup_tolerance;
    s.max_iterations = c.solver.max_iterations;
    s.grid_density = density_of(c, o);
    return s;
}

std::string curve_csv(const PiecewiseFunction& y, const PiecewiseFunction& x, double theta, const TimeFn& phi) {
    std::ostringstream o;
    o.precision(17);
    o << "tau,candidate,solution,weighted_distance,phi,segment_index\n";
    for (std::size_t s = 0; s < y.segments().size(); ++s) {
        const auto& nodes = y.segments()[s].samples.grid().nodes();
        const auto& yv = y.segments()[s].samples.values();
        const auto& xv = x.segments()[s].samples.values();
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double d = std::abs(yv[k] - xv[k]) * std::exp(-theta * nodes[k]);
            o << nodes[k] << ',' << yv[k] << ',' << xv[k] << ',' << d << ',' << (phi ? phi(nodes[k]) : 1.0) << ','
              << s << '\n';
        }
    }
    return o.str();
}

json check(const std::string& name, bool pass, json expected, json computed, const std::string& note = "") {
    json j{{"name", name}, {"pass", pass}, {"expected", std::move(expected)}, {"computed", std::move(computed)}};
    if (!note.empty()) j["note"] = note;
    return j;
}

}  // namespace

CommandOutput run_solve(const ProblemConfig& c, const RunOptions& o) {
    CommandOutput out;
    const ImpulsiveProblem problem = build_problem(c);
    const double theta = resolve_theta(c, o, out.messages);
    const SolverConfig sc = solver_config(c, o, theta);
    const SolveResult res = solve_picard(problem, sc);

    json j = header("solve", c);
    j["theta"] = theta;
    j["tolerance"] = sc.tolerance;
    j["grid_density"] = sc.grid_density;
    j["trace"] = to_json(res.trace);
    j["fixed_point_residual"] = fixed_point_residual(problem, res.solution, sc.theta);
    if (c.hypothesis) {
        const auto rep = analyze(c.partition, c.hypothesis->data, c.alpha, c.beta, theta, c.hypothesis->form,
                                 build_exponents(c));
        j["contraction_constant"] = rep.L;
        if (rep.L >= 1.0) out.messages.push_back("warning: contraction constant >= 1 at this theta");
    }
    if (!c.reference.empty()) {
        const TimeFn ref = build_time_function(c, c.reference, "reference");
        double err = 0.0;
        for (const auto& seg : res.solution.segments()) {
            const auto& nodes = seg.samples.grid().nodes();
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                err = std::max(err, std::abs(seg.samples.values()[k] - ref(nodes[k])));
            }
        }
        j["reference_max_abs_error"] = err;
        char buf[64];
        std::snprintf(buf, sizeof buf, "max abs error vs reference: %.3e", err);
        out.messages.push_back(buf);
    }
    out.artifacts["trace.json"] = dump_json(j);
    if (!o.json_only) out.artifacts["solution.csv"] = solution_csv(res.solution);
    out.exit_code = res.trace.converged ? kExitOk : kExitNumerical;
    out.messages.push_back(res.trace.converged ? "converged in " + std::to_string(res.trace.iterations) + " iterations"
                                               : "did not converge");
    return out;
}

CommandOutput run_analyze(const ProblemConfig& c, const RunOptions& o) {
    CommandOutput out;
    const ImpulsiveProblem problem = build_problem(c);
    bool estimated = false;
    const HypothesisData hyp = hypothesis_or_estimate(c, problem, estimated);
    std::optional<double> theta = o.theta ? o.theta : c.solver.theta;
    const AnalysisReport rep =
        analyze(c.partition, hyp, c.alpha, c.beta, theta.value_or(0.0), form_of(c), build_exponents(c));

    json j = header("analyze", c);
    j["hypothesis"] = to_json(hyp);
    j["hypothesis_source"] = estimated ? "sampled" : "declared";
    j["report"] = to_json(rep);
    if (hyp.variant == HypothesisVariant::Basic) {
        json forms = json::object();
        for (auto f : {ConstantForm::Derivation, ConstantForm::Display, ConstantForm::ExampleArithmetic}) {
            const auto r = contraction_constant_basic(c.partition, hyp, c.alpha, c.beta, rep.theta_used, f);
            forms[form_name(f)] = {{"L", r.L}, {"theta_threshold", r.theta_threshold}};
        }
        j["forms"] = forms;
    }
    SamplingConfig sc;
    sc.seed = c.solver.seed;
    const HypothesisData est = estimate_lipschitz(problem, sc);
    j["lipschitz_estimate"] = to_json(est);
    if (!estimated) {
        j["estimate_within_declared"] = within_declared(est, hyp);
    }
    out.artifacts["analysis.json"] = dump_json(j);
    out.exit_code = rep.L < 1.0 ? kExitOk : kExitNumerical;
    out.messages.push_back("L = " + std::to_string(rep.L) + " at theta = " + std::to_string(rep.theta_used) +
                           ", threshold " + std::to_string(rep.theta_threshold));
    return out;
}

CommandOutput run_certify(const ProblemConfig& c, const RunOptions& o) {
    CommandOutput out;
    if (c.candidate.empty()) throw ConfigError("certify needs [functions] candidate");
    const ImpulsiveProblem problem = build_problem(c);
    bool estimated = false;
    const HypothesisData hyp = hypothesis_or_estimate(c, problem, estimated);
    const double theta = resolve_theta(c, o, out.messages);
    const TimeFn candidate = build_time_function(c, c.candidate, "candidate");
    const TimeFn phi = build_time_function(c, c.phi, "phi");
    const double density = density_of(c, o);
    const PiecewiseFunction y = PiecewiseFunction::sample(c.partition, density, candidate);

    StabilityConfig st;
    st.epsilon = c.stability.epsilon.value_or(0.0);
    st.psi = c.stability.psi;
    st.phi = phi;
    st.c_phi = c.stability.c_phi;
    CertifyOptions co;
    co.theta = theta;
    co.solver = solver_config(c, o, theta);
    co.constant_override = c.stability.constant;
    co.exponents = build_exponents(c);
    co.candidate = candidate;
    const StabilityReport rep = certify(problem, hyp, y, st, c.stability.mode, co);

    json j = header("certify", c);
    j["hypothesis"] = to_json(hyp);
    j["hypothesis_source"] = estimated ? "sampled" : "declared";
    j["report"] = to_json(rep);
    out.artifacts["stability.json"] = dump_json(j);
    if (!o.json_only) out.artifacts["certify_curve.csv"] = curve_csv(y, *rep.solution, theta, phi);
    out.exit_code = rep.bound_satisfied ? kExitOk : kExitNumerical;
    out.messages.push_back(std::string("bound ") + (rep.bound_satisfied ? "holds" : "fails") +
                           ", worst margin " + std::to_string(rep.worst_margin));
    return out;
}

CommandOutput run_example51(const RunOptions& o) {
    namespace ex = example51;
    CommandOutput out;
    ProblemConfig c = example51_config();
    if (o.grid_density) c.solver.grid_density = *o.grid_density;
    const double theta = o.theta.value_or(ex::kCheckTheta);
    const ImpulsiveProblem problem = build_problem(c);
    const HypothesisData hyp = c.hypothesis->data;
    json checks = json::array();
    json info = json::array();

    // Lipschitz constants.
    SamplingConfig sampling;
    sampling.seed = c.solver.seed;
    const HypothesisData est = estimate_lipschitz(problem, sampling);
    const bool est_ok = within_declared(est, hyp);
    checks.push_back(check("sampled Lipschitz constants do not exceed the declared ones", est_ok, to_json(hyp),
                           to_json(est)));

    // Contraction constants.
    json forms = json::object();
    for (auto f : {ConstantForm::Derivation, ConstantForm::Display, ConstantForm::ExampleArithmetic}) {
        const auto r = contraction_constant_basic(c.partition, hyp, c.alpha, c.beta, theta, f);
        forms[form_name(f)] = to_json(r);
        if (f != ConstantForm::ExampleArithmetic) {
            checks.push_back(check(std::string("L < 1 (") + form_name(f) + " form)", r.L < 1.0, "< 1", r.L));
        }
        info.push_back(check(std::string("theta threshold (") + form_name(f) + " form)",
                             std::abs(r.theta_threshold / ex::kPublishedTheta - 1.0) <= 0.15, ex::kPublishedTheta,
                             r.theta_threshold, "pass means within 15% of the published value"));
    }
    const double published_L = ex::kPublishedConstantNumerator * std::sqrt(3.0) /
                               (gamma_fn(2.0 / 3.0) * std::sqrt(2.0 * theta));
    info.push_back(check("published constant expression at theta", published_L < 1.0, "< 1", published_L));
    json analysis = header("analyze", c);
    analysis["hypothesis"] = to_json(hyp);
    analysis["hypothesis_source"] = "declared";
    analysis["forms"] = forms;
    analysis["published_constant"] = published_L;
    analysis["lipschitz_estimate"] = to_json(est);
    out.artifacts["analysis.json"] = dump_json(analysis);

    // Fixed point.
    const SolverConfig sc = solver_config(c, o, theta);
    const SolveResult solved = solve_picard(problem, sc);
    json trace = header("solve", c);
    trace["theta"] = theta;
    trace["tolerance"] = sc.tolerance;
    trace["grid_density"] = sc.grid_density;
    trace["trace"] = to_json(solved.trace);
    trace["fixed_point_residual"] = fixed_point_residual(problem, solved.solution, sc.theta);
    out.artifacts["trace.json"] = dump_json(trace);
    if (!o.json_only) out.artifacts["solution.csv"] = solution_csv(solved.solution);
    checks.push_back(check("Picard iteration converged", solved.trace.converged, true, solved.trace.iterations));

    // Residuals of the candidate and of the fixed point.
    const PiecewiseFunction y = PiecewiseFunction::sample(c.partition, sc.grid_density, ex::candidate);
    ResidualOptions ro;
    ro.phi = ex::phi;
    ro.psi = 0.0;
    ro.candidate = ex::candidate;
    const ResidualProfile cand = residual_profile(problem, y, ro);
    checks.push_back(check("candidate residual on (0, 1]",
                           cand.differential_sups[0] <= ex::kPublishedFirstResidualBound + cand.differential_bands[0],
                           ex::kPublishedFirstResidualBound, cand.differential_sups[0]));
    checks.push_back(check("candidate residual on (2, 3]",
                           cand.differential_sups[1] <= ex::kPublishedLastResidualBound + cand.differential_bands[1],
                           ex::kPublishedLastResidualBound, cand.differential_sups[1]));
    checks.push_back(check("candidate impulse residual on (1, 2]", cand.impulse_sups[0] <= 1e-8, 0.0,
                           cand.impulse_sups[0]));
    ResidualOptions rs;
    rs.phi = ex::phi;
    const ResidualProfile fixed = residual_profile(problem, solved.solution, rs);
    info.push_back(check("fixed-point residuals", true, nullptr, to_json(fixed)));

    const PiecewiseFunction printed = PiecewiseFunction::sample(c.partition, sc.grid_density, ex::printed_solution);
    ResidualOptions rp = ro;
    rp.candidate = ex::printed_solution;
    const ResidualProfile printed_profile = residual_profile(problem, printed, rp);
    info.push_back(check("printed closed-form solution residuals", true, "0 if it solved the problem",
                         to_json(printed_profile)));
    info.push_back(check("printed closed-form solution fixed-point residual", true, nullptr,
                         fixed_point_residual(problem, printed, sc.theta)));

    // Comparison function.
    const auto phi_grid = Grid::uniform(0.0, ex::kT, panels_for(ex::kT, sc.grid_density));
    const auto phi_sampled = SampledFunction::sample(phi_grid, ex::phi);
    const PhiDomination dom = check_phi_domination(phi_sampled, c.alpha);
    const double excess = phi_domination_excess(phi_sampled, c.alpha, 1.0);
    checks.push_back(check("I^alpha phi <= 1 * phi (c_phi = 1 admissible)", excess <= 0.0, 1.0, excess));
    info.push_back(check("smallest admissible c_phi on the grid", std::abs(dom.c_phi - 1.0) <= 1e-6, 1.0, dom.c_phi));

    // Certification with the published constant.
    StabilityConfig st;
    st.psi = 0.0;
    st.phi = ex::phi;
    st.c_phi = 1.0;
    CertifyOptions co;
    co.theta = theta;
    co.solver = sc;
    co.constant_override = ex::kPublishedStabilityConstant;
    co.candidate = ex::candidate;
    const StabilityReport rep = certify(problem, hyp, y, st, StabilityMode::GeneralizedBUHR, co);
    json stab = header("certify", c);
    stab["hypothesis"] = to_json(hyp);
    stab["hypothesis_source"] = "declared";
    stab["report"] = to_json(rep);
    out.artifacts["stability.json"] = dump_json(stab);
    if (!o.json_only) out.artifacts["certify_curve.csv"] = curve_csv(y, *rep.solution, theta, ex::phi);
    checks.push_back(check("|y - x| e^{-theta tau} <= C (psi + phi) with C = 1", rep.bound_satisfied, 0.0,
                           rep.worst_margin, "computed is the worst margin"));
    if (rep.computed_constant) {
        info.push_back(check("computed stability constant", rep.computed_constant->value >= 1.0, ">= 1",
                             rep.computed_constant->value));
    }

    bool all = true;
    for (const auto& ch : checks) all = all && ch["pass"].get<bool>();
    json summary = header("example51", c);
    summary["theta"] = theta;
    summary["checks"] = checks;
    summary["informational"] = info;
    summary["all_checks_pass"] = all;
    out.artifacts["summary.json"] = dump_json(summary);
    out.exit_code = all ? kExitOk : kExitNumerical;
    for (const auto& ch : checks) {
        out.messages.push_back(std::string(ch["pass"].get<bool>() ? "PASS " : "FAIL ") + ch["name"].get<std::string>());
    }
    return out;
}

CommandOutput run_command(const std::string& command, const std::string& config_text, const RunOptions& options) {
    CommandOutput out;
    try {
        if (options.grid_density && !(*options.grid_density > 0.0)) throw ConfigError("--grid-density must be positive");
        if (options.theta && !(*options.theta > 0.0)) throw ConfigError("--theta must be positive");
        if (command == "example51") return run_example51(options);
        if (command != "solve" && command != "analyze" && command != "certify") {
            throw ConfigError("unknown command '" + command + "'");
        }
        const ProblemConfig c = parse_config(config_text);
        if (command == "solve") return run_solve(c, options);
        if (command == "analyze") return run_analyze(c, options);
        return run_certify(c, options);
    } catch (const ConfigError& e) {
        out.exit_code = kExitConfig;
        out.messages.push_back(std::string("config error: ") + e.what());
    } catch (const std::exception& e) {
        out.exit_code = kExitNumerical;
        out.messages.push_back(std::string("numerical error: ") + e.what());
    }
    return out;
}

}  // namespace fracimp
