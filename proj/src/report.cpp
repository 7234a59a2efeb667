#include "fracimp/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fracimp {

namespace {

std::string number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void render(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + nlohmann::json(it.key()).dump() + (indent > 0 ? ": " : ":");
                render(it.value(), indent, depth + 1, out);
            }
            out += nl + close_pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ",";
                    out += nl;
                }
                out += pad;
                render(j[i], indent, depth + 1, out);
            }
            out += nl + close_pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += number(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

nlohmann::json vec(const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

std::string dump_json(const nlohmann::json& value, int indent) {
    std::string out;
    render(value, indent, 0, out);
    out += "\n";
    return out;
}

std::string solution_csv(const PiecewiseFunction& x) {
    std::ostringstream o;
    o << "tau,value,segment_index,branch_tag\n";
    for (std::size_t s = 0; s < x.segments().size(); ++s) {
        const auto& seg = x.segments()[s];
        const auto& nodes = seg.samples.grid().nodes();
        const auto& vals = seg.samples.values();
        const std::string tag = std::string(branch_name(seg.tag.branch)) + "_" + std::to_string(seg.tag.index);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            o << number(nodes[k]) << ',' << number(vals[k]) << ',' << s << ',' << tag << '\n';
        }
    }
    return o.str();
}

nlohmann::json to_json(const HypothesisData& hyp) {
    nlohmann::json j;
    j["variant"] = variant_name(hyp.variant);
    j["M_f"] = hyp.M_f;
    j["N_f"] = hyp.N_f;
    j["K_h"] = hyp.K_h;
    j["L_h"] = vec(hyp.L_h);
    if (hyp.variant == HypothesisVariant::Weighted) {
        j["gamma_f"] = hyp.gamma_f;
        j["gamma_imp"] = hyp.gamma_imp;
    }
    return j;
}

nlohmann::json to_json(const SolveTrace& t) {
    nlohmann::json j;
    j["steps"] = vec(t.steps);
    j["sup_steps"] = vec(t.sup_steps);
    j["observed_ratio"] = t.observed_ratio;
    j["converged"] = t.converged;
    j["iterations"] = t.iterations;
    return j;
}

nlohmann::json to_json(const AnalysisReport& r) {
    nlohmann::json j;
    j["variant"] = variant_name(r.variant);
    j["form"] = form_name(r.form);
    j["L"] = r.L;
    j["theta_used"] = r.theta_used;
    j["theta_threshold"] = r.theta_threshold;
    j["contraction"] = r.L < 1.0;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : r.per_interval) {
        terms.push_back({{"index", t.index}, {"impulse", t.impulse}, {"drift", t.drift}, {"memory", t.memory},
                         {"total", t.total()}});
    }
    j["per_interval"] = terms;
    if (r.exponents) {
        j["exponents"] = {{"p", r.exponents->p}, {"p_conj", r.exponents->p_conj}, {"p1", r.exponents->p1},
                          {"p1_conj", r.exponents->p1_conj}};
    }
    if (r.bounds) j["bounds"] = {{"omega1", r.bounds->omega1}, {"omega2", r.bounds->omega2}};
    return j;
}

nlohmann::json to_json(const ResidualProfile& p) {
    nlohmann::json j;
    j["differential_sups"] = vec(p.differential_sups);
    j["differential_bands"] = vec(p.differential_bands);
    j["differential_argmax"] = vec(p.differential_argmax);
    j["impulse_sups"] = vec(p.impulse_sups);
    j["impulse_bands"] = vec(p.impulse_bands);
    j["epsilon_for_phi"] = p.epsilon_for_phi ? nlohmann::json(*p.epsilon_for_phi) : nlohmann::json(nullptr);
    j["status"] = p.status;
    return j;
}

nlohmann::json to_json(const StabilityConstant& c) {
    nlohmann::json j;
    j["value"] = c.value;
    j["first"] = c.first;
    j["impulse_sum"] = c.impulse_sum;
    j["mixed_sum"] = c.mixed_sum;
    nlohmann::json d = nlohmann::json::array();
    for (std::size_t k = 0; k < c.denominators.size(); ++k) {
        d.push_back({{"interval", c.denominator_labels[k]}, {"value", c.denominators[k]}});
    }
    j["denominators"] = d;
    return j;
}

nlohmann::json to_json(const StabilityReport& r) {
    nlohmann::json j;
    j["mode"] = mode_name(r.mode);
    j["theta"] = r.theta;
    j["epsilon"] = r.epsilon;
    j["psi"] = r.psi;
    j["constant"] = r.constant;
    j["constant_overridden"] = r.constant_overridden;
    j["computed_constant"] = r.computed_constant ? to_json(*r.computed_constant) : nlohmann::json(nullptr);
    j["c_phi"] = r.c_phi;
    j["premise_holds"] = r.premise_holds;
    j["bound_satisfied"] = r.bound_satisfied;
    j["worst_margin"] = r.worst_margin;
    j["worst_tau"] = r.worst_tau;
    j["max_weighted_distance"] = r.max_weighted_distance;
    j["residuals"] = to_json(r.profile);
    j["solve"] = to_json(r.solve_trace);
    return j;
}

}  // namespace fracimp
