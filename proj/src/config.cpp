#include "fracimp/config.hpp"

#include <cmath>
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fracimp/errors.hpp"
#include "fracimp/expression.hpp"
#include "fracimp/registry.hpp"
#include "fracimp/special_functions.hpp"

namespace fracimp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    std::size_t line;
};

[[noreturn]] void fail_at(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(const Entry& e, const std::string& key) {
    try {
        const Expression ex = Expression::parse(e.value);
        for (const char* v : {"tau", "x", "v", "sigma"}) {
            if (ex.uses(v)) fail_at(e.line, key + " must be a constant expression");
        }
        return ex.evaluate({});
    } catch (const ExpressionError& err) {
        fail_at(e.line, key + ": " + err.what());
    } catch (const EvaluationError& err) {
        fail_at(e.line, key + ": " + err.what());
    }
}

std::optional<double> parse_auto(const Entry& e, const std::string& key) {
    if (e.value == "auto") return std::nullopt;
    return parse_number(e, key);
}

std::vector<double> parse_array(const Entry& e, const std::string& key) {
    const std::string s = trim(e.value);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail_at(e.line, key + " must be an array [a, b, ...]");
    std::vector<double> out;
    const std::string body = s.substr(1, s.size() - 2);
    if (trim(body).empty()) return out;
    int depth = 0;
    std::string cur;
    for (char c : body) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(parse_number({trim(cur), e.line}, key));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(parse_number({trim(cur), e.line}, key));
    return out;
}

std::size_t parse_count(const Entry& e, const std::string& key) {
    const double v = parse_number(e, key);
    if (!(v >= 1.0) || v != std::floor(v)) fail_at(e.line, key + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

// Validates a function source against the variables its slot may use.
void check_function(const std::string& source, FunctionKind kind, std::size_t line, const std::string& key) {
    if (source.empty()) return;
    if (source.front() == '@') {
        const RegistryEntry* e = find_registry_entry(source.substr(1));
        if (!e) fail_at(line, key + ": unknown registry function '" + source + "'");
        if (e->kind != kind) {
            fail_at(line, key + ": '" + source + "' is " + kind_name(e->kind) + ", expected " + kind_name(kind));
        }
        return;
    }
    Expression ex;
    try {
        ex = Expression::parse(source);
    } catch (const ExpressionError& err) {
        fail_at(line, key + ": " + err.what());
    }
    if (kind != FunctionKind::Drift && ex.uses("v")) fail_at(line, key + " may not depend on v");
    if (kind == FunctionKind::Time && ex.uses("x")) fail_at(line, key + " may not depend on x");
}

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"problem", {"name", "alpha", "beta", "tau_points", "sigma_points", "x0"}},
        {"functions", {"f", "h", "phi", "candidate", "reference"}},
        {"hypothesis", {"variant", "M_f", "N_f", "K_h", "L_h", "gamma_f", "gamma_imp", "form", "p", "p1"}},
        {"solver", {"theta", "tolerance", "sup_tolerance", "max_iterations", "grid_density", "seed"}},
        {"stability", {"mode", "epsilon", "psi", "c_phi", "constant"}},
    };
    return k;
}

bool is_impulse_key(const std::string& key) {
    if (key.size() < 2 || key[0] != 'h') return false;
    return std::all_of(key.begin() + 1, key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
           key[1] != '0';
}

// sigma for an expression: left end of the branch interval containing tau.
struct IntervalStarts {
    std::vector<SegmentSpan> spans;
    double operator()(double tau) const {
        for (const auto& s : spans) {
            if (tau > s.a && tau <= s.b) return s.a;
        }
        return 0.0;
    }
};

}  // namespace

ProblemConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[' && s.back() == ']' && s.find('=') == std::string::npos) {
            current = trim(s.substr(1, s.size() - 2));
            if (!allowed_keys().count(current)) fail_at(line, "unknown section [" + current + "]");
            if (sections.count(current)) fail_at(line, "duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail_at(line, "expected key = value");
        if (current.empty()) fail_at(line, "key outside of a section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = unquote(trim(s.substr(eq + 1)));
        const bool ok = allowed_keys().at(current).count(key) || (current == "functions" && is_impulse_key(key));
        if (!ok) fail_at(line, "unknown key '" + key + "' in [" + current + "]");
        if (value.empty()) fail_at(line, "empty value for '" + key + "'");
        if (sections[current].count(key)) fail_at(line, "duplicate key '" + key + "'");
        sections[current][key] = {value, line};
    }

    ProblemConfig c;
    auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
        auto it = sections.find(sec);
        if (it == sections.end()) return nullptr;
        auto jt = it->second.find(key);
        return jt == it->second.end() ? nullptr : &jt->second;
    };
    auto require = [&](const std::string& sec, const std::string& key) -> const Entry& {
        const Entry* e = get(sec, key);
        if (!e) throw ConfigError("missing required key '" + key + "' in [" + sec + "]");
        return *e;
    };

    if (!sections.count("problem")) throw ConfigError("missing [problem] section");
    if (const Entry* e = get("problem", "name")) c.name = e->value;
    c.alpha = parse_number(require("problem", "alpha"), "alpha");
    c.beta = parse_number(require("problem", "beta"), "beta");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail_at(require("problem", "alpha").line, "alpha must lie in (0, 1)");
    if (!(c.beta > 0.0 && c.beta < 1.0)) fail_at(require("problem", "beta").line, "beta must lie in (0, 1)");
    c.partition.tau_points = parse_array(require("problem", "tau_points"), "tau_points");
    if (const Entry* e = get("problem", "sigma_points")) {
        c.partition.sigma_points = parse_array(*e, "sigma_points");
    } else {
        c.partition.sigma_points.clear();
    }
    const auto check = validate_partition(c.partition);
    if (!check) fail_at(require("problem", "tau_points").line, "invalid partition: " + check.violation);
    if (const Entry* e = get("problem", "x0")) c.x0 = parse_number(*e, "x0");

    const std::size_t m = c.partition.m();
    const Entry& fe = require("functions", "f");
    check_function(fe.value, FunctionKind::Drift, fe.line, "f");
    c.f = fe.value;
    const Entry& he = require("functions", "h");
    check_function(he.value, FunctionKind::State, he.line, "h");
    c.h = he.value;
    for (std::size_t i = 1; i <= m; ++i) {
        const std::string key = "h" + std::to_string(i);
        const Entry& e = require("functions", key);
        check_function(e.value, FunctionKind::State, e.line, key);
        c.impulse.push_back(e.value);
    }
    if (sections.count("functions")) {
        for (const auto& [key, e] : sections["functions"]) {
            if (is_impulse_key(key) && std::stoul(key.substr(1)) > m) {
                fail_at(e.line, "impulse map '" + key + "' exceeds m = " + std::to_string(m));
            }
        }
    }
    for (const char* key : {"phi", "candidate", "reference"}) {
        if (const Entry* e = get("functions", key)) {
            check_function(e->value, FunctionKind::Time, e->line, key);
            (std::string(key) == "phi" ? c.phi : std::string(key) == "candidate" ? c.candidate : c.reference) =
                e->value;
        }
    }

    if (sections.count("hypothesis")) {
        HypothesisSettings hs;
        if (const Entry* e = get("hypothesis", "variant")) {
            if (e->value == "basic") hs.data.variant = HypothesisVariant::Basic;
            else if (e->value == "weighted") hs.data.variant = HypothesisVariant::Weighted;
            else fail_at(e->line, "variant must be basic or weighted");
        }
        hs.data.M_f = parse_number(require("hypothesis", "M_f"), "M_f");
        hs.data.N_f = parse_number(require("hypothesis", "N_f"), "N_f");
        hs.data.K_h = parse_number(require("hypothesis", "K_h"), "K_h");
        if (const Entry* e = get("hypothesis", "L_h")) hs.data.L_h = parse_array(*e, "L_h");
        if (hs.data.L_h.size() != m) {
            throw ConfigError("L_h must list " + std::to_string(m) + " constants");
        }
        if (const Entry* e = get("hypothesis", "gamma_f")) hs.data.gamma_f = parse_number(*e, "gamma_f");
        if (const Entry* e = get("hypothesis", "gamma_imp")) hs.data.gamma_imp = parse_number(*e, "gamma_imp");
        if (const Entry* e = get("hypothesis", "form")) {
            if (e->value == "derivation") hs.form = ConstantForm::Derivation;
            else if (e->value == "display") hs.form = ConstantForm::Display;
            else if (e->value == "example-arithmetic") hs.form = ConstantForm::ExampleArithmetic;
            else fail_at(e->line, "form must be derivation, display or example-arithmetic");
        }
        if (const Entry* e = get("hypothesis", "p")) hs.p = parse_number(*e, "p");
        if (const Entry* e = get("hypothesis", "p1")) hs.p1 = parse_number(*e, "p1");
        try {
            validate_hypothesis(hs.data, c.alpha, c.beta, m);
        } catch (const std::exception& err) {
            throw ConfigError(std::string("[hypothesis]: ") + err.what());
        }
        c.hypothesis = hs;
    }

    if (const Entry* e = get("solver", "theta")) {
        c.solver.theta = parse_auto(*e, "theta");
        if (c.solver.theta && !(*c.solver.theta > 0.0)) fail_at(e->line, "theta must be positive");
    }
    if (const Entry* e = get("solver", "tolerance")) {
        c.solver.tolerance = parse_number(*e, "tolerance");
        if (!(c.solver.tolerance > 0.0)) fail_at(e->line, "tolerance must be positive");
    }
    if (const Entry* e = get("solver", "sup_tolerance")) c.solver.sup_tolerance = parse_number(*e, "sup_tolerance");
    if (const Entry* e = get("solver", "max_iterations")) c.solver.max_iterations = parse_count(*e, "max_iterations");
    if (const Entry* e = get("solver", "grid_density")) {
        c.solver.grid_density = parse_number(*e, "grid_density");
        if (!(c.solver.grid_density > 0.0)) fail_at(e->line, "grid_density must be positive");
    }
    if (const Entry* e = get("solver", "seed")) c.solver.seed = static_cast<std::uint64_t>(parse_number(*e, "seed"));

    if (const Entry* e = get("stability", "mode")) {
        const auto mode = parse_mode(e->value);
        if (!mode) fail_at(e->line, "mode must be BUH, generalized-BUH, BUHR or generalized-BUHR");
        c.stability.mode = *mode;
    }
    if (const Entry* e = get("stability", "epsilon")) c.stability.epsilon = parse_auto(*e, "epsilon");
    if (const Entry* e = get("stability", "psi")) c.stability.psi = parse_number(*e, "psi");
    if (const Entry* e = get("stability", "c_phi")) c.stability.c_phi = parse_auto(*e, "c_phi");
    if (const Entry* e = get("stability", "constant")) c.stability.constant = parse_auto(*e, "constant");
    return c;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ProblemConfig& c) {
    std::ostringstream o;
    auto arr = [](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
        return s + "]";
    };
    auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("auto"); };
    o << "[problem]\n";
    o << "name = " << c.name << "\n";
    o << "alpha = " << num(c.alpha) << "\n";
    o << "beta = " << num(c.beta) << "\n";
    o << "tau_points = " << arr(c.partition.tau_points) << "\n";
    if (!c.partition.sigma_points.empty()) o << "sigma_points = " << arr(c.partition.sigma_points) << "\n";
    o << "x0 = " << num(c.x0) << "\n\n";
    o << "[functions]\n";
    o << "f = " << c.f << "\n";
    o << "h = " << c.h << "\n";
    for (std::size_t i = 0; i < c.impulse.size(); ++i) o << "h" << i + 1 << " = " << c.impulse[i] << "\n";
    if (!c.phi.empty()) o << "phi = " << c.phi << "\n";
    if (!c.candidate.empty()) o << "candidate = " << c.candidate << "\n";
    if (!c.reference.empty()) o << "reference = " << c.reference << "\n";
    if (c.hypothesis) {
        const auto& h = *c.hypothesis;
        o << "\n[hypothesis]\n";
        o << "variant = " << variant_name(h.data.variant) << "\n";
        o << "M_f = " << num(h.data.M_f) << "\n";
        o << "N_f = " << num(h.data.N_f) << "\n";
        o << "K_h = " << num(h.data.K_h) << "\n";
        o << "L_h = " << arr(h.data.L_h) << "\n";
        o << "gamma_f = " << num(h.data.gamma_f) << "\n";
        o << "gamma_imp = " << num(h.data.gamma_imp) << "\n";
        o << "form = " << form_name(h.form) << "\n";
        if (h.p) o << "p = " << num(*h.p) << "\n";
        if (h.p1) o << "p1 = " << num(*h.p1) << "\n";
    }
    o << "\n[solver]\n";
    o << "theta = " << opt(c.solver.theta) << "\n";
    o << "tolerance = " << num(c.solver.tolerance) << "\n";
    o << "sup_tolerance = " << num(c.solver.sup_tolerance) << "\n";
    o << "max_iterations = " << c.solver.max_iterations << "\n";
    o << "grid_density = " << num(c.solver.grid_density) << "\n";
    o << "seed = " << c.solver.seed << "\n";
    o << "\n[stability]\n";
    o << "mode = " << mode_name(c.stability.mode) << "\n";
    o << "epsilon = " << opt(c.stability.epsilon) << "\n";
    o << "psi = " << num(c.stability.psi) << "\n";
    o << "c_phi = " << opt(c.stability.c_phi) << "\n";
    o << "constant = " << opt(c.stability.constant) << "\n";
    return o.str();
}

std::vector<std::string> config_differences(const ProblemConfig& a, const ProblemConfig& b) {
    std::vector<std::string> d;
    auto cmp = [&](bool same, const char* name) {
        if (!same) d.push_back(name);
    };
    cmp(a.name == b.name, "name");
    cmp(a.alpha == b.alpha, "alpha");
    cmp(a.beta == b.beta, "beta");
    cmp(a.partition == b.partition, "partition");
    cmp(a.x0 == b.x0, "x0");
    cmp(a.f == b.f, "f");
    cmp(a.h == b.h, "h");
    cmp(a.impulse == b.impulse, "impulse");
    cmp(a.phi == b.phi, "phi");
    cmp(a.candidate == b.candidate, "candidate");
    cmp(a.reference == b.reference, "reference");
    cmp(a.hypothesis.has_value() == b.hypothesis.has_value(), "hypothesis");
    if (a.hypothesis && b.hypothesis) {
        const auto& x = *a.hypothesis;
        const auto& y = *b.hypothesis;
        cmp(x.data.variant == y.data.variant, "hypothesis.variant");
        cmp(x.data.M_f == y.data.M_f, "hypothesis.M_f");
        cmp(x.data.N_f == y.data.N_f, "hypothesis.N_f");
        cmp(x.data.K_h == y.data.K_h, "hypothesis.K_h");
        cmp(x.data.L_h == y.data.L_h, "hypothesis.L_h");
        cmp(x.data.gamma_f == y.data.gamma_f, "hypothesis.gamma_f");
        cmp(x.data.gamma_imp == y.data.gamma_imp, "hypothesis.gamma_imp");
        cmp(x.form == y.form, "hypothesis.form");
        cmp(x.p == y.p, "hypothesis.p");
        cmp(x.p1 == y.p1, "hypothesis.p1");
    }
    cmp(a.solver == b.solver, "solver");
    cmp(a.stability == b.stability, "stability");
    return d;
}

namespace {

DriftFn drift_from(const std::string& source, const IntervalStarts& starts) {
    if (source.front() == '@') return find_registry_entry(source.substr(1))->drift;
    const Expression ex = Expression::parse(source);
    return [ex, starts](double t, double x, double v) { return ex.evaluate({t, x, v, starts(t)}); };
}

StateFn state_from(const std::string& source, const IntervalStarts& starts) {
    if (source.front() == '@') return find_registry_entry(source.substr(1))->state;
    const Expression ex = Expression::parse(source);
    return [ex, starts](double t, double x) { return ex.evaluate({t, x, 0.0, starts(t)}); };
}

}  // namespace

ImpulsiveProblem build_problem(const ProblemConfig& c) {
    const IntervalStarts starts{segment_spans(c.partition)};
    ImpulsiveProblem p;
    p.alpha = c.alpha;
    p.beta = c.beta;
    p.partition = c.partition;
    p.x0 = c.x0;
    p.f = drift_from(c.f, starts);
    p.h = state_from(c.h, starts);
    for (const auto& s : c.impulse) p.impulse_maps.push_back(state_from(s, starts));
    validate_problem(p);
    return p;
}

TimeFn build_time_function(const ProblemConfig& c, const std::string& source, const std::string& label) {
    if (source.empty()) return {};
    if (source.front() == '@') {
        const RegistryEntry* e = find_registry_entry(source.substr(1));
        if (!e || e->kind != FunctionKind::Time) throw ConfigError(label + ": '" + source + "' is not a function of tau");
        return e->time;
    }
    const IntervalStarts starts{segment_spans(c.partition)};
    const Expression ex = Expression::parse(source);
    return [ex, starts](double t) { return ex.evaluate({t, 0.0, 0.0, starts(t)}); };
}

std::optional<HolderExponents> build_exponents(const ProblemConfig& c) {
    if (!c.hypothesis || (!c.hypothesis->p && !c.hypothesis->p1)) return std::nullopt;
    const double p = c.hypothesis->p.value_or(2.0);
    const double p1 = c.hypothesis->p1.value_or(2.0);
    try {
        return HolderExponents::from(p, p1);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[hypothesis]: ") + e.what());
    }
}

ProblemConfig example51_config() {
    ProblemConfig c;
    c.name = "example51";
    c.alpha = example51::kOrder;
    c.beta = example51::kOrder;
    c.partition = example51::partition();
    c.x0 = 0.0;
    c.f = "@example51.f";
    c.h = "@example51.h";
    c.impulse = {"@example51.h1"};
    c.phi = "@example51.phi";
    c.candidate = "@example51.candidate";
    HypothesisSettings hs;
    hs.data = example51::hypothesis();
    c.hypothesis = hs;
    c.solver.theta = example51::kCheckTheta;
    c.solver.tolerance = 1e-12;
    c.stability.mode = StabilityMode::GeneralizedBUHR;
    c.stability.psi = 0.0;
    c.stability.c_phi = 1.0;
    c.stability.constant = example51::kPublishedStabilityConstant;
    return c;
}

ProblemConfig half_order_config() {
    ProblemConfig c;
    c.name = "half_order";
    c.alpha = 0.5;
    c.beta = 0.5;
    c.partition = Partition::without_impulses(1.0);
    c.x0 = 0.0;
    c.f = "1";
    c.h = "0";
    c.reference = "tau^(1/2) / gamma(3/2)";
    HypothesisSettings hs;
    c.hypothesis = hs;
    c.solver.tolerance = 1e-12;
    return c;
}

std::vector<ProblemConfig> builtin_configs() { return {example51_config(), half_order_config()}; }

}  // namespace fracimp
