#include "fracimp/partition.hpp"

#include <cmath>
#include <string>

#include "fracimp/errors.hpp"

namespace fracimp {

namespace {

std::string idx(const char* name, std::size_t i) { return std::string(name) + "_" + std::to_string(i); }

}  // namespace

PartitionCheck validate_partition(const Partition& p) {
    const std::size_t m = p.m();
    if (p.tau_points.size() != m + 1) {
        return {false, "expected " + std::to_string(m + 1) + " tau points (tau_1..tau_{m+1}), got " +
                           std::to_string(p.tau_points.size())};
    }
    for (double t : p.tau_points) {
        if (!std::isfinite(t)) return {false, "tau points must be finite"};
    }
    for (double s : p.sigma_points) {
        if (!std::isfinite(s)) return {false, "sigma points must be finite"};
    }
    if (!(p.tau(1) > 0.0)) {
        return {false, "0 < tau_1 fails"};
    }
    for (std::size_t i = 1; i <= m; ++i) {
        if (!(p.tau(i) <= p.sigma(i))) {
            return {false, idx("tau", i) + " <= " + idx("sigma", i) + " fails"};
        }
        const bool last = (i == m);
        if (last) {
            if (!(p.sigma(i) < p.tau(i + 1))) {
                return {false, idx("sigma", i) + " < " + idx("tau", i + 1) + " fails"};
            }
        } else {
            if (!(p.sigma(i) <= p.tau(i + 1))) {
                return {false, idx("sigma", i) + " <= " + idx("tau", i + 1) + " fails"};
            }
            if (!(p.tau(i) < p.tau(i + 1))) {
                return {false, idx("tau", i) + " < " + idx("tau", i + 1) + " fails"};
            }
        }
    }
    return {};
}

const char* branch_name(Branch b) noexcept {
    return b == Branch::Differential ? "differential" : "impulse";
}

std::vector<SegmentSpan> segment_spans(const Partition& p) {
    std::vector<SegmentSpan> out;
    const std::size_t m = p.m();
    for (std::size_t i = 0; i <= m; ++i) {
        if (i >= 1 && p.impulse_length(i) > 0.0) {
            out.push_back({{Branch::Impulse, i}, p.tau(i), p.sigma(i)});
        }
        if (p.differential_length(i) > 0.0) {
            out.push_back({{Branch::Differential, i}, p.sigma(i), p.tau(i + 1)});
        }
    }
    return out;
}

BranchTag classify(const Partition& p, double tau) {
    if (!(tau > 0.0) || !(tau <= p.T())) {
        throw DomainError("classify: tau = " + std::to_string(tau) + " lies outside (0, T]");
    }
    for (const auto& span : segment_spans(p)) {
        if (tau > span.a && tau <= span.b) {
            return span.tag;
        }
    }
    throw DomainError("classify: partition does not cover tau = " + std::to_string(tau));
}

}  // namespace fracimp
