#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fracimp {

/// Breakpoints 0 = tau_0 = sigma_0 < tau_1 <= sigma_1 <= tau_2 < ... <= sigma_m < tau_{m+1} = T.
///
/// tau_points holds tau_1..tau_{m+1} (the last entry is T); sigma_points
/// holds sigma_1..sigma_m. Differential intervals are (sigma_i, tau_{i+1}],
/// i = 0..m; impulse intervals are (tau_i, sigma_i], i = 1..m.
struct Partition {
    std::vector<double> tau_points;
    std::vector<double> sigma_points;

    std::size_t m() const noexcept { return sigma_points.size(); }
    double T() const { return tau_points.back(); }

    /// tau_i for i in 0..m+1 (tau_0 = 0).
    double tau(std::size_t i) const { return i == 0 ? 0.0 : tau_points.at(i - 1); }
    /// sigma_i for i in 0..m (sigma_0 = 0).
    double sigma(std::size_t i) const { return i == 0 ? 0.0 : sigma_points.at(i - 1); }

    /// Length of the differential interval (sigma_i, tau_{i+1}].
    double differential_length(std::size_t i) const { return tau(i + 1) - sigma(i); }
    /// Length of the impulse interval (tau_i, sigma_i], i >= 1.
    double impulse_length(std::size_t i) const { return sigma(i) - tau(i); }

    /// Partition with no impulses on (0, T].
    static Partition without_impulses(double T) { return Partition{{T}, {}}; }

    bool operator==(const Partition&) const = default;
};

struct PartitionCheck {
    bool ok = true;
    std::string violation;

    explicit operator bool() const noexcept { return ok; }
};

/// Accepts iff the full ordering chain holds; otherwise names the first
/// violated relation, e.g. "tau_1 <= sigma_1 fails".
PartitionCheck validate_partition(const Partition& p);

enum class Branch { Differential, Impulse };

const char* branch_name(Branch b) noexcept;

struct BranchTag {
    Branch branch = Branch::Differential;
    std::size_t index = 0;

    bool operator==(const BranchTag&) const = default;
};

/// Half-open interval (a, b] carrying one branch of the problem.
struct SegmentSpan {
    BranchTag tag;
    double a = 0.0;
    double b = 0.0;

    double length() const noexcept { return b - a; }
};

/// Non-empty intervals in increasing order. Zero-length impulse or
/// differential intervals (tau_i = sigma_i, sigma_i = tau_{i+1}) are omitted.
std::vector<SegmentSpan> segment_spans(const Partition& p);

/// Unique branch whose half-open interval contains tau. Throws DomainError
/// for tau <= 0 or tau > T.
BranchTag classify(const Partition& p, double tau);

}  // namespace fracimp
