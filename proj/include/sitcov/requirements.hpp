#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sitcov/pods.hpp"

namespace sitcov {

/// A performance requirement qualified by the pruned operational design
/// domains (PODs) under which it must hold.
struct RobustnessRequirement {
    std::string id;
    std::string trigger;
    std::string component;
    std::string behaviour;
    std::vector<Pod> pods;

    bool operator==(const RobustnessRequirement&) const = default;
};

/// Binds every selector of every spec against the expanded grids and regroups
/// the resulting PODs per requirement. Auto-generated labels number the
/// selectors across the whole document: the first selector of the first
/// requirement becomes "PODs#1".
std::vector<RobustnessRequirement> bind_requirements(const GridSet& grids,
                                                     std::span<const RequirementSpec> specs);

/// "**<id>:** When <trigger>, the <component> shall <behaviour> under all
/// conditions defined in [<pod labels, comma-separated>]."
std::string render_requirement(const RobustnessRequirement& requirement);

/// Exact coverage fraction. text() renders the gcd-reduced fraction ("107/108",
/// "1" for complete, "0" for empty); decimal() renders six fractional digits.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    std::string text() const;
    std::string decimal() const;

    bool operator==(const Ratio&) const = default;
};

/// Which rows of one grid are claimed by at least one POD.
struct CoverageReport {
    std::string type_name;
    std::uint64_t grid_size = 0;
    std::vector<std::uint64_t> covered;    // ascending
    std::vector<std::uint64_t> uncovered;  // ascending complement
    Ratio ratio;

    bool complete() const { return ratio.num == ratio.den; }

    bool operator==(const CoverageReport&) const = default;
};

/// Coverage of one grid by the union of all POD rows across the requirements.
/// Every POD must reference the grid's type; a POD bound to a different type
/// raises TypeMismatchError.
CoverageReport coverage_report(std::span<const RobustnessRequirement> requirements,
                               const SituationGrid& grid);

/// Per-grid coverage over a whole grid set. Each POD contributes to the grid
/// of its own type; a POD whose type has no grid raises UnboundPodError.
/// complete is true iff every grid is fully covered.
struct ModelCoverage {
    std::vector<CoverageReport> reports;  // grid-set order
    bool complete = false;
};

ModelCoverage coverage_overview(std::span<const RobustnessRequirement> requirements,
                                const GridSet& grids);

/// Editorial checks that are not hard errors: empty text slots make a
/// requirement unreadable but still renderable.
struct LintWarning {
    std::string requirement_id;
    std::string message;

    bool operator==(const LintWarning&) const = default;
};

std::vector<LintWarning> lint(std::span<const RobustnessRequirement> requirements);

enum class EmitFormat { Markdown, Json, Csv };

/// Renders the requirements document together with a POD appendix resolving
/// every label to its rows. Byte-deterministic for equal inputs. Every POD's
/// type must have a grid in the set (UnboundPodError otherwise).
std::string emit(std::span<const RobustnessRequirement> requirements, const GridSet& grids,
                 EmitFormat format);

}  // namespace sitcov
