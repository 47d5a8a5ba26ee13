#include "sitcov/requirements.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <utility>

#include "json.hpp"

#include "sitcov/grid.hpp"

namespace sitcov {

std::vector<RobustnessRequirement> bind_requirements(const GridSet& grids,
                                                     std::span<const RequirementSpec> specs) {
    std::vector<PodSelector> flat;
    for (const RequirementSpec& spec : specs) {
        flat.insert(flat.end(), spec.pods.begin(), spec.pods.end());
    }
    std::vector<Pod> pods = bind_pods(grids, flat);

    std::vector<RobustnessRequirement> requirements;
    requirements.reserve(specs.size());
    std::size_t next = 0;
    for (const RequirementSpec& spec : specs) {
        RobustnessRequirement requirement;
        requirement.id = spec.id;
        requirement.trigger = spec.trigger;
        requirement.component = spec.component;
        requirement.behaviour = spec.behaviour;
        for (std::size_t i = 0; i < spec.pods.size(); ++i) {
            requirement.pods.push_back(std::move(pods[next++]));
        }
        requirements.push_back(std::move(requirement));
    }
    return requirements;
}

std::string render_requirement(const RobustnessRequirement& requirement) {
    std::string labels;
    for (const Pod& pod : requirement.pods) {
        if (!labels.empty()) labels += ", ";
        labels += pod.label;
    }
    return "**" + requirement.id + ":** When " + requirement.trigger + ", the " +
           requirement.component + " shall " + requirement.behaviour +
           " under all conditions defined in [" + labels + "].";
}

std::string Ratio::text() const {
    if (den == 0) return "0";
    const std::uint64_t g = std::gcd(num, den);
    const std::uint64_t n = g == 0 ? 0 : num / g;
    const std::uint64_t d = g == 0 ? 1 : den / g;
    if (d == 1) return std::to_string(n);
    return std::to_string(n) + "/" + std::to_string(d);
}

std::string Ratio::decimal() const {
    const double value = den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

namespace {

CoverageReport report_for(const std::set<std::uint64_t>& covered, const SituationGrid& grid) {
    CoverageReport report;
    report.type_name = grid.type_name;
    report.grid_size = grid.rows.size();
    report.covered.assign(covered.begin(), covered.end());
    for (std::uint64_t id = 1; id <= report.grid_size; ++id) {
        if (!covered.contains(id)) report.uncovered.push_back(id);
    }
    report.ratio = {static_cast<std::uint64_t>(report.covered.size()), report.grid_size};
    return report;
}

void accumulate(std::set<std::uint64_t>& covered, const Pod& pod, const SituationGrid& grid) {
    for (const std::uint64_t id : pod.row_ids) {
        if (id < 1 || id > grid.rows.size()) {
            throw RowOutOfRangeError(grid.type_name, id, grid.rows.size());
        }
        covered.insert(id);
    }
}

}  // namespace

CoverageReport coverage_report(std::span<const RobustnessRequirement> requirements,
                               const SituationGrid& grid) {
    std::set<std::uint64_t> covered;
    for (const RobustnessRequirement& requirement : requirements) {
        for (const Pod& pod : requirement.pods) {
            if (pod.type_name != grid.type_name) {
                throw TypeMismatchError(pod.type_name, grid.type_name);
            }
            accumulate(covered, pod, grid);
        }
    }
    return report_for(covered, grid);
}

ModelCoverage coverage_overview(std::span<const RobustnessRequirement> requirements,
                                const GridSet& grids) {
    for (const RobustnessRequirement& requirement : requirements) {
        for (const Pod& pod : requirement.pods) {
            if (grids.find(pod.type_name) == nullptr) {
                throw UnboundPodError(pod.label, pod.type_name);
            }
        }
    }

    ModelCoverage coverage;
    coverage.complete = true;
    for (const SituationGrid& grid : grids.grids) {
        std::set<std::uint64_t> covered;
        for (const RobustnessRequirement& requirement : requirements) {
            for (const Pod& pod : requirement.pods) {
                if (pod.type_name == grid.type_name) accumulate(covered, pod, grid);
            }
        }
        CoverageReport report = report_for(covered, grid);
        if (!report.complete()) coverage.complete = false;
        coverage.reports.push_back(std::move(report));
    }
    return coverage;
}

std::vector<LintWarning> lint(std::span<const RobustnessRequirement> requirements) {
    std::vector<LintWarning> warnings;
    for (const RobustnessRequirement& requirement : requirements) {
        const auto warn = [&](const std::string& message) {
            warnings.push_back({requirement.id, message});
        };
        if (requirement.id.empty()) warn("requirement id is empty");
        if (requirement.trigger.empty()) warn("trigger is empty");
        if (requirement.component.empty()) warn("component is empty");
        if (requirement.behaviour.empty()) warn("behaviour is empty");
        if (requirement.pods.empty()) warn("requirement references no PODs");
    }
    return warnings;
}

namespace {

/// PODs in first-appearance order, one entry per distinct label. bind_pods
/// guarantees same-label duplicates carry identical rows, so dropping repeats
/// loses nothing.
std::vector<const Pod*> appendix_pods(std::span<const RobustnessRequirement> requirements,
                                      const GridSet& grids) {
    std::vector<const Pod*> appendix;
    std::set<std::string_view> seen;
    for (const RobustnessRequirement& requirement : requirements) {
        for (const Pod& pod : requirement.pods) {
            if (grids.find(pod.type_name) == nullptr) {
                throw UnboundPodError(pod.label, pod.type_name);
            }
            if (seen.insert(pod.label).second) appendix.push_back(&pod);
        }
    }
    return appendix;
}

std::string md_cell(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string emit_markdown(std::span<const RobustnessRequirement> requirements,
                          const GridSet& grids) {
    const std::vector<const Pod*> appendix = appendix_pods(requirements, grids);

    std::string out = "# Robustness requirements\n";
    for (const RobustnessRequirement& requirement : requirements) {
        out += "\n" + render_requirement(requirement) + "\n";
    }
    out += "\n## POD appendix\n";
    for (const Pod* pod : appendix) {
        const SituationGrid& grid = *grids.find(pod->type_name);
        out += "\n### " + pod->label + " (" + pod->type_name + ")\n\n";
        out += "| ID |";
        for (const GridColumn& column : grid.columns) out += " " + md_cell(column.factor_name) + " |";
        out += "\n| --- |";
        for (std::size_t i = 0; i < grid.columns.size(); ++i) out += " --- |";
        out += "\n";
        for (const std::uint64_t id : pod->row_ids) {
            const Situation& row = grid.rows[static_cast<std::size_t>(id - 1)];
            out += "| " + std::to_string(id) + " |";
            for (const Assignment& assignment : row.assignments) {
                out += " " + md_cell(assignment.state) + " |";
            }
            out += "\n";
        }
    }
    return out;
}

std::string emit_json(std::span<const RobustnessRequirement> requirements, const GridSet& grids) {
    const std::vector<const Pod*> appendix = appendix_pods(requirements, grids);

    nlohmann::ordered_json jrequirements = nlohmann::ordered_json::array();
    for (const RobustnessRequirement& requirement : requirements) {
        nlohmann::ordered_json jreq = nlohmann::ordered_json::object();
        jreq["id"] = requirement.id;
        jreq["trigger"] = requirement.trigger;
        jreq["component"] = requirement.component;
        jreq["behaviour"] = requirement.behaviour;
        nlohmann::ordered_json labels = nlohmann::ordered_json::array();
        for (const Pod& pod : requirement.pods) labels.push_back(pod.label);
        jreq["pods"] = std::move(labels);
        jreq["rendered"] = render_requirement(requirement);
        jrequirements.push_back(std::move(jreq));
    }

    nlohmann::ordered_json jpods = nlohmann::ordered_json::array();
    for (const Pod* pod : appendix) {
        const SituationGrid& grid = *grids.find(pod->type_name);
        nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
        for (const std::uint64_t id : pod->row_ids) {
            const Situation& row = grid.rows[static_cast<std::size_t>(id - 1)];
            nlohmann::ordered_json assignments = nlohmann::ordered_json::object();
            for (const Assignment& assignment : row.assignments) {
                assignments[assignment.factor_id] = assignment.state;
            }
            nlohmann::ordered_json jrow = nlohmann::ordered_json::object();
            jrow["id"] = id;
            jrow["assignments"] = std::move(assignments);
            jrows.push_back(std::move(jrow));
        }
        nlohmann::ordered_json jpod = nlohmann::ordered_json::object();
        jpod["label"] = pod->label;
        jpod["type"] = pod->type_name;
        jpod["rows"] = std::move(jrows);
        jpods.push_back(std::move(jpod));
    }

    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["requirements"] = std::move(jrequirements);
    doc["pods"] = std::move(jpods);
    return doc.dump(2) + "\n";
}

std::string emit_csv(std::span<const RobustnessRequirement> requirements, const GridSet& grids) {
    const std::vector<const Pod*> appendix = appendix_pods(requirements, grids);

    std::string out;
    for (const Pod* pod : appendix) {
        const SituationGrid& grid = *grids.find(pod->type_name);
        if (!out.empty()) out += '\n';
        out += "ID";
        for (const GridColumn& column : grid.columns) out += "," + csv_field(column.factor_name);
        out += '\n';
        for (const std::uint64_t id : pod->row_ids) {
            const Situation& row = grid.rows[static_cast<std::size_t>(id - 1)];
            out += std::to_string(id);
            for (const Assignment& assignment : row.assignments) {
                out += "," + csv_field(assignment.state);
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace

std::string emit(std::span<const RobustnessRequirement> requirements, const GridSet& grids,
                 EmitFormat format) {
    switch (format) {
        case EmitFormat::Markdown:
            return emit_markdown(requirements, grids);
        case EmitFormat::Json:
            return emit_json(requirements, grids);
        case EmitFormat::Csv:
            return emit_csv(requirements, grids);
    }
    throw Error("unknown emit format");
}

}  // namespace sitcov
