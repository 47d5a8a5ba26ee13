#include "sitcov/pods.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

namespace sitcov {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t result = 0;
    if (__builtin_mul_overflow(a, b, &result)) throw Error("global index space overflows 64 bits");
    return result;
}

}  // namespace

GlobalIndexSpace make_index_space(const NoiseFactorModel& model) {
    GlobalIndexSpace space;
    space.total = 1;
    for (const FactorType& type : model.types) {
        const GridStats stats = count(model, type.name);
        space.type_names.push_back(type.name);
        space.radices.push_back(stats.pruned_count);
        space.total = checked_mul(space.total, stats.pruned_count);
    }
    return space;
}

std::vector<std::uint64_t> global_to_tuple(const GlobalIndexSpace& space, std::uint64_t gid) {
    if (gid < 1 || gid > space.total) throw OutOfRangeError(gid, space.total);
    std::vector<std::uint64_t> tuple(space.radices.size(), 0);
    std::uint64_t rest = gid - 1;
    for (std::size_t i = space.radices.size(); i-- > 0;) {
        tuple[i] = rest % space.radices[i] + 1;
        rest /= space.radices[i];
    }
    return tuple;
}

std::uint64_t tuple_to_global(const GlobalIndexSpace& space, std::span<const std::uint64_t> tuple) {
    if (tuple.size() != space.radices.size()) {
        throw Error("tuple has " + std::to_string(tuple.size()) + " components, expected " +
                    std::to_string(space.radices.size()));
    }
    std::uint64_t gid = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] < 1 || tuple[i] > space.radices[i]) {
            throw OutOfRangeError(tuple[i], space.radices[i]);
        }
        gid = gid * space.radices[i] + (tuple[i] - 1);
    }
    return gid + 1;
}

const SituationGrid* GridSet::find(std::string_view type_name) const {
    for (const SituationGrid& grid : grids) {
        if (grid.type_name == type_name) return &grid;
    }
    return nullptr;
}

GridSet expand_all(const NoiseFactorModel& model, unsigned jobs) {
    GridSet set;
    set.grids.reserve(model.types.size());
    for (const FactorType& type : model.types) {
        set.grids.push_back(expand(model, type.name, jobs));
    }
    return set;
}

std::vector<Pod> bind_pods(const GridSet& grids, std::span<const PodSelector> selectors) {
    std::vector<Pod> pods;
    pods.reserve(selectors.size());
    std::unordered_map<std::string, std::size_t> by_label;
    for (std::size_t i = 0; i < selectors.size(); ++i) {
        const PodSelector& selector = selectors[i];
        const SituationGrid* grid = grids.find(selector.type_name);
        if (grid == nullptr) throw UnknownTypeError(selector.type_name);
        const std::uint64_t max = grid->rows.size();

        Pod pod;
        pod.type_name = selector.type_name;
        pod.label = selector.label.empty() ? "PODs#" + std::to_string(i + 1) : selector.label;
        switch (selector.kind) {
            case SelectorKind::All:
                pod.row_ids.resize(max);
                std::iota(pod.row_ids.begin(), pod.row_ids.end(), 1);
                break;
            case SelectorKind::Range: {
                if (selector.lo > selector.hi) throw Error("range lower bound exceeds upper bound");
                for (const std::uint64_t bound : {selector.lo, selector.hi}) {
                    if (bound < 1 || bound > max) {
                        throw RowOutOfRangeError(selector.type_name, bound, max);
                    }
                }
                pod.row_ids.reserve(selector.hi - selector.lo + 1);
                for (std::uint64_t id = selector.lo; id <= selector.hi; ++id) {
                    pod.row_ids.push_back(id);
                }
                break;
            }
            case SelectorKind::List: {
                std::set<std::uint64_t> unique;
                for (const std::uint64_t id : selector.rows) {
                    if (id < 1 || id > max) throw RowOutOfRangeError(selector.type_name, id, max);
                    unique.insert(id);
                }
                pod.row_ids.assign(unique.begin(), unique.end());
                break;
            }
        }
        if (pod.row_ids.empty()) throw Error("POD \"" + pod.label + "\" selects no rows");

        const auto [it, inserted] = by_label.emplace(pod.label, pods.size());
        if (!inserted) {
            const Pod& existing = pods[it->second];
            if (existing.type_name != pod.type_name || existing.row_ids != pod.row_ids) {
                throw Error("POD label \"" + pod.label + "\" bound to two different row sets");
            }
        }
        pods.push_back(std::move(pod));
    }
    return pods;
}

bool tuple_satisfies(const NoiseFactorModel& model, const GlobalIndexSpace& space,
                     std::span<const std::uint64_t> tuple) {
    if (tuple.size() != space.type_names.size()) {
        throw Error("tuple has " + std::to_string(tuple.size()) + " components, expected " +
                    std::to_string(space.type_names.size()));
    }
    std::unordered_map<std::string, std::string> assigned;  // factor id -> state label
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        const Situation row = row_by_id(model, space.type_names[i], tuple[i]);
        for (const Assignment& assignment : row.assignments) {
            assigned.emplace(assignment.factor_id, assignment.state);
        }
    }
    for (const Constraint& constraint : model.constraints) {
        if (constraint.kind == ConstraintKind::Note) continue;
        const Factor* source = model.find_factor(constraint.source);
        const Factor* target = model.find_factor(constraint.target);
        const auto source_state = assigned.find(constraint.source);
        const auto target_state = assigned.find(constraint.target);
        if (source == nullptr || target == nullptr || source_state == assigned.end() ||
            target_state == assigned.end()) {
            continue;  // references something outside the composed types
        }
        const bool source_active = active(*source, source_state->second);
        const bool target_active = active(*target, target_state->second);
        if (constraint.kind == ConstraintKind::Requires && source_active && !target_active) {
            return false;
        }
        if (constraint.kind == ConstraintKind::Excludes && source_active && target_active) {
            return false;
        }
    }
    return true;
}

namespace {

/// Uniform draw from [0, bound) using rejection on raw engine outputs.
/// Unlike std::uniform_int_distribution this is bit-identical everywhere.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % bound;
    }
}

}  // namespace

std::vector<std::uint64_t> sample_ids(std::uint64_t total, std::uint64_t n, std::uint64_t seed) {
    if (n > total) throw NTooLargeError(n, total);
    std::mt19937_64 rng(seed);
    std::set<std::uint64_t> chosen;
    // Floyd's subset sampling: each j in (total-n, total] contributes one id.
    for (std::uint64_t j = total - n + 1; j <= total; ++j) {
        const std::uint64_t candidate = 1 + bounded_draw(rng, j);
        if (!chosen.insert(candidate).second) chosen.insert(j);
    }
    return {chosen.begin(), chosen.end()};
}

std::vector<std::uint64_t> sample(const SituationGrid& grid, std::uint64_t n, std::uint64_t seed) {
    return sample_ids(grid.rows.size(), n, seed);
}

std::vector<std::uint64_t> sample(const GlobalIndexSpace& space, std::uint64_t n, std::uint64_t seed) {
    return sample_ids(space.total, n, seed);
}

}  // namespace sitcov
