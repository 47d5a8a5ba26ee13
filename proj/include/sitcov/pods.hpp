#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sitcov/grid.hpp"
#include "sitcov/model.hpp"

namespace sitcov {

/// Mixed-radix index over the per-type pruned grids, in model type order.
/// Gives every composite cross-type situation a stable 1-based identity
/// without materializing the product.
struct GlobalIndexSpace {
    std::vector<std::string> type_names;
    std::vector<std::uint64_t> radices;  // per-type pruned counts
    std::uint64_t total = 0;

    bool operator==(const GlobalIndexSpace&) const = default;
};

GlobalIndexSpace make_index_space(const NoiseFactorModel& model);

/// Mixed-radix decomposition of a global id, last type varies fastest.
/// All components are 1-based. Inverse of tuple_to_global.
std::vector<std::uint64_t> global_to_tuple(const GlobalIndexSpace& space, std::uint64_t gid);

/// gid = 1 + sum over i of (tuple[i] - 1) * product of radices after i.
std::uint64_t tuple_to_global(const GlobalIndexSpace& space, std::span<const std::uint64_t> tuple);

/// A bounded operational-context subset: a named set of one type's grid rows.
struct Pod {
    std::string label;
    std::string type_name;
    std::vector<std::uint64_t> row_ids;  // sorted, unique, non-empty

    bool operator==(const Pod&) const = default;
};

/// Symbolic row selection from a requirements document, resolved against a
/// grid by bind_pods.
enum class SelectorKind { All, Range, List };

struct PodSelector {
    std::string type_name;
    std::string label;  // empty: bind assigns "PODs#<ordinal>" by document position
    SelectorKind kind = SelectorKind::All;
    std::uint64_t lo = 0;  // Range only
    std::uint64_t hi = 0;  // Range only
    std::vector<std::uint64_t> rows;  // List only, verbatim document order

    bool operator==(const PodSelector&) const = default;
};

/// One parsed entry of a requirements document.
struct RequirementSpec {
    std::string id;
    std::string trigger;
    std::string component;
    std::string behaviour;
    std::vector<PodSelector> pods;

    bool operator==(const RequirementSpec&) const = default;
};

/// Expanded grids keyed by factor type name.
struct GridSet {
    std::vector<SituationGrid> grids;

    const SituationGrid* find(std::string_view type_name) const;
};

GridSet expand_all(const NoiseFactorModel& model, unsigned jobs = 1);

/// Resolves selectors against expanded grids. "all" becomes [1..n], ranges
/// the closed interval, explicit lists are deduplicated and sorted. Selectors
/// without a label get "PODs#<ordinal>" from their 1-based list position.
std::vector<Pod> bind_pods(const GridSet& grids, std::span<const PodSelector> selectors);

/// Evaluates every hard constraint of the model over the combined situation
/// named by one row per type. Same-type constraints are already guaranteed by
/// grid pruning, so only cross-type hard constraints can fail here. They never
/// change the index space itself: radices and total stay the plain per-type
/// product, invalid combinations are merely flagged.
bool tuple_satisfies(const NoiseFactorModel& model, const GlobalIndexSpace& space,
                     std::span<const std::uint64_t> tuple);

/// n ids drawn uniformly without replacement from [1, total], deterministic
/// for equal (total, n, seed) on every platform; result in ascending order.
/// The draw procedure is fixed: std::mt19937_64 seeded with `seed`, Floyd's
/// subset sampling, bounded values by rejection on the raw 64-bit outputs.
std::vector<std::uint64_t> sample_ids(std::uint64_t total, std::uint64_t n, std::uint64_t seed);

std::vector<std::uint64_t> sample(const SituationGrid& grid, std::uint64_t n, std::uint64_t seed);
std::vector<std::uint64_t> sample(const GlobalIndexSpace& space, std::uint64_t n, std::uint64_t seed);

}  // namespace sitcov
