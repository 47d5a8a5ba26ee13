#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sitcov/model.hpp"

namespace sitcov {

struct Assignment {
    std::string factor_id;
    std::string state;

    bool operator==(const Assignment&) const = default;
};

/// One row of a coverage grid: a consistent assignment of exactly one state
/// per factor of a type, in factor declaration order.
struct Situation {
    std::vector<Assignment> assignments;

    bool operator==(const Situation&) const = default;
};

struct GridColumn {
    std::string factor_id;
    std::string factor_name;

    bool operator==(const GridColumn&) const = default;
};

/// Ordered, pruned enumeration of all constraint-consistent situations of one
/// factor type. Row IDs are implicit: 1-based position. Rows strictly increase
/// in mixed-radix key (state ordinals, rightmost factor varies fastest).
struct SituationGrid {
    std::string type_name;
    std::vector<GridColumn> columns;
    std::vector<Situation> rows;

    bool operator==(const SituationGrid&) const = default;
};

struct GridStats {
    std::string type_name;
    std::uint64_t unpruned_count = 0;  // product of state cardinalities
    std::uint64_t pruned_count = 0;
    std::uint64_t pruned_away = 0;

    bool operator==(const GridStats&) const = default;
};

/// Largest unpruned instance oracle_expand will enumerate.
inline constexpr std::uint64_t kOracleLimit = 1'000'000;

/// Expands one factor type into its pruned situation grid. Only hard
/// (requires/excludes) constraints whose source and target both belong to the
/// type prune; note constraints and cross-type constraints have no effect.
/// With jobs > 1 the unpruned index range is partitioned across threads and
/// merged in index order, so the result is identical to sequential expansion.
SituationGrid expand(const NoiseFactorModel& model, std::string_view type_name, unsigned jobs = 1);

/// Grid sizes for one type, computed without materializing rows. Constraint
/// components are counted on their sub-product; unconstrained factors
/// contribute their cardinality as a plain multiplier.
GridStats count(const NoiseFactorModel& model, std::string_view type_name);

/// Brute-force reference enumeration: materializes the full Cartesian product
/// and filters it row by row through the label-level constraint semantics.
/// Deliberately shares no enumeration machinery with expand().
/// Throws InstanceTooLargeError above kOracleLimit unpruned assignments.
SituationGrid oracle_expand(const NoiseFactorModel& model, std::string_view type_name);

/// The id-th valid row, by skip-counting over the mixed-radix space without
/// materializing the grid. row_by_id(model, t, k) == expand(model, t).rows[k-1].
Situation row_by_id(const NoiseFactorModel& model, std::string_view type_name, std::uint64_t id);

/// The id-th row of an already expanded grid.
Situation row_by_id(const SituationGrid& grid, std::uint64_t id);

/// RFC 4180 field encoding: returned verbatim unless the field contains a
/// comma, quote, or line break, in which case it is quoted with doubled quotes.
std::string csv_field(std::string_view field);

/// CSV export: header "ID,<factor name>,...", one row per situation, state
/// labels verbatim, LF line endings, RFC 4180 quoting only where needed.
std::string grid_to_csv(const SituationGrid& grid);

/// JSON export: array of {id, assignments}, 2-space indentation, LF endings.
std::string grid_to_json(const SituationGrid& grid);

}  // namespace sitcov
