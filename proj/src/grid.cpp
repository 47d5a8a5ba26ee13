#include "sitcov/grid.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace sitcov {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t result = 0;
    if (__builtin_mul_overflow(a, b, &result)) throw Error("state space size overflows 64 bits");
    return result;
}

struct HardConstraint {
    std::size_t source;
    std::size_t target;
    bool is_excludes;
};

/// Pre-resolved view of one factor type: cardinalities, baseline ordinals and
/// the hard constraints whose endpoints both live in the type.
struct TypeView {
    const FactorType* type = nullptr;
    std::vector<std::size_t> cards;
    std::vector<std::size_t> baseline;
    std::vector<HardConstraint> hard;
    std::uint64_t unpruned = 1;
};

TypeView make_view(const NoiseFactorModel& model, std::string_view type_name) {
    const FactorType* type = model.find_type(type_name);
    if (type == nullptr) throw UnknownTypeError(type_name);

    TypeView view;
    view.type = type;
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < type->factors.size(); ++i) {
        const Factor& factor = type->factors[i];
        index.emplace(factor.id, i);
        view.cards.push_back(factor.states.size());
        view.baseline.push_back(factor.baseline_index());
        view.unpruned = checked_mul(view.unpruned, factor.states.size());
    }
    for (const Constraint& constraint : model.constraints) {
        if (constraint.kind == ConstraintKind::Note) continue;
        const auto source = index.find(constraint.source);
        const auto target = index.find(constraint.target);
        if (source == index.end() || target == index.end()) continue;  // cross-type
        view.hard.push_back(
            {source->second, target->second, constraint.kind == ConstraintKind::Excludes});
    }
    return view;
}

bool ordinals_valid(const TypeView& view, const std::vector<std::size_t>& ordinals) {
    for (const HardConstraint& c : view.hard) {
        const bool source_active = ordinals[c.source] != view.baseline[c.source];
        const bool target_active = ordinals[c.target] != view.baseline[c.target];
        if (c.is_excludes ? (source_active && target_active) : (source_active && !target_active)) {
            return false;
        }
    }
    return true;
}

void decode_index(const std::vector<std::size_t>& cards, std::uint64_t index,
                  std::vector<std::size_t>& out) {
    out.assign(cards.size(), 0);
    for (std::size_t i = cards.size(); i-- > 0;) {
        out[i] = static_cast<std::size_t>(index % cards[i]);
        index /= cards[i];
    }
}

/// Odometer step, rightmost digit fastest. Returns false on wrap-around.
bool increment(const std::vector<std::size_t>& cards, std::vector<std::size_t>& ordinals) {
    for (std::size_t i = cards.size(); i-- > 0;) {
        if (++ordinals[i] < cards[i]) return true;
        ordinals[i] = 0;
    }
    return false;
}

Situation to_situation(const TypeView& view, const std::vector<std::size_t>& ordinals) {
    Situation situation;
    situation.assignments.reserve(ordinals.size());
    for (std::size_t i = 0; i < ordinals.size(); ++i) {
        const Factor& factor = view.type->factors[i];
        situation.assignments.push_back({factor.id, factor.states[ordinals[i]].label});
    }
    return situation;
}

std::vector<GridColumn> columns_of(const FactorType& type) {
    std::vector<GridColumn> columns;
    columns.reserve(type.factors.size());
    for (const Factor& factor : type.factors) columns.push_back({factor.id, factor.name});
    return columns;
}

/// Count of valid assignments over a subset of the type's factors, where
/// `constraints` is reindexed into subset positions.
std::uint64_t count_valid_subspace(const std::vector<std::size_t>& cards,
                                   const std::vector<std::size_t>& baseline,
                                   const std::vector<HardConstraint>& constraints) {
    std::uint64_t total = 1;
    for (std::size_t card : cards) total = checked_mul(total, card);

    std::uint64_t valid = 0;
    std::vector<std::size_t> ordinals(cards.size(), 0);
    for (std::uint64_t i = 0; i < total; ++i) {
        bool ok = true;
        for (const HardConstraint& c : constraints) {
            const bool source_active = ordinals[c.source] != baseline[c.source];
            const bool target_active = ordinals[c.target] != baseline[c.target];
            if (c.is_excludes ? (source_active && target_active)
                              : (source_active && !target_active)) {
                ok = false;
                break;
            }
        }
        if (ok) ++valid;
        increment(cards, ordinals);
    }
    return valid;
}

}  // namespace

SituationGrid expand(const NoiseFactorModel& model, std::string_view type_name, unsigned jobs) {
    const TypeView view = make_view(model, type_name);

    SituationGrid grid;
    grid.type_name = std::string(type_name);
    grid.columns = columns_of(*view.type);

    if (jobs <= 1 || view.unpruned < 2048) {
        std::vector<std::size_t> ordinals(view.cards.size(), 0);
        for (std::uint64_t i = 0; i < view.unpruned; ++i) {
            if (ordinals_valid(view, ordinals)) grid.rows.push_back(to_situation(view, ordinals));
            increment(view.cards, ordinals);
        }
        return grid;
    }

    const auto workers = static_cast<unsigned>(
        std::min<std::uint64_t>(jobs, view.unpruned));
    const std::uint64_t chunk = (view.unpruned + workers - 1) / workers;
    std::vector<std::vector<Situation>> parts(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&view, &parts, chunk, w] {
            const std::uint64_t begin = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t end = std::min(view.unpruned, begin + chunk);
            if (begin >= end) return;
            std::vector<std::size_t> ordinals;
            decode_index(view.cards, begin, ordinals);
            for (std::uint64_t i = begin; i < end; ++i) {
                if (ordinals_valid(view, ordinals)) parts[w].push_back(to_situation(view, ordinals));
                increment(view.cards, ordinals);
            }
        });
    }
    for (std::thread& thread : threads) thread.join();
    for (std::vector<Situation>& part : parts) {
        grid.rows.insert(grid.rows.end(), std::make_move_iterator(part.begin()),
                         std::make_move_iterator(part.end()));
    }
    return grid;
}

GridStats count(const NoiseFactorModel& model, std::string_view type_name) {
    const TypeView view = make_view(model, type_name);

    GridStats stats;
    stats.type_name = std::string(type_name);
    stats.unpruned_count = view.unpruned;

    const std::size_t n = view.cards.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<bool> constrained(n, false);
    for (const HardConstraint& c : view.hard) {
        parent[find(c.source)] = find(c.target);
        constrained[c.source] = constrained[c.target] = true;
    }

    std::uint64_t pruned = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!constrained[i]) pruned = checked_mul(pruned, view.cards[i]);
    }

    std::unordered_map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < n; ++i) {
        if (constrained[i]) components[find(i)].push_back(i);
    }
    for (const auto& [root, members] : components) {
        std::unordered_map<std::size_t, std::size_t> position;
        std::vector<std::size_t> cards;
        std::vector<std::size_t> baseline;
        for (std::size_t k = 0; k < members.size(); ++k) {
            position.emplace(members[k], k);
            cards.push_back(view.cards[members[k]]);
            baseline.push_back(view.baseline[members[k]]);
        }
        std::vector<HardConstraint> local;
        for (const HardConstraint& c : view.hard) {
            if (position.contains(c.source) && position.contains(c.target)) {
                local.push_back({position.at(c.source), position.at(c.target), c.is_excludes});
            }
        }
        pruned = checked_mul(pruned, count_valid_subspace(cards, baseline, local));
    }

    stats.pruned_count = pruned;
    stats.pruned_away = stats.unpruned_count - stats.pruned_count;
    return stats;
}

SituationGrid oracle_expand(const NoiseFactorModel& model, std::string_view type_name) {
    const FactorType* type = model.find_type(type_name);
    if (type == nullptr) throw UnknownTypeError(type_name);

    std::uint64_t unpruned = 1;
    for (const Factor& factor : type->factors) unpruned = checked_mul(unpruned, factor.states.size());
    if (unpruned > kOracleLimit) throw InstanceTooLargeError(unpruned, kOracleLimit);

    // Full product, built factor by factor so the last factor varies fastest.
    std::vector<std::vector<std::string_view>> product(1);
    for (const Factor& factor : type->factors) {
        std::vector<std::vector<std::string_view>> next;
        next.reserve(product.size() * factor.states.size());
        for (const auto& prefix : product) {
            for (const StateDef& state : factor.states) {
                std::vector<std::string_view> row = prefix;
                row.push_back(state.label);
                next.push_back(std::move(row));
            }
        }
        product = std::move(next);
    }

    auto label_for = [type](const std::vector<std::string_view>& labels,
                            std::string_view factor_id) -> std::string_view {
        for (std::size_t i = 0; i < type->factors.size(); ++i) {
            if (type->factors[i].id == factor_id) return labels[i];
        }
        return {};
    };

    SituationGrid grid;
    grid.type_name = std::string(type_name);
    grid.columns = columns_of(*type);
    for (const auto& labels : product) {
        bool ok = true;
        for (const Constraint& constraint : model.constraints) {
            if (constraint.kind == ConstraintKind::Note) continue;
            const Factor* source = type->find_factor(constraint.source);
            const Factor* target = type->find_factor(constraint.target);
            if (source == nullptr || target == nullptr) continue;  // cross-type
            const bool source_active = active(*source, label_for(labels, constraint.source));
            const bool target_active = active(*target, label_for(labels, constraint.target));
            const bool violated = constraint.kind == ConstraintKind::Excludes
                                      ? (source_active && target_active)
                                      : (source_active && !target_active);
            if (violated) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Situation situation;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            situation.assignments.push_back({type->factors[i].id, std::string(labels[i])});
        }
        grid.rows.push_back(std::move(situation));
    }
    return grid;
}

Situation row_by_id(const NoiseFactorModel& model, std::string_view type_name, std::uint64_t id) {
    const TypeView view = make_view(model, type_name);
    const GridStats stats = count(model, type_name);
    if (id < 1 || id > stats.pruned_count) throw OutOfRangeError(id, stats.pruned_count);

    std::vector<std::size_t> ordinals(view.cards.size(), 0);
    std::uint64_t remaining = id;
    for (std::uint64_t i = 0; i < view.unpruned; ++i) {
        if (ordinals_valid(view, ordinals) && --remaining == 0) return to_situation(view, ordinals);
        increment(view.cards, ordinals);
    }
    throw OutOfRangeError(id, stats.pruned_count);
}

Situation row_by_id(const SituationGrid& grid, std::uint64_t id) {
    if (id < 1 || id > grid.rows.size()) throw OutOfRangeError(id, grid.rows.size());
    return grid.rows[static_cast<std::size_t>(id - 1)];
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string quoted;
    quoted.reserve(field.size() + 2);
    quoted += '"';
    for (const char c : field) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

std::string grid_to_csv(const SituationGrid& grid) {
    std::string out = "ID";
    for (const GridColumn& column : grid.columns) {
        out += ',';
        out += csv_field(column.factor_name);
    }
    out += '\n';
    for (std::size_t i = 0; i < grid.rows.size(); ++i) {
        out += std::to_string(i + 1);
        for (const Assignment& assignment : grid.rows[i].assignments) {
            out += ',';
            out += csv_field(assignment.state);
        }
        out += '\n';
    }
    return out;
}

std::string grid_to_json(const SituationGrid& grid) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < grid.rows.size(); ++i) {
        nlohmann::ordered_json assignments = nlohmann::ordered_json::object();
        for (const Assignment& assignment : grid.rows[i].assignments) {
            assignments[assignment.factor_id] = assignment.state;
        }
        nlohmann::ordered_json row = nlohmann::ordered_json::object();
        row["id"] = i + 1;
        row["assignments"] = std::move(assignments);
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

}  // namespace sitcov
