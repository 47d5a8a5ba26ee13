#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sitcov/errors.hpp"

namespace sitcov {

/// Sensor output channels a noise factor can affect. The enumerator order is
/// the canonical serialization order.
enum class Channel { FR, I_RGB, P_XY, DF };

std::string_view to_string(Channel channel);
std::optional<Channel> channel_from_string(std::string_view text);

/// One discrete operational state of a factor. Exactly one state per factor
/// is the baseline (the non-degraded state).
struct StateDef {
    std::string label;
    bool baseline = false;

    bool operator==(const StateDef&) const = default;
};

/// A source of sensor degradation with discrete states. State order defines
/// the enumeration ordinal (baseline conventionally first).
struct Factor {
    std::string id;
    std::string name;
    std::vector<StateDef> states;
    std::set<Channel> channels;  // empty while the model is not yet annotated

    const StateDef* find_state(std::string_view label) const;
    /// Index of the baseline state. Valid only for factors that pass validation.
    std::size_t baseline_index() const;

    bool operator==(const Factor&) const = default;
};

/// A named group of factors. Factor order is significant: it defines grid
/// column order and enumeration nesting.
struct FactorType {
    std::string name;
    std::vector<Factor> factors;

    const Factor* find_factor(std::string_view id) const;

    bool operator==(const FactorType&) const = default;
};

enum class ConstraintKind { Requires, Excludes, Note };

std::string_view to_string(ConstraintKind kind);
std::optional<ConstraintKind> constraint_kind_from_string(std::string_view text);

/// A dependency between two factors. Semantics are defined over "active"
/// states: a factor is active iff its assigned state is not its baseline.
///   requires: active(source) implies active(target)
///   excludes: not (active(source) and active(target))
///   note:     documentation only, no enumeration effect
struct Constraint {
    ConstraintKind kind = ConstraintKind::Note;
    std::string source;
    std::string target;
    std::string description;

    bool operator==(const Constraint&) const = default;
};

/// The full declarative input: factor types, factors, states, constraints,
/// channel tags. Immutable after construction; safe to share across threads.
struct NoiseFactorModel {
    std::string name;
    std::string version;
    std::vector<FactorType> types;
    std::vector<Constraint> constraints;

    const FactorType* find_type(std::string_view type_name) const;
    const Factor* find_factor(std::string_view id) const;

    bool operator==(const NoiseFactorModel&) const = default;
};

enum class IssueCode {
    DupFactorId,
    NoBaseline,
    MultiBaseline,
    TooFewStates,
    UnknownFactorRef,
    SelfConstraint,
    DupStateLabel,
    EmptyType,
    EmptyModel,
    DupTypeName,
    EmptyStateLabel,
};

std::string_view to_string(IssueCode code);

struct ValidationIssue {
    IssueCode code;
    std::string path;     // human-readable location of the offending element
    std::string message;

    bool operator==(const ValidationIssue&) const = default;
};

/// Structural validation. Returns an empty list iff every model invariant
/// holds; otherwise one issue per violation.
std::vector<ValidationIssue> validate(const NoiseFactorModel& model);

/// True iff the named state is not the factor's baseline state.
/// Throws UnknownStateError if the label names no state of the factor.
bool active(const Factor& factor, std::string_view state_label);

/// Returns a copy retaining exactly the factors whose channel tags intersect
/// {I_RGB, P_XY}. Factor and type order are preserved, constraints that
/// reference a removed factor are dropped, empty types are removed.
/// Throws MissingChannelsError if any factor has no channel tags.
NoiseFactorModel filter_relevant(const NoiseFactorModel& model);

}  // namespace sitcov
