#include "sitcov/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace sitcov {

std::string_view to_string(Channel channel) {
    switch (channel) {
        case Channel::FR: return "FR";
        case Channel::I_RGB: return "I_RGB";
        case Channel::P_XY: return "P_XY";
        case Channel::DF: return "DF";
    }
    return "?";
}

std::optional<Channel> channel_from_string(std::string_view text) {
    if (text == "FR") return Channel::FR;
    if (text == "I_RGB") return Channel::I_RGB;
    if (text == "P_XY") return Channel::P_XY;
    if (text == "DF") return Channel::DF;
    return std::nullopt;
}

std::string_view to_string(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::Requires: return "requires";
        case ConstraintKind::Excludes: return "excludes";
        case ConstraintKind::Note: return "note";
    }
    return "?";
}

std::optional<ConstraintKind> constraint_kind_from_string(std::string_view text) {
    if (text == "requires") return ConstraintKind::Requires;
    if (text == "excludes") return ConstraintKind::Excludes;
    if (text == "note") return ConstraintKind::Note;
    return std::nullopt;
}

const StateDef* Factor::find_state(std::string_view label) const {
    for (const auto& state : states) {
        if (state.label == label) return &state;
    }
    return nullptr;
}

std::size_t Factor::baseline_index() const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].baseline) return i;
    }
    return 0;
}

const Factor* FactorType::find_factor(std::string_view id) const {
    for (const auto& factor : factors) {
        if (factor.id == id) return &factor;
    }
    return nullptr;
}

const FactorType* NoiseFactorModel::find_type(std::string_view type_name) const {
    for (const auto& type : types) {
        if (type.name == type_name) return &type;
    }
    return nullptr;
}

const Factor* NoiseFactorModel::find_factor(std::string_view id) const {
    for (const auto& type : types) {
        if (const Factor* f = type.find_factor(id)) return f;
    }
    return nullptr;
}

std::string_view to_string(IssueCode code) {
    switch (code) {
        case IssueCode::DupFactorId: return "DUP_FACTOR_ID";
        case IssueCode::NoBaseline: return "NO_BASELINE";
        case IssueCode::MultiBaseline: return "MULTI_BASELINE";
        case IssueCode::TooFewStates: return "TOO_FEW_STATES";
        case IssueCode::UnknownFactorRef: return "UNKNOWN_FACTOR_REF";
        case IssueCode::SelfConstraint: return "SELF_CONSTRAINT";
        case IssueCode::DupStateLabel: return "DUP_STATE_LABEL";
        case IssueCode::EmptyType: return "EMPTY_TYPE";
        case IssueCode::EmptyModel: return "EMPTY_MODEL";
        case IssueCode::DupTypeName: return "DUP_TYPE_NAME";
        case IssueCode::EmptyStateLabel: return "EMPTY_STATE_LABEL";
    }
    return "?";
}

namespace {

std::string type_path(std::size_t ti, const FactorType& type) {
    return "types[" + std::to_string(ti) + "] \"" + type.name + "\"";
}

std::string factor_path(std::size_t ti, std::size_t fi, const Factor& factor) {
    return "types[" + std::to_string(ti) + "].factors[" + std::to_string(fi) + "] \"" + factor.id + "\"";
}

}  // namespace

std::vector<ValidationIssue> validate(const NoiseFactorModel& model) {
    std::vector<ValidationIssue> issues;
    auto add = [&](IssueCode code, std::string path, std::string message) {
        issues.push_back({code, std::move(path), std::move(message)});
    };

    if (model.types.empty()) {
        add(IssueCode::EmptyModel, "model", "model declares no factor types");
    }

    std::unordered_set<std::string> type_names;
    std::unordered_set<std::string> factor_ids;
    for (std::size_t ti = 0; ti < model.types.size(); ++ti) {
        const FactorType& type = model.types[ti];
        if (!type_names.insert(type.name).second) {
            add(IssueCode::DupTypeName, type_path(ti, type),
                "factor type name \"" + type.name + "\" is not unique");
        }
        if (type.factors.empty()) {
            add(IssueCode::EmptyType, type_path(ti, type), "factor type has no factors");
        }
        for (std::size_t fi = 0; fi < type.factors.size(); ++fi) {
            const Factor& factor = type.factors[fi];
            const std::string path = factor_path(ti, fi, factor);
            if (!factor_ids.insert(factor.id).second) {
                add(IssueCode::DupFactorId, path,
                    "factor id \"" + factor.id + "\" is not unique across the model");
            }
            if (factor.states.size() < 2) {
                add(IssueCode::TooFewStates, path, "factor needs at least 2 states, has " +
                                                       std::to_string(factor.states.size()));
            }
            std::size_t baselines = 0;
            std::unordered_set<std::string> labels;
            for (std::size_t si = 0; si < factor.states.size(); ++si) {
                const StateDef& state = factor.states[si];
                if (state.baseline) ++baselines;
                if (state.label.empty()) {
                    add(IssueCode::EmptyStateLabel, path + ".states[" + std::to_string(si) + "]",
                        "state label is empty");
                }
                if (!labels.insert(state.label).second) {
                    add(IssueCode::DupStateLabel, path + ".states[" + std::to_string(si) + "]",
                        "state label \"" + state.label + "\" appears more than once");
                }
            }
            if (baselines == 0) {
                add(IssueCode::NoBaseline, path, "no state is marked baseline");
            } else if (baselines > 1) {
                add(IssueCode::MultiBaseline, path,
                    std::to_string(baselines) + " states are marked baseline");
            }
        }
    }

    for (std::size_t ci = 0; ci < model.constraints.size(); ++ci) {
        const Constraint& constraint = model.constraints[ci];
        const std::string path = "constraints[" + std::to_string(ci) + "]";
        if (constraint.source == constraint.target) {
            add(IssueCode::SelfConstraint, path,
                "constraint source and target are both \"" + constraint.source + "\"");
        }
        for (const std::string* endpoint : {&constraint.source, &constraint.target}) {
            if (!factor_ids.contains(*endpoint)) {
                add(IssueCode::UnknownFactorRef, path,
                    "constraint references unknown factor \"" + *endpoint + "\"");
            }
        }
    }

    return issues;
}

bool active(const Factor& factor, std::string_view state_label) {
    const StateDef* state = factor.find_state(state_label);
    if (state == nullptr) throw UnknownStateError(factor.id, state_label);
    return !state->baseline;
}

NoiseFactorModel filter_relevant(const NoiseFactorModel& model) {
    for (const auto& type : model.types) {
        for (const auto& factor : type.factors) {
            if (factor.channels.empty()) throw MissingChannelsError(factor.id);
        }
    }

    NoiseFactorModel out;
    out.name = model.name;
    out.version = model.version;

    std::unordered_set<std::string> retained;
    for (const auto& type : model.types) {
        FactorType kept;
        kept.name = type.name;
        for (const auto& factor : type.factors) {
            if (factor.channels.contains(Channel::I_RGB) || factor.channels.contains(Channel::P_XY)) {
                retained.insert(factor.id);
                kept.factors.push_back(factor);
            }
        }
        if (!kept.factors.empty()) out.types.push_back(std::move(kept));
    }

    for (const auto& constraint : model.constraints) {
        if (retained.contains(constraint.source) && retained.contains(constraint.target)) {
            out.constraints.push_back(constraint);
        }
    }
    return out;
}

}  // namespace sitcov
