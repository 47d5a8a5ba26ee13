#include "sitcov/modelio.hpp"

#include <initializer_list>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace sitcov {

namespace {

using Json = nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_col(std::string_view bytes, std::size_t byte_pos) {
    std::size_t pos = byte_pos == 0 ? 0 : byte_pos - 1;
    if (pos > bytes.size()) pos = bytes.size();
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < pos; ++i) {
        if (bytes[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

Json parse_json(std::string_view bytes) {
    try {
        return Json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_col(bytes, e.byte);
        throw SyntaxError(line, column, e.what());
    }
}

const Json& require_object(const Json& value, const std::string& path) {
    if (!value.is_object()) throw SchemaError(path, "expected an object");
    return value;
}

const Json& require_array(const Json& value, const std::string& path) {
    if (!value.is_array()) throw SchemaError(path, "expected an array");
    return value;
}

void check_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                const std::string& path) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const std::string_view name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) throw SchemaError(path, "unknown key \"" + key + "\"");
    }
}

const Json& require_key(const Json& object, const char* key, const std::string& path) {
    const auto it = object.find(key);
    if (it == object.end()) throw SchemaError(path, std::string("missing key \"") + key + "\"");
    return *it;
}

std::string get_string(const Json& object, const char* key, const std::string& path) {
    const Json& value = require_key(object, key, path);
    if (!value.is_string()) throw SchemaError(path + "." + key, "expected a string");
    return value.get<std::string>();
}

std::uint64_t positive_int(const Json& value, const std::string& path) {
    if (!value.is_number_integer() || value.is_number_float()) {
        throw SchemaError(path, "expected a positive integer");
    }
    if (value.is_number_unsigned()) {
        const auto v = value.get<std::uint64_t>();
        if (v >= 1) return v;
    }
    throw SchemaError(path, "expected a positive integer");
}

std::string element_path(const std::string& base, const char* key, std::size_t index) {
    return base + "." + key + "[" + std::to_string(index) + "]";
}

}  // namespace

NoiseFactorModel parse_model(std::string_view bytes) {
    const Json doc = parse_json(bytes);
    require_object(doc, "$");
    check_keys(doc, {"model_name", "version", "types", "constraints"}, "$");

    NoiseFactorModel model;
    model.name = get_string(doc, "model_name", "$");
    model.version = get_string(doc, "version", "$");

    const Json& types = require_array(require_key(doc, "types", "$"), "$.types");
    for (std::size_t ti = 0; ti < types.size(); ++ti) {
        const std::string tpath = "$.types[" + std::to_string(ti) + "]";
        const Json& jtype = require_object(types[ti], tpath);
        check_keys(jtype, {"name", "factors"}, tpath);

        FactorType type;
        type.name = get_string(jtype, "name", tpath);
        const Json& factors = require_array(require_key(jtype, "factors", tpath), tpath + ".factors");
        for (std::size_t fi = 0; fi < factors.size(); ++fi) {
            const std::string fpath = element_path(tpath, "factors", fi);
            const Json& jfactor = require_object(factors[fi], fpath);
            check_keys(jfactor, {"id", "name", "states", "channels"}, fpath);

            Factor factor;
            factor.id = get_string(jfactor, "id", fpath);
            factor.name = get_string(jfactor, "name", fpath);
            const Json& states = require_array(require_key(jfactor, "states", fpath), fpath + ".states");
            for (std::size_t si = 0; si < states.size(); ++si) {
                const std::string spath = element_path(fpath, "states", si);
                const Json& jstate = require_object(states[si], spath);
                check_keys(jstate, {"label", "baseline"}, spath);

                StateDef state;
                state.label = get_string(jstate, "label", spath);
                if (const auto it = jstate.find("baseline"); it != jstate.end()) {
                    if (!it->is_boolean()) throw SchemaError(spath + ".baseline", "expected a boolean");
                    state.baseline = it->get<bool>();
                }
                factor.states.push_back(std::move(state));
            }
            if (const auto it = jfactor.find("channels"); it != jfactor.end()) {
                const Json& channels = require_array(*it, fpath + ".channels");
                for (std::size_t ci = 0; ci < channels.size(); ++ci) {
                    const std::string cpath = element_path(fpath, "channels", ci);
                    if (!channels[ci].is_string()) throw SchemaError(cpath, "expected a string");
                    const auto text = channels[ci].get<std::string>();
                    const auto channel = channel_from_string(text);
                    if (!channel) throw SchemaError(cpath, "unknown channel \"" + text + "\"");
                    if (!factor.channels.insert(*channel).second) {
                        throw SchemaError(cpath, "duplicate channel \"" + text + "\"");
                    }
                }
            }
            type.factors.push_back(std::move(factor));
        }
        model.types.push_back(std::move(type));
    }

    if (const auto it = doc.find("constraints"); it != doc.end()) {
        const Json& constraints = require_array(*it, "$.constraints");
        for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
            const std::string cpath = "$.constraints[" + std::to_string(ci) + "]";
            const Json& jconstraint = require_object(constraints[ci], cpath);
            check_keys(jconstraint, {"kind", "source", "target", "description"}, cpath);

            Constraint constraint;
            const std::string kind = get_string(jconstraint, "kind", cpath);
            const auto parsed = constraint_kind_from_string(kind);
            if (!parsed) throw SchemaError(cpath + ".kind", "unknown constraint kind \"" + kind + "\"");
            constraint.kind = *parsed;
            constraint.source = get_string(jconstraint, "source", cpath);
            constraint.target = get_string(jconstraint, "target", cpath);
            if (const auto dit = jconstraint.find("description"); dit != jconstraint.end()) {
                if (!dit->is_string()) throw SchemaError(cpath + ".description", "expected a string");
                constraint.description = dit->get<std::string>();
            }
            model.constraints.push_back(std::move(constraint));
        }
    }

    auto issues = validate(model);
    if (!issues.empty()) throw ValidationFailedError(std::move(issues));
    return model;
}

std::string serialize_model(const NoiseFactorModel& model) {
    Json doc = Json::object();
    doc["model_name"] = model.name;
    doc["version"] = model.version;

    Json types = Json::array();
    for (const FactorType& type : model.types) {
        Json jtype = Json::object();
        jtype["name"] = type.name;
        Json factors = Json::array();
        for (const Factor& factor : type.factors) {
            Json jfactor = Json::object();
            jfactor["id"] = factor.id;
            jfactor["name"] = factor.name;
            Json states = Json::array();
            for (const StateDef& state : factor.states) {
                Json jstate = Json::object();
                jstate["label"] = state.label;
                jstate["baseline"] = state.baseline;
                states.push_back(std::move(jstate));
            }
            jfactor["states"] = std::move(states);
            if (!factor.channels.empty()) {
                Json channels = Json::array();
                for (const Channel channel : factor.channels) {
                    channels.push_back(std::string(to_string(channel)));
                }
                jfactor["channels"] = std::move(channels);
            }
            factors.push_back(std::move(jfactor));
        }
        jtype["factors"] = std::move(factors);
        types.push_back(std::move(jtype));
    }
    doc["types"] = std::move(types);

    Json constraints = Json::array();
    for (const Constraint& constraint : model.constraints) {
        Json jconstraint = Json::object();
        jconstraint["kind"] = std::string(to_string(constraint.kind));
        jconstraint["source"] = constraint.source;
        jconstraint["target"] = constraint.target;
        if (!constraint.description.empty()) jconstraint["description"] = constraint.description;
        constraints.push_back(std::move(jconstraint));
    }
    doc["constraints"] = std::move(constraints);

    return doc.dump(2) + "\n";
}

std::vector<RequirementSpec> parse_requirements(std::string_view bytes) {
    const Json doc = parse_json(bytes);
    require_object(doc, "$");
    check_keys(doc, {"requirements"}, "$");

    std::vector<RequirementSpec> specs;
    std::unordered_set<std::string> ids;
    const Json& requirements = require_array(require_key(doc, "requirements", "$"), "$.requirements");
    for (std::size_t ri = 0; ri < requirements.size(); ++ri) {
        const std::string rpath = "$.requirements[" + std::to_string(ri) + "]";
        const Json& jreq = require_object(requirements[ri], rpath);
        check_keys(jreq, {"id", "trigger", "component", "behaviour", "pods"}, rpath);

        RequirementSpec spec;
        spec.id = get_string(jreq, "id", rpath);
        if (!ids.insert(spec.id).second) throw DuplicateRequirementIdError(spec.id);
        spec.trigger = get_string(jreq, "trigger", rpath);
        spec.component = get_string(jreq, "component", rpath);
        spec.behaviour = get_string(jreq, "behaviour", rpath);

        const Json& pods = require_array(require_key(jreq, "pods", rpath), rpath + ".pods");
        if (pods.empty()) throw SchemaError(rpath + ".pods", "pods must be non-empty");
        for (std::size_t pi = 0; pi < pods.size(); ++pi) {
            const std::string ppath = element_path(rpath, "pods", pi);
            const Json& jpod = require_object(pods[pi], ppath);
            check_keys(jpod, {"type", "rows", "label"}, ppath);

            PodSelector selector;
            selector.type_name = get_string(jpod, "type", ppath);
            if (const auto it = jpod.find("label"); it != jpod.end()) {
                if (!it->is_string()) throw SchemaError(ppath + ".label", "expected a string");
                selector.label = it->get<std::string>();
            }
            const Json& rows = require_key(jpod, "rows", ppath);
            const std::string rowspath = ppath + ".rows";
            if (rows.is_string()) {
                if (rows.get<std::string>() != "all") {
                    throw SchemaError(rowspath, "expected \"all\", an id array, or {\"range\": [lo, hi]}");
                }
                selector.kind = SelectorKind::All;
            } else if (rows.is_array()) {
                if (rows.empty()) throw SchemaError(rowspath, "rows must be non-empty");
                selector.kind = SelectorKind::List;
                for (std::size_t ii = 0; ii < rows.size(); ++ii) {
                    selector.rows.push_back(
                        positive_int(rows[ii], rowspath + "[" + std::to_string(ii) + "]"));
                }
            } else if (rows.is_object()) {
                check_keys(rows, {"range"}, rowspath);
                const Json& range = require_array(require_key(rows, "range", rowspath),
                                                  rowspath + ".range");
                if (range.size() != 2) throw SchemaError(rowspath + ".range", "expected [lo, hi]");
                selector.kind = SelectorKind::Range;
                selector.lo = positive_int(range[0], rowspath + ".range[0]");
                selector.hi = positive_int(range[1], rowspath + ".range[1]");
                if (selector.lo > selector.hi) {
                    throw SchemaError(rowspath + ".range", "lower bound exceeds upper bound");
                }
            } else {
                throw SchemaError(rowspath, "expected \"all\", an id array, or {\"range\": [lo, hi]}");
            }
            spec.pods.push_back(std::move(selector));
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::string serialize_requirements(std::span<const RequirementSpec> requirements) {
    Json list = Json::array();
    for (const RequirementSpec& spec : requirements) {
        Json jreq = Json::object();
        jreq["id"] = spec.id;
        jreq["trigger"] = spec.trigger;
        jreq["component"] = spec.component;
        jreq["behaviour"] = spec.behaviour;
        Json pods = Json::array();
        for (const PodSelector& selector : spec.pods) {
            Json jpod = Json::object();
            jpod["type"] = selector.type_name;
            switch (selector.kind) {
                case SelectorKind::All:
                    jpod["rows"] = "all";
                    break;
                case SelectorKind::Range: {
                    Json range = Json::object();
                    range["range"] = Json::array({selector.lo, selector.hi});
                    jpod["rows"] = std::move(range);
                    break;
                }
                case SelectorKind::List:
                    jpod["rows"] = selector.rows;
                    break;
            }
            if (!selector.label.empty()) jpod["label"] = selector.label;
            pods.push_back(std::move(jpod));
        }
        jreq["pods"] = std::move(pods);
        list.push_back(std::move(jreq));
    }
    Json doc = Json::object();
    doc["requirements"] = std::move(list);
    return doc.dump(2) + "\n";
}

}  // namespace sitcov
