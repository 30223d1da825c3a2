#include <cmath>

#include <json.hpp>

#include "scenario_internal.hpp"

namespace intent {

namespace {

using detail::fail;
using detail::ParseFail;
using nlohmann::json;

constexpr detail::SourcePos kHere{1, 1};

// Every reader reports against a dotted path; JSON carries no line numbers,
// so the path in the message is the location.

const json& require_key(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(kHere, "missing key '" + std::string(key) + "' in " + path);
    return *it;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (auto k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) fail(kHere, "unknown key '" + it.key() + "' in " + path);
    }
}

const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(kHere, "expected an object at " + path);
    return j;
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(kHere, "expected an array at " + path);
    return j;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(kHere, "expected a string at " + path);
    return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(kHere, "expected a number at " + path);
    return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(kHere, "expected a boolean at " + path);
    return j.get<bool>();
}

Event read_event(const json& j, const std::string& path) {
    Event e;
    for (const auto& [key, value] : as_object(j, path).items()) {
        e.literals[key] = as_string(value, path + "." + key);
    }
    return e;
}

Intervention read_settings(const json& j, const std::string& path) {
    Intervention iv;
    for (const auto& [key, value] : as_object(j, path).items()) {
        iv.settings[key] = as_string(value, path + "." + key);
    }
    return iv;
}

CausalModel read_model(const json& j, const std::string& path) {
    as_object(j, path);
    check_keys(j, {"exogenous", "actions", "endogenous"}, path);
    CausalModel model;

    if (auto it = j.find("exogenous"); it != j.end()) {
        std::size_t index = 0;
        for (const auto& entry : as_array(*it, path + ".exogenous")) {
            std::string at = path + ".exogenous[" + std::to_string(index++) + "]";
            as_object(entry, at);
            check_keys(entry, {"id", "values"}, at);
            ExogenousVariable v;
            v.id = as_string(require_key(entry, "id", at), at + ".id");
            std::size_t vi = 0;
            for (const auto& pair : as_array(require_key(entry, "values", at), at + ".values")) {
                std::string vat = at + ".values[" + std::to_string(vi++) + "]";
                as_object(pair, vat);
                check_keys(pair, {"value", "p"}, vat);
                v.domain.values.push_back(
                    as_string(require_key(pair, "value", vat), vat + ".value"));
                v.probabilities.push_back(as_number(require_key(pair, "p", vat), vat + ".p"));
            }
            model.exogenous.push_back(std::move(v));
        }
    }

    if (auto it = j.find("actions"); it != j.end()) {
        std::size_t index = 0;
        for (const auto& entry : as_array(*it, path + ".actions")) {
            std::string at = path + ".actions[" + std::to_string(index++) + "]";
            as_object(entry, at);
            check_keys(entry, {"id", "values"}, at);
            ActionVariable v;
            v.id = as_string(require_key(entry, "id", at), at + ".id");
            std::size_t vi = 0;
            for (const auto& label : as_array(require_key(entry, "values", at), at + ".values")) {
                v.domain.values.push_back(
                    as_string(label, at + ".values[" + std::to_string(vi++) + "]"));
            }
            model.actions.push_back(std::move(v));
        }
    }

    if (auto it = j.find("endogenous"); it != j.end()) {
        std::size_t index = 0;
        for (const auto& entry : as_array(*it, path + ".endogenous")) {
            std::string at = path + ".endogenous[" + std::to_string(index++) + "]";
            as_object(entry, at);
            check_keys(entry, {"id", "parents", "table"}, at);
            EndogenousVariable v;
            v.id = as_string(require_key(entry, "id", at), at + ".id");
            std::size_t pi = 0;
            for (const auto& parent :
                 as_array(require_key(entry, "parents", at), at + ".parents")) {
                v.parents.push_back(
                    as_string(parent, at + ".parents[" + std::to_string(pi++) + "]"));
            }
            std::size_t ri = 0;
            for (const auto& row : as_array(require_key(entry, "table", at), at + ".table")) {
                std::string rat = at + ".table[" + std::to_string(ri++) + "]";
                as_object(row, rat);
                check_keys(row, {"given", "value"}, rat);
                TableRow r;
                std::size_t gi = 0;
                for (const auto& input :
                     as_array(require_key(row, "given", rat), rat + ".given")) {
                    r.inputs.push_back(
                        as_string(input, rat + ".given[" + std::to_string(gi++) + "]"));
                }
                r.output = as_string(require_key(row, "value", rat), rat + ".value");
                // Domains of caused variables are defined by their outputs.
                if (!v.domain.contains(r.output)) v.domain.values.push_back(r.output);
                v.rows.push_back(std::move(r));
            }
            model.endogenous.push_back(std::move(v));
        }
    }
    return model;
}

AgentModel read_agent(const json& j, const std::string& path, const CausalModel& objective) {
    as_object(j, path);
    check_keys(j, {"model", "observes", "aims", "policy", "committed"}, path);
    AgentModel agent;

    if (auto it = j.find("model"); it != j.end()) {
        agent.subjective_model = read_model(*it, path + ".model");
    } else {
        agent.subjective_model = objective;
    }
    if (auto it = j.find("observes"); it != j.end()) {
        std::size_t index = 0;
        for (const auto& id : as_array(*it, path + ".observes")) {
            agent.observables.insert(
                as_string(id, path + ".observes[" + std::to_string(index++) + "]"));
        }
    }
    if (auto it = j.find("aims"); it != j.end()) {
        std::size_t index = 0;
        for (const auto& aim : as_array(*it, path + ".aims")) {
            agent.aims.push_back(read_event(aim, path + ".aims[" + std::to_string(index++) + "]"));
        }
    }
    if (auto it = j.find("policy"); it != j.end()) {
        Policy policy;
        std::size_t index = 0;
        for (const auto& rule : as_array(*it, path + ".policy")) {
            std::string at = path + ".policy[" + std::to_string(index++) + "]";
            as_object(rule, at);
            check_keys(rule, {"condition", "action"}, at);
            PolicyRule r;
            r.condition = read_event(require_key(rule, "condition", at), at + ".condition");
            r.action = read_settings(require_key(rule, "action", at), at + ".action");
            policy.rules.push_back(std::move(r));
        }
        agent.policy = std::move(policy);
    }
    if (auto it = j.find("committed"); it != j.end()) {
        agent.committed = as_bool(*it, path + ".committed");
    }
    return agent;
}

IntentConfig read_config(const json& j, const std::string& path) {
    as_object(j, path);
    check_keys(j,
               {"tau", "epsilon", "tolerance", "exclude_avoided_results", "knowledge_mode",
                "reference_actions", "context_cap"},
               path);
    IntentConfig config;
    if (auto it = j.find("tau"); it != j.end()) config.tau = as_number(*it, path + ".tau");
    if (auto it = j.find("epsilon"); it != j.end()) {
        config.epsilon = as_number(*it, path + ".epsilon");
    }
    if (auto it = j.find("tolerance"); it != j.end()) {
        config.tolerance = as_number(*it, path + ".tolerance");
    }
    if (auto it = j.find("exclude_avoided_results"); it != j.end()) {
        config.exclude_avoided_results = as_bool(*it, path + ".exclude_avoided_results");
    }
    if (auto it = j.find("knowledge_mode"); it != j.end()) {
        std::string mode = as_string(*it, path + ".knowledge_mode");
        auto parsed = knowledge_mode_from_string(mode);
        if (!parsed) fail(kHere, "unknown knowledge mode '" + mode + "'");
        config.knowledge_mode = *parsed;
    }
    if (auto it = j.find("reference_actions"); it != j.end()) {
        std::vector<Intervention> refs;
        std::size_t index = 0;
        for (const auto& iv : as_array(*it, path + ".reference_actions")) {
            refs.push_back(read_settings(
                iv, path + ".reference_actions[" + std::to_string(index++) + "]"));
        }
        config.reference_actions = std::move(refs);
    }
    if (auto it = j.find("context_cap"); it != j.end()) {
        double cap = as_number(*it, path + ".context_cap");
        if (!(cap >= 1.0) || cap != std::floor(cap) || cap > 9007199254740992.0) {
            fail(kHere, "context_cap must be a positive integer", "bad-threshold");
        }
        config.context_cap = static_cast<std::uint64_t>(cap);
    }
    return config;
}

Scenario read_scenario(const json& doc) {
    as_object(doc, "document");
    check_keys(doc,
               {"format", "model", "agent", "commission_agent", "performed", "plan", "realized",
                "config", "queries"},
               "document");

    const json& format = require_key(doc, "format", "document");
    if (!format.is_number() || format.get<double>() != 1.0) {
        fail(kHere, "unsupported format version");
    }

    Scenario s;
    s.objective_model = read_model(require_key(doc, "model", "document"), "model");

    if (auto it = doc.find("agent"); it != doc.end()) {
        s.agent = read_agent(*it, "agent", s.objective_model);
    } else {
        s.agent.subjective_model = s.objective_model;
    }
    if (auto it = doc.find("commission_agent"); it != doc.end()) {
        s.commission_snapshot = read_agent(*it, "commission_agent", s.objective_model);
    }
    if (auto it = doc.find("performed"); it != doc.end()) {
        s.performed = read_settings(*it, "performed");
    }
    if (auto it = doc.find("plan"); it != doc.end()) {
        s.plan = read_settings(*it, "plan");
    }
    if (auto it = doc.find("realized"); it != doc.end()) {
        s.realized = World{read_settings(*it, "realized").settings};
    }
    if (auto it = doc.find("config"); it != doc.end()) {
        s.config = read_config(*it, "config");
    }
    if (auto it = doc.find("queries"); it != doc.end()) {
        std::size_t index = 0;
        for (const auto& q : as_array(*it, "queries")) {
            std::string at = "queries[" + std::to_string(index++) + "]";
            as_object(q, at);
            check_keys(q, {"definition", "result", "with"}, at);
            Query query;
            std::string name =
                as_string(require_key(q, "definition", at), at + ".definition");
            auto definition = definition_from_string(name);
            if (!definition) fail(kHere, "unknown definition '" + name + "'");
            query.definition = *definition;
            query.result = read_event(require_key(q, "result", at), at + ".result");
            if (auto w = q.find("with"); w != q.end()) {
                query.action = read_settings(*w, at + ".with");
            }
            s.queries.push_back(std::move(query));
        }
    }
    return s;
}

json model_json(const CausalModel& model) {
    json out = json::object();
    json exo = json::array();
    for (const auto& v : model.exogenous) {
        json values = json::array();
        for (std::size_t i = 0; i < v.domain.values.size(); ++i) {
            values.push_back({{"value", v.domain.values[i]},
                              {"p", i < v.probabilities.size() ? v.probabilities[i] : 0.0}});
        }
        exo.push_back({{"id", v.id}, {"values", values}});
    }
    out["exogenous"] = exo;

    json actions = json::array();
    for (const auto& v : model.actions) {
        actions.push_back({{"id", v.id}, {"values", v.domain.values}});
    }
    out["actions"] = actions;

    json endo = json::array();
    for (const auto& v : model.endogenous) {
        json table = json::array();
        for (const auto& row : v.rows) {
            table.push_back({{"given", row.inputs}, {"value", row.output}});
        }
        endo.push_back({{"id", v.id}, {"parents", v.parents}, {"table", table}});
    }
    out["endogenous"] = endo;
    return out;
}

json settings_json(const std::map<VariableId, ValueLabel>& settings) {
    json out = json::object();
    for (const auto& [id, value] : settings) out[id] = value;
    return out;
}

json agent_json(const AgentModel& agent) {
    json out = json::object();
    out["model"] = model_json(agent.subjective_model);
    out["observes"] = json(agent.observables);
    json aims = json::array();
    for (const auto& aim : agent.aims) aims.push_back(settings_json(aim.literals));
    out["aims"] = aims;
    if (agent.policy) {
        json rules = json::array();
        for (const auto& rule : agent.policy->rules) {
            rules.push_back({{"condition", settings_json(rule.condition.literals)},
                             {"action", settings_json(rule.action.settings)}});
        }
        out["policy"] = rules;
    }
    out["committed"] = agent.committed;
    return out;
}

}  // namespace

ParseResult parse_scenario_json(std::string_view text) {
    try {
        json doc = json::parse(text, nullptr, true, /*ignore_comments=*/false);
        Scenario s = read_scenario(doc);
        if (auto error = detail::finish_validation(s, {})) return *error;
        return s;
    } catch (const ParseFail& f) {
        return f.error;
    } catch (const json::exception& e) {
        ParseError err;
        err.code = "syntax";
        err.message = std::string("invalid JSON: ") + e.what();
        return err;
    }
}

std::string scenario_to_json(const Scenario& s) {
    json doc;
    doc["format"] = 1;
    doc["model"] = model_json(s.objective_model);
    doc["agent"] = agent_json(s.agent);
    if (s.commission_snapshot) doc["commission_agent"] = agent_json(*s.commission_snapshot);
    doc["performed"] = settings_json(s.performed.settings);
    if (s.plan) doc["plan"] = settings_json(s.plan->settings);
    if (s.realized) doc["realized"] = settings_json(s.realized->values);

    json config;
    config["tau"] = s.config.tau;
    config["epsilon"] = s.config.epsilon;
    config["tolerance"] = s.config.tolerance;
    config["exclude_avoided_results"] = s.config.exclude_avoided_results;
    config["knowledge_mode"] = std::string(to_string(s.config.knowledge_mode));
    if (s.config.reference_actions) {
        json refs = json::array();
        for (const auto& iv : *s.config.reference_actions) {
            refs.push_back(settings_json(iv.settings));
        }
        config["reference_actions"] = refs;
    }
    if (s.config.context_cap != kDefaultContextCap) {
        config["context_cap"] = s.config.context_cap;
    }
    doc["config"] = config;

    json queries = json::array();
    for (const auto& q : s.queries) {
        json query;
        query["definition"] = std::string(to_string(q.definition));
        query["result"] = settings_json(q.result.literals);
        if (q.action) query["with"] = settings_json(q.action->settings);
        queries.push_back(query);
    }
    doc["queries"] = queries;

    return doc.dump(2) + "\n";
}

}  // namespace intent
