#include "intent/verdict.hpp"

#include <json.hpp>

namespace intent {

std::string_view to_string(Definition d) {
    switch (d) {
        case Definition::DirectCommission: return "direct_commission";
        case Definition::DirectPerspective: return "direct_perspective";
        case Definition::MeansEnd: return "means_end";
        case Definition::Oblique: return "oblique";
        case Definition::Ulterior: return "ulterior";
        case Definition::MoralResponsibility: return "moral_responsibility";
    }
    return "direct_commission";
}

std::string_view display_name(Definition d) {
    switch (d) {
        case Definition::DirectCommission: return "direct intent (commission)";
        case Definition::DirectPerspective: return "direct intent (perspective)";
        case Definition::MeansEnd: return "means-end intent";
        case Definition::Oblique: return "oblique intent";
        case Definition::Ulterior: return "ulterior intent";
        case Definition::MoralResponsibility: return "moral responsibility";
    }
    return "direct intent (commission)";
}

std::optional<Definition> definition_from_string(std::string_view s) {
    if (s == "direct_commission" || s == "direct") return Definition::DirectCommission;
    if (s == "direct_perspective") return Definition::DirectPerspective;
    if (s == "means_end") return Definition::MeansEnd;
    if (s == "oblique") return Definition::Oblique;
    if (s == "ulterior") return Definition::Ulterior;
    if (s == "moral_responsibility") return Definition::MoralResponsibility;
    return std::nullopt;
}

const ClauseResult* Verdict::clause(std::string_view id) const {
    for (const auto& c : clauses) {
        if (c.clause_id == id) return &c;
    }
    return nullptr;
}

bool Verdict::clause_holds(std::string_view id) const {
    const ClauseResult* c = clause(id);
    return c && c->holds;
}

bool reconstruct_holds(const Verdict& v) {
    switch (v.definition) {
        case Definition::DirectCommission:
            return v.clause_holds("DIc1") && v.clause_holds("DIc2") && v.clause_holds("DIc3") &&
                   (v.clause_holds("DIc4a") || v.clause_holds("DIc4b"));
        case Definition::DirectPerspective:
            return v.clause_holds("DIp1") && v.clause_holds("DIp2") && v.clause_holds("DIp3") &&
                   (v.clause_holds("DIp4a") || v.clause_holds("DIp4b"));
        case Definition::MeansEnd:
            return v.clause_holds("ME1") && v.clause_holds("ME2") && v.clause_holds("ME3") &&
                   v.clause_holds("ME4");
        case Definition::Oblique: {
            bool base = v.clause_holds("OBcl") && v.clause_holds("OB1") &&
                        (v.clause_holds("OB2a") || v.clause_holds("OB2b"));
            const ClauseResult* avoid = v.clause("OBavoid");
            return base && (!avoid || avoid->holds);
        }
        case Definition::Ulterior:
            return v.clause_holds("UL1") && v.clause_holds("UL2");
        case Definition::MoralResponsibility:
            return v.clause_holds("MR1") && v.clause_holds("MR2") && v.clause_holds("MR3");
    }
    return false;
}

std::string explain(const Verdict& v) {
    std::string out;
    out += display_name(v.definition);
    out += " of ";
    out += format_event(v.result);
    out += " via ";
    out += format_intervention(v.action);
    out += ": ";
    out += v.holds ? "HOLDS" : "DOES NOT HOLD";
    out += "\n";

    for (const auto& c : v.clauses) {
        std::string id = c.clause_id;
        id.resize(7, ' ');  // longest id is OBavoid
        out += "  " + id + (c.holds ? " pass  " : " fail  ");
        out += c.evidence.notes.empty() ? std::string("(no detail)") : c.evidence.notes.front();
        out += "\n";
    }

    if (v.trace.condition) {
        out += "  condition: " + format_event(*v.trace.condition) + "\n";
    }
    const IntentConfig& cfg = v.trace.config;
    out += "  config: tau=" + format_number(cfg.tau) + " epsilon=" + format_number(cfg.epsilon) +
           " tolerance=" + format_number(cfg.tolerance) + " knowledge_mode=" +
           std::string(to_string(cfg.knowledge_mode)) + " exclude_avoided_results=" +
           (cfg.exclude_avoided_results ? "true" : "false") + "\n";
    return out;
}

namespace {

using json = nlohmann::json;

json event_json(const Event& e) {
    json out = json::object();
    for (const auto& [id, value] : e.literals) out[id] = value;
    return out;
}

json intervention_json(const Intervention& iv) {
    json out = json::object();
    for (const auto& [id, value] : iv.settings) out[id] = value;
    return out;
}

json assignment_json(const Assignment& a) {
    json out = json::object();
    for (const auto& [id, value] : a) out[id] = value;
    return out;
}

}  // namespace

std::string verdict_to_json(const Verdict& v) {
    json doc;
    doc["definition"] = std::string(to_string(v.definition));
    doc["result"] = event_json(v.result);
    doc["action"] = intervention_json(v.action);
    doc["holds"] = v.holds;

    json clauses = json::array();
    for (const auto& c : v.clauses) {
        json jc;
        jc["clause"] = c.clause_id;
        jc["holds"] = c.holds;
        json ev;
        ev["notes"] = c.evidence.notes;
        json probs = json::array();
        for (const auto& p : c.evidence.probabilities) {
            probs.push_back({{"label", p.label}, {"value", p.value}});
        }
        ev["probabilities"] = probs;
        json wits = json::array();
        for (const auto& w : c.evidence.witnesses) {
            wits.push_back({{"label", w.label},
                            {"context", assignment_json(w.context)},
                            {"actual", intervention_json(w.actual)},
                            {"counterfactual", intervention_json(w.counterfactual)}});
        }
        ev["witnesses"] = wits;
        jc["evidence"] = ev;
        clauses.push_back(jc);
    }
    doc["clauses"] = clauses;

    json trace;
    trace["chosen_y"] = v.trace.chosen_y ? event_json(*v.trace.chosen_y) : json(nullptr);
    trace["condition"] = v.trace.condition ? event_json(*v.trace.condition) : json(nullptr);
    trace["notes"] = v.trace.notes;
    doc["trace"] = trace;

    const IntentConfig& cfg = v.trace.config;
    json jcfg;
    jcfg["tau"] = cfg.tau;
    jcfg["epsilon"] = cfg.epsilon;
    jcfg["tolerance"] = cfg.tolerance;
    jcfg["context_cap"] = cfg.context_cap;
    jcfg["exclude_avoided_results"] = cfg.exclude_avoided_results;
    jcfg["knowledge_mode"] = std::string(to_string(cfg.knowledge_mode));
    if (cfg.reference_actions) {
        json refs = json::array();
        for (const auto& r : *cfg.reference_actions) refs.push_back(intervention_json(r));
        jcfg["reference_actions"] = refs;
    } else {
        jcfg["reference_actions"] = nullptr;
    }
    doc["config"] = jcfg;

    return doc.dump();
}

}  // namespace intent
