#include "intent/scenario.hpp"

namespace intent {

namespace {

// Canonical layout: fixed section order, two-space indent per level, one
// blank line between top-level sections, single-line lists with ", ",
// multi-line blocks (tables, policies) with one entry per line.

std::string indent_of(int levels) {
    return std::string(std::size_t(levels) * 2, ' ');
}

void emit_model(std::string& out, const CausalModel& model, int level) {
    const std::string pad = indent_of(level);
    const std::string row_pad = indent_of(level + 1);

    for (const auto& v : model.exogenous) {
        out += pad + "exo " + v.id + " {";
        for (std::size_t i = 0; i < v.domain.values.size(); ++i) {
            if (i) out += ", ";
            out += v.domain.values[i] + ": " +
                   format_number(i < v.probabilities.size() ? v.probabilities[i] : 0.0);
        }
        out += "}\n";
    }
    for (const auto& v : model.actions) {
        out += pad + "action " + v.id + " {";
        for (std::size_t i = 0; i < v.domain.values.size(); ++i) {
            if (i) out += ", ";
            out += v.domain.values[i];
        }
        out += "}\n";
    }
    for (const auto& v : model.endogenous) {
        out += pad + "var " + v.id + " (";
        for (std::size_t i = 0; i < v.parents.size(); ++i) {
            if (i) out += ", ";
            out += v.parents[i];
        }
        out += ") {\n";
        for (const auto& row : v.rows) {
            out += row_pad + "(";
            for (std::size_t i = 0; i < row.inputs.size(); ++i) {
                if (i) out += ", ";
                out += row.inputs[i];
            }
            out += ") -> " + row.output + "\n";
        }
        out += pad + "}\n";
    }
}

std::string paren_event(const Event& e) {
    return "(" + format_event(e) + ")";
}

void emit_agent(std::string& out, const AgentModel& agent, const std::string& section) {
    out += section + ":\n";
    out += indent_of(1) + "model:\n";
    emit_model(out, agent.subjective_model, 2);

    if (!agent.observables.empty()) {
        out += indent_of(1) + "observes {";
        bool first = true;
        for (const auto& id : agent.observables) {
            if (!first) out += ", ";
            out += id;
            first = false;
        }
        out += "}\n";
    }
    if (!agent.aims.empty()) {
        out += indent_of(1) + "aims {";
        for (std::size_t i = 0; i < agent.aims.size(); ++i) {
            if (i) out += ", ";
            out += paren_event(agent.aims[i]);
        }
        out += "}\n";
    }
    if (agent.policy) {
        if (agent.policy->rules.empty()) {
            out += indent_of(1) + "policy {}\n";
        } else {
            out += indent_of(1) + "policy {\n";
            for (const auto& rule : agent.policy->rules) {
                out += indent_of(2) + paren_event(rule.condition) + " -> " +
                       format_intervention(rule.action) + "\n";
            }
            out += indent_of(1) + "}\n";
        }
    }
    if (agent.policy || agent.committed) {
        out += indent_of(1) + "committed: " + (agent.committed ? "true" : "false") + "\n";
    }
}

}  // namespace

ScenarioDocument serialize_scenario(const Scenario& s) {
    std::string out;
    out += "format: 1\n";

    out += "\nmodel:\n";
    emit_model(out, s.objective_model, 1);

    out += "\n";
    emit_agent(out, s.agent, "agent");

    if (s.commission_snapshot) {
        out += "\n";
        emit_agent(out, *s.commission_snapshot, "commission_agent");
    }

    out += "\nperformed: " + format_intervention(s.performed) + "\n";

    if (s.plan) {
        out += "\nplan: " + format_intervention(*s.plan) + "\n";
    }
    if (s.realized) {
        out += "\nrealized: " + format_assignment(s.realized->values) + "\n";
    }

    out += "\nconfig:\n";
    out += indent_of(1) + "tau: " + format_number(s.config.tau) + "\n";
    out += indent_of(1) + "epsilon: " + format_number(s.config.epsilon) + "\n";
    out += indent_of(1) + "tolerance: " + format_number(s.config.tolerance) + "\n";
    out += indent_of(1) + "exclude_avoided_results: " +
           (s.config.exclude_avoided_results ? "true" : "false") + "\n";
    out += indent_of(1) + "knowledge_mode: " + std::string(to_string(s.config.knowledge_mode)) +
           "\n";
    if (s.config.reference_actions) {
        out += indent_of(1) + "reference_actions: [";
        for (std::size_t i = 0; i < s.config.reference_actions->size(); ++i) {
            if (i) out += ", ";
            out += format_intervention((*s.config.reference_actions)[i]);
        }
        out += "]\n";
    }
    if (s.config.context_cap != kDefaultContextCap) {
        out += indent_of(1) + "context_cap: " + std::to_string(s.config.context_cap) + "\n";
    }

    if (!s.queries.empty()) {
        out += "\nqueries:\n";
        for (const auto& q : s.queries) {
            out += indent_of(1) + std::string(to_string(q.definition)) + " " +
                   format_event(q.result);
            if (q.action) out += " with " + format_intervention(*q.action);
            out += "\n";
        }
    }
    return out;
}

}  // namespace intent
