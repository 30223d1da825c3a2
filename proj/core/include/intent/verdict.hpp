#pragma once

// Verdicts are the machine-checkable output of the intent predicates: a top
// level boolean plus one entry per clause of the definition, each carrying
// the evidence (probabilities, witnesses) that decided it.

#include "intent/agent.hpp"

namespace intent {

enum class Definition {
    DirectCommission,
    DirectPerspective,
    MeansEnd,
    Oblique,
    Ulterior,
    MoralResponsibility,
};

std::string_view to_string(Definition d);
std::string_view display_name(Definition d);  // "oblique intent", "moral responsibility", ...
std::optional<Definition> definition_from_string(std::string_view s);

struct ProbabilityRecord {
    std::string label;  // e.g. "P(Death=yes | do(Plant: yes))"
    double value;

    bool operator==(const ProbabilityRecord&) const = default;
};

struct WitnessRecord {
    std::string label;
    Assignment context;
    Intervention actual;
    Intervention counterfactual;

    bool operator==(const WitnessRecord&) const = default;
};

struct Evidence {
    std::vector<std::string> notes;  // notes[0] is the one-line clause summary
    std::vector<ProbabilityRecord> probabilities;
    std::vector<WitnessRecord> witnesses;

    bool operator==(const Evidence&) const = default;
};

struct ClauseResult {
    std::string clause_id;  // fixed per definition: DIc1..DIc4b, ME1..ME4, ...
    bool holds = false;
    Evidence evidence;

    bool operator==(const ClauseResult&) const = default;
};

struct EvidenceTrace {
    std::optional<Event> chosen_y;   // witness result for oblique/means-end
    std::optional<Event> condition;  // witness condition for ulterior
    std::vector<std::string> notes;
    IntentConfig config;  // the configuration the verdict was computed under

    bool operator==(const EvidenceTrace&) const = default;
};

struct Verdict {
    Definition definition = Definition::DirectCommission;
    Event result;
    Intervention action;
    bool holds = false;
    std::vector<ClauseResult> clauses;
    EvidenceTrace trace;

    const ClauseResult* clause(std::string_view id) const;
    bool clause_holds(std::string_view id) const;

    bool operator==(const Verdict&) const = default;
};

// Recomputes `holds` from the clause list alone using the definition's
// boolean formula. Always equal to verdict.holds for predicate output.
bool reconstruct_holds(const Verdict& v);

// Deterministic plain-text report: header, one line per clause, config line.
// Equal verdicts render to identical bytes.
std::string explain(const Verdict& v);

// Compact single-object JSON document with fixed key order; equal verdicts
// serialize to identical bytes.
std::string verdict_to_json(const Verdict& v);

}  // namespace intent
