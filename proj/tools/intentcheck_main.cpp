#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intent/corpus.hpp"
#include "intent/predicates.hpp"
#include "intent/scenario.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInfeasible = 2;
constexpr int kInternal = 3;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// INTENT_CONTEXT_CAP overrides the enumeration cap of every loaded scenario.
std::optional<std::uint64_t> context_cap_from_env(std::string* error) {
    const char* raw = std::getenv("INTENT_CONTEXT_CAP");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    unsigned long long value = std::strtoull(raw, &end, 10);
    if (*end != '\0' || value == 0) {
        *error = "INTENT_CONTEXT_CAP must be a positive integer, got '" + std::string(raw) + "'";
        return std::nullopt;
    }
    return value;
}

// Exit kInvalid on unreadable files and parse errors, with the rendered
// positioned error on stderr.
intent::Scenario load_scenario(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        std::exit(kInvalid);
    }
    intent::ParseResult parsed = ends_with(path, ".json") ? intent::parse_scenario_json(*text)
                                                          : intent::parse_scenario(*text);
    if (const auto* error = std::get_if<intent::ParseError>(&parsed)) {
        std::cerr << error->render() << "\n";
        std::exit(kInvalid);
    }
    intent::Scenario scenario = std::get<intent::Scenario>(std::move(parsed));
    std::string env_error;
    if (auto cap = context_cap_from_env(&env_error)) {
        scenario.config.context_cap = *cap;
    } else if (!env_error.empty()) {
        std::cerr << "error: " << env_error << "\n";
        std::exit(kInvalid);
    }
    return scenario;
}

// "Var=value" into a literal; shared by --result and --action.
std::pair<std::string, std::string> parse_literal(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        std::cerr << "error: expected Var=value, got '" << text << "'\n";
        std::exit(kInvalid);
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

int evaluate_scenario(const intent::Scenario& scenario, bool as_json) {
    std::vector<std::string> documents;
    try {
        for (const auto& query : scenario.queries) {
            intent::Verdict verdict = intent::evaluate_query(scenario, query);
            documents.push_back(as_json ? intent::verdict_to_json(verdict)
                                        : intent::explain(verdict));
        }
    } catch (const intent::CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const intent::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }

    if (as_json) {
        if (documents.size() == 1) {
            std::cout << documents.front() << "\n";
        } else {
            json wrapped;
            wrapped["verdicts"] = json::array();
            for (const auto& doc : documents) wrapped["verdicts"].push_back(json::parse(doc));
            std::cout << wrapped.dump() << "\n";
        }
    } else {
        for (std::size_t i = 0; i < documents.size(); ++i) {
            if (i) std::cout << "\n";
            std::cout << documents[i];
        }
    }
    return kOk;
}

int cmd_validate(const std::string& path) {
    intent::Scenario scenario = load_scenario(path);
    auto violations = intent::validate_scenario(scenario);
    if (!violations.empty()) {
        // Unreachable through the parsers; guards programmatic mistakes.
        std::cerr << "error: " << violations.front().message << "\n";
        return kInvalid;
    }
    intent::CapacityReport report = intent::check_capacity(scenario);
    std::cout << "scenario: valid\n";
    std::cout << "capacity: " << report.satisfied_count() << "/" << report.requirements.size()
              << "\n";
    for (const auto& requirement : report.requirements) {
        if (!requirement.satisfied) {
            std::cout << "  missing " << requirement.name << ": " << requirement.note << "\n";
        }
    }
    return kOk;
}

int cmd_eval(const std::string& path, const std::string& query_name,
             const std::vector<std::string>& result_literals,
             const std::vector<std::string>& action_literals, std::optional<double> tau,
             std::optional<double> epsilon, bool as_json) {
    intent::Scenario scenario = load_scenario(path);
    bool modified = false;

    if (tau) {
        scenario.config.tau = *tau;
        modified = true;
    }
    if (epsilon) {
        scenario.config.epsilon = *epsilon;
        modified = true;
    }

    if (!query_name.empty() || !result_literals.empty() || !action_literals.empty()) {
        if (query_name.empty() || result_literals.empty()) {
            std::cerr << "error: --query and --result must be given together\n";
            return kInvalid;
        }
        auto definition = intent::definition_from_string(query_name);
        if (!definition) {
            std::cerr << "error: unknown definition '" << query_name << "'\n";
            return kInvalid;
        }
        intent::Query query;
        query.definition = *definition;
        for (const auto& literal : result_literals) {
            auto [variable, value] = parse_literal(literal);
            query.result.literals[variable] = value;
        }
        if (!action_literals.empty()) {
            intent::Intervention with;
            for (const auto& literal : action_literals) {
                auto [variable, value] = parse_literal(literal);
                with.settings[variable] = value;
            }
            query.action = std::move(with);
        }
        scenario.queries = {std::move(query)};
        modified = true;
    }

    if (scenario.queries.empty()) {
        std::cerr << "error: nothing to evaluate: pass --query/--result or add a queries section\n";
        return kInvalid;
    }

    if (modified) {
        auto violations = intent::validate_scenario(scenario);
        if (!violations.empty()) {
            std::cerr << "error: " << violations.front().message << "\n";
            return kInvalid;
        }
    }

    return evaluate_scenario(scenario, as_json);
}

intent::Event event_from_json(const json& object) {
    intent::Event event;
    for (const auto& [variable, value] : object.items()) {
        event.literals[variable] = value.get<std::string>();
    }
    return event;
}

// One corpus entry against its golden verdicts; appends human-readable
// mismatch descriptions.
bool check_corpus_entry(const intent::CorpusEntry& entry, std::vector<std::string>* problems) {
    intent::ParseResult parsed = intent::parse_scenario(entry.document);
    if (const auto* error = std::get_if<intent::ParseError>(&parsed)) {
        problems->push_back(entry.name + ": does not parse: " + error->render());
        return false;
    }
    const intent::Scenario& scenario = std::get<intent::Scenario>(parsed);

    bool ok = true;
    bool flagged = !intent::check_capacity(scenario).all_satisfied();
    if (flagged != entry.capacity_flagged) {
        problems->push_back(entry.name + ": capacity_flagged expected " +
                            (entry.capacity_flagged ? "true" : "false"));
        ok = false;
    }

    json expected = json::parse(entry.expected_json);
    const json& verdicts = expected.at("verdicts");
    if (verdicts.size() != scenario.queries.size()) {
        problems->push_back(entry.name + ": expected " + std::to_string(verdicts.size()) +
                            " verdicts for " + std::to_string(scenario.queries.size()) +
                            " queries");
        return false;
    }

    for (std::size_t i = 0; i < scenario.queries.size(); ++i) {
        const json& want = verdicts[i];
        intent::Verdict got = intent::evaluate_query(scenario, scenario.queries[i]);
        std::string label = entry.name + " query " + std::to_string(i) + " (" +
                            want.at("definition").get<std::string>() + ")";

        if (want.at("definition").get<std::string>() != intent::to_string(got.definition)) {
            problems->push_back(label + ": definition mismatch");
            ok = false;
        }
        if (event_from_json(want.at("result")).literals != got.result.literals) {
            problems->push_back(label + ": result mismatch");
            ok = false;
        }
        if (want.at("holds").get<bool>() != got.holds) {
            problems->push_back(label + ": holds expected " +
                                (want.at("holds").get<bool>() ? "true" : "false"));
            ok = false;
        }
        const json& clauses = want.at("clauses");
        if (clauses.size() != got.clauses.size()) {
            problems->push_back(label + ": clause count expected " +
                                std::to_string(clauses.size()) + ", got " +
                                std::to_string(got.clauses.size()));
            ok = false;
        }
        for (const auto& [clause_id, holds] : clauses.items()) {
            const intent::ClauseResult* clause = got.clause(clause_id);
            if (!clause) {
                problems->push_back(label + ": missing clause " + clause_id);
                ok = false;
            } else if (clause->holds != holds.get<bool>()) {
                problems->push_back(label + ": clause " + clause_id + " expected " +
                                    (holds.get<bool>() ? "true" : "false"));
                ok = false;
            }
        }
        if (want.contains("chosen_y")) {
            if (!got.trace.chosen_y ||
                got.trace.chosen_y->literals != event_from_json(want.at("chosen_y")).literals) {
                problems->push_back(label + ": chosen_y mismatch");
                ok = false;
            }
        }
        if (want.contains("condition")) {
            if (!got.trace.condition ||
                got.trace.condition->literals != event_from_json(want.at("condition")).literals) {
                problems->push_back(label + ": condition mismatch");
                ok = false;
            }
        }
        if (want.contains("action")) {
            if (event_from_json(want.at("action")).literals != got.action.settings) {
                problems->push_back(label + ": action mismatch");
                ok = false;
            }
        }
    }
    return ok;
}

int cmd_corpus() {
    int matched = 0;
    const auto& entries = intent::corpus();
    std::vector<std::string> problems;
    for (const auto& entry : entries) {
        if (check_corpus_entry(entry, &problems)) ++matched;
    }
    for (const auto& problem : problems) std::cout << problem << "\n";
    std::cout << matched << "/" << entries.size() << " scenarios match\n";
    return matched == static_cast<int>(entries.size()) ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide whether an agent intends a result in a described scenario"};
    app.require_subcommand(1);

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Check a scenario file and report capacity");
    validate->add_option("file", validate_path, "scenario file (.intent or .json)")->required();

    std::string eval_path;
    std::string query_name;
    std::vector<std::string> result_literals;
    std::vector<std::string> action_literals;
    double tau_value = 0.0;
    double epsilon_value = 0.0;
    bool as_json = false;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate intent queries against a scenario");
    eval->add_option("file", eval_path, "scenario file (.intent or .json)")->required();
    eval->add_option("--query", query_name, "definition to evaluate");
    eval->add_option("--result", result_literals, "result literal Var=value (repeatable)");
    eval->add_option("--action", action_literals, "action literal Var=value (repeatable)");
    CLI::Option* tau_option = eval->add_option("--tau", tau_value, "near-certainty threshold");
    CLI::Option* epsilon_option = eval->add_option("--epsilon", epsilon_value, "foreseeability floor");
    eval->add_flag("--json", as_json, "emit one machine-readable document");

    CLI::App* corpus = app.add_subcommand("corpus", "Evaluate the embedded corpus against goldens");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 exits 0 for --help; every real flag error maps to kInvalid.
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_path);
        if (eval->parsed()) {
            std::optional<double> tau;
            std::optional<double> epsilon;
            if (tau_option->count() > 0) tau = tau_value;
            if (epsilon_option->count() > 0) epsilon = epsilon_value;
            return cmd_eval(eval_path, query_name, result_literals, action_literals, tau, epsilon,
                            as_json);
        }
        if (corpus->parsed()) return cmd_corpus();
    } catch (const intent::CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
