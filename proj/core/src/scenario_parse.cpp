#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "scenario_internal.hpp"

namespace intent {

namespace {

using detail::fail;
using detail::ParseFail;
using detail::PositionIndex;
using detail::SourcePos;

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    SourcePos pos;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int column = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            std::size_t end = text.find('\n', i);
            advance((end == std::string_view::npos ? text.size() : end) - i);
            continue;
        }

        SourcePos pos{line, column};
        if (ident_start(c)) {
            std::size_t end = i;
            while (end < text.size() && ident_char(text[end])) ++end;
            out.push_back({Token::Kind::Ident, std::string(text.substr(i, end - i)), 0.0, pos});
            advance(end - i);
            continue;
        }
        bool sign_start = (c == '-' || c == '+') && i + 1 < text.size() &&
                          (std::isdigit(static_cast<unsigned char>(text[i + 1])) ||
                           text[i + 1] == '.');
        if (std::isdigit(static_cast<unsigned char>(c)) || sign_start) {
            std::size_t end = i;
            if (text[end] == '-' || text[end] == '+') ++end;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            if (end < text.size() && text[end] == '.') {
                ++end;
                while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) {
                    ++end;
                }
            }
            if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
                std::size_t exp = end + 1;
                if (exp < text.size() && (text[exp] == '-' || text[exp] == '+')) ++exp;
                std::size_t digits = exp;
                while (digits < text.size() &&
                       std::isdigit(static_cast<unsigned char>(text[digits]))) {
                    ++digits;
                }
                if (digits > exp) end = digits;
            }
            std::string lexeme(text.substr(i, end - i));
            char* parsed_end = nullptr;
            double value = std::strtod(lexeme.c_str(), &parsed_end);
            if (parsed_end != lexeme.c_str() + lexeme.size()) {
                fail(pos, "malformed number '" + lexeme + "'");
            }
            out.push_back({Token::Kind::Number, lexeme, value, pos});
            advance(end - i);
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::Punct, "->", 0.0, pos});
            advance(2);
            continue;
        }
        if (std::string_view("{}()[]:,=&").find(c) != std::string_view::npos) {
            out.push_back({Token::Kind::Punct, std::string(1, c), 0.0, pos});
            advance(1);
            continue;
        }
        fail(pos, std::string("unexpected character '") + c + "'");
    }

    out.push_back({Token::Kind::End, "", 0.0, {line, column}});
    return out;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Scenario parse();

    PositionIndex positions;

  private:
    const Token& peek() const { return tokens_[at_]; }
    const Token& next() { return tokens_[std::min(at_++, tokens_.size() - 1)]; }

    bool at_punct(std::string_view p) const {
        return peek().kind == Token::Kind::Punct && peek().text == p;
    }
    bool at_ident(std::string_view s) const {
        return peek().kind == Token::Kind::Ident && peek().text == s;
    }
    bool at_ident_of(std::initializer_list<std::string_view> names) const {
        if (peek().kind != Token::Kind::Ident) return false;
        for (auto n : names) {
            if (peek().text == n) return true;
        }
        return false;
    }

    Token expect_ident(const std::string& what) {
        if (peek().kind != Token::Kind::Ident) {
            fail(peek().pos, "expected " + what + describe_here());
        }
        return next();
    }
    Token expect_number(const std::string& what) {
        if (peek().kind != Token::Kind::Number) {
            fail(peek().pos, "expected " + what + describe_here());
        }
        return next();
    }
    void expect_punct(std::string_view p, const std::string& what) {
        if (!at_punct(p)) fail(peek().pos, "expected " + what + describe_here());
        next();
    }
    std::string describe_here() const {
        switch (peek().kind) {
            case Token::Kind::End: return ", found end of input";
            case Token::Kind::Number: return ", found number '" + peek().text + "'";
            default: return ", found '" + peek().text + "'";
        }
    }

    bool expect_bool(const std::string& what) {
        Token t = expect_ident(what);
        if (t.text == "true") return true;
        if (t.text == "false") return false;
        fail(t.pos, "expected 'true' or 'false', found '" + t.text + "'");
    }

    CausalModel parse_model(const std::string& prefix);
    AgentModel parse_agent(const std::string& prefix);
    Event parse_paren_event();
    Event parse_bare_event();
    Intervention parse_settings(char open, char close, const char* what);
    void parse_config();
    void parse_queries();

    std::vector<Token> tokens_;
    std::size_t at_ = 0;
    Scenario scenario_;
};

CausalModel Parser::parse_model(const std::string& prefix) {
    CausalModel model;
    while (at_ident_of({"exo", "action", "var"})) {
        Token kw = next();
        Token id = expect_ident("a variable id");
        positions[prefix + "." + id.text] = id.pos;  // later decl wins: dups point there

        if (kw.text == "exo") {
            ExogenousVariable v;
            v.id = id.text;
            expect_punct("{", "'{' to open the distribution");
            while (!at_punct("}")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                Token value = expect_ident("a value label");
                expect_punct(":", "':' between value and probability");
                Token p = expect_number("a probability");
                v.domain.values.push_back(value.text);
                v.probabilities.push_back(p.number);
            }
            expect_punct("}", "'}' to close the distribution");
            model.exogenous.push_back(std::move(v));
        } else if (kw.text == "action") {
            ActionVariable v;
            v.id = id.text;
            expect_punct("{", "'{' to open the domain");
            while (!at_punct("}")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                v.domain.values.push_back(expect_ident("a value label").text);
            }
            expect_punct("}", "'}' to close the domain");
            model.actions.push_back(std::move(v));
        } else {
            EndogenousVariable v;
            v.id = id.text;
            expect_punct("(", "'(' to open the parent list");
            while (!at_punct(")")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                v.parents.push_back(expect_ident("a parent id").text);
            }
            expect_punct(")", "')' to close the parent list");
            expect_punct("{", "'{' to open the table");
            while (!at_punct("}")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                TableRow row;
                expect_punct("(", "'(' to open a table row");
                while (!at_punct(")")) {
                    if (at_punct(",")) {
                        next();
                        continue;
                    }
                    row.inputs.push_back(expect_ident("a value label").text);
                }
                expect_punct(")", "')' to close a table row");
                expect_punct("->", "'->' before the row output");
                row.output = expect_ident("a value label").text;
                if (!v.domain.contains(row.output)) v.domain.values.push_back(row.output);
                v.rows.push_back(std::move(row));
            }
            expect_punct("}", "'}' to close the table");
            model.endogenous.push_back(std::move(v));
        }
    }
    return model;
}

Event Parser::parse_paren_event() {
    expect_punct("(", "'(' to open an event");
    Event e;
    if (!at_punct(")")) {
        while (true) {
            Token id = expect_ident("a variable id");
            expect_punct("=", "'=' in an event literal");
            Token value = expect_ident("a value label");
            if (e.literals.count(id.text)) {
                fail(id.pos, "variable '" + id.text + "' appears twice in the event");
            }
            e.literals[id.text] = value.text;
            if (at_punct("&")) {
                next();
                continue;
            }
            break;
        }
    }
    expect_punct(")", "')' to close an event");
    return e;
}

Event Parser::parse_bare_event() {
    Event e;
    while (true) {
        Token id = expect_ident("a variable id");
        expect_punct("=", "'=' in an event literal");
        Token value = expect_ident("a value label");
        if (e.literals.count(id.text)) {
            fail(id.pos, "variable '" + id.text + "' appears twice in the event");
        }
        e.literals[id.text] = value.text;
        if (at_punct("&")) {
            next();
            continue;
        }
        break;
    }
    return e;
}

Intervention Parser::parse_settings(char open, char close, const char* what) {
    std::string open_s(1, open);
    std::string close_s(1, close);
    expect_punct(open_s, "'" + open_s + "' to open " + what);
    Intervention iv;
    while (!at_punct(close_s)) {
        if (at_punct(",")) {
            next();
            continue;
        }
        Token id = expect_ident("a variable id");
        expect_punct(":", "':' between variable and value");
        Token value = expect_ident("a value label");
        if (iv.settings.count(id.text)) {
            fail(id.pos, "variable '" + id.text + "' appears twice in " + std::string(what));
        }
        iv.settings[id.text] = value.text;
    }
    expect_punct(close_s, "'" + close_s + "' to close " + what);
    return iv;
}

AgentModel Parser::parse_agent(const std::string& prefix) {
    AgentModel agent;
    bool has_model = false;
    std::set<std::string> seen;
    while (at_ident_of({"model", "observes", "aims", "policy", "committed"})) {
        Token kw = next();
        if (!seen.insert(kw.text).second) {
            fail(kw.pos, "duplicate '" + kw.text + "' block");
        }
        positions[prefix + "." + kw.text] = kw.pos;

        if (kw.text == "model") {
            expect_punct(":", "':' after 'model'");
            agent.subjective_model = parse_model(prefix + ".model");
            has_model = true;
        } else if (kw.text == "observes") {
            expect_punct("{", "'{' to open the observables");
            while (!at_punct("}")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                Token id = expect_ident("a variable id");
                positions[prefix + ".observes." + id.text] = id.pos;
                agent.observables.insert(id.text);
            }
            expect_punct("}", "'}' to close the observables");
        } else if (kw.text == "aims") {
            expect_punct("{", "'{' to open the aims");
            int index = 0;
            while (!at_punct("}")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                positions[prefix + ".aims[" + std::to_string(index) + "]"] = peek().pos;
                agent.aims.push_back(parse_paren_event());
                ++index;
            }
            expect_punct("}", "'}' to close the aims");
        } else if (kw.text == "policy") {
            expect_punct("{", "'{' to open the policy");
            Policy policy;
            int index = 0;
            while (!at_punct("}")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                positions[prefix + ".policy[" + std::to_string(index) + "]"] = peek().pos;
                PolicyRule rule;
                rule.condition = parse_paren_event();
                expect_punct("->", "'->' between condition and action");
                rule.action = parse_settings('(', ')', "the rule action");
                policy.rules.push_back(std::move(rule));
                ++index;
            }
            expect_punct("}", "'}' to close the policy");
            agent.policy = std::move(policy);
        } else {
            expect_punct(":", "':' after 'committed'");
            agent.committed = expect_bool("'true' or 'false'");
        }
    }
    if (!has_model) agent.subjective_model = scenario_.objective_model;
    return agent;
}

void Parser::parse_config() {
    std::set<std::string> seen;
    while (at_ident_of({"tau", "epsilon", "tolerance", "exclude_avoided_results",
                        "knowledge_mode", "reference_actions", "context_cap"})) {
        Token kw = next();
        if (!seen.insert(kw.text).second) {
            fail(kw.pos, "duplicate config key '" + kw.text + "'");
        }
        positions["config." + kw.text] = kw.pos;
        expect_punct(":", "':' after the config key");

        if (kw.text == "tau") {
            scenario_.config.tau = expect_number("a number").number;
        } else if (kw.text == "epsilon") {
            scenario_.config.epsilon = expect_number("a number").number;
        } else if (kw.text == "tolerance") {
            scenario_.config.tolerance = expect_number("a number").number;
        } else if (kw.text == "exclude_avoided_results") {
            scenario_.config.exclude_avoided_results = expect_bool("'true' or 'false'");
        } else if (kw.text == "knowledge_mode") {
            Token mode = expect_ident("a knowledge mode");
            auto parsed = knowledge_mode_from_string(mode.text);
            if (!parsed) fail(mode.pos, "unknown knowledge mode '" + mode.text + "'");
            scenario_.config.knowledge_mode = *parsed;
        } else if (kw.text == "context_cap") {
            Token n = expect_number("a positive integer");
            if (!(n.number >= 1.0) || n.number != std::floor(n.number) ||
                n.number > 9007199254740992.0) {
                fail(n.pos, "context_cap must be a positive integer", "bad-threshold");
            }
            scenario_.config.context_cap = static_cast<std::uint64_t>(n.number);
        } else {  // reference_actions
            expect_punct("[", "'[' to open the reference actions");
            std::vector<Intervention> refs;
            int index = 0;
            while (!at_punct("]")) {
                if (at_punct(",")) {
                    next();
                    continue;
                }
                positions["config.reference_actions[" + std::to_string(index) + "]"] = peek().pos;
                refs.push_back(parse_settings('(', ')', "a reference action"));
                ++index;
            }
            expect_punct("]", "']' to close the reference actions");
            scenario_.config.reference_actions = std::move(refs);
        }
    }
}

void Parser::parse_queries() {
    int index = 0;
    while (peek().kind == Token::Kind::Ident) {
        Token def = next();
        auto definition = definition_from_string(def.text);
        if (!definition) fail(def.pos, "unknown definition '" + def.text + "'");
        positions["queries[" + std::to_string(index) + "]"] = def.pos;

        Query q;
        q.definition = *definition;
        q.result = parse_bare_event();
        if (at_ident("with")) {
            next();
            q.action = parse_settings('(', ')', "the action override");
        }
        scenario_.queries.push_back(std::move(q));
        ++index;
    }
}

Scenario Parser::parse() {
    Token header = expect_ident("'format: 1' header");
    if (header.text != "format") fail(header.pos, "expected 'format: 1' header");
    expect_punct(":", "':' after 'format'");
    Token version = expect_number("the format version");
    if (version.number != 1.0) {
        fail(version.pos, "unsupported format version '" + version.text + "'");
    }

    static const char* kSections[] = {"model",    "agent",  "commission_agent", "performed",
                                      "plan",     "realized", "config",         "queries"};
    int last = -1;
    bool seen_model = false;
    bool seen_agent = false;
    while (peek().kind != Token::Kind::End) {
        Token head = expect_ident("a section name");
        int index = -1;
        for (int k = 0; k < 8; ++k) {
            if (head.text == kSections[k]) {
                index = k;
                break;
            }
        }
        if (index < 0) fail(head.pos, "unknown section '" + head.text + "'");
        if (index == last) fail(head.pos, "duplicate section '" + head.text + "'");
        if (index < last) fail(head.pos, "section '" + head.text + "' is out of order");
        if (index > 0 && !seen_model) fail(head.pos, "the 'model' section must come first");
        last = index;
        positions[head.text] = head.pos;
        expect_punct(":", "':' after the section name");

        switch (index) {
            case 0:
                scenario_.objective_model = parse_model("model");
                seen_model = true;
                break;
            case 1:
                scenario_.agent = parse_agent("agent");
                seen_agent = true;
                break;
            case 2: scenario_.commission_snapshot = parse_agent("commission_agent"); break;
            case 3: scenario_.performed = parse_settings('(', ')', "the performed actions"); break;
            case 4: scenario_.plan = parse_settings('(', ')', "the plan"); break;
            case 5: scenario_.realized = World{parse_settings('{', '}', "the realized world").settings}; break;
            case 6: parse_config(); break;
            case 7: parse_queries(); break;
        }
    }
    if (!seen_model) fail(peek().pos, "missing required section 'model'");
    // An absent agent section means the agent believes the world model.
    if (!seen_agent) scenario_.agent.subjective_model = scenario_.objective_model;
    return scenario_;
}

}  // namespace

std::string ParseError::render() const {
    return "error: " + code + " at " + std::to_string(line) + ":" + std::to_string(column) +
           ": " + message;
}

ParseResult parse_scenario(std::string_view text) {
    try {
        Parser parser(lex(text));
        Scenario scenario = parser.parse();
        if (auto error = detail::finish_validation(scenario, parser.positions)) return *error;
        return scenario;
    } catch (const ParseFail& f) {
        return f.error;
    }
}

}  // namespace intent
