#pragma once

// The scenarios shipped with the library, embedded at build time together
// with their expected verdicts so `intentcheck corpus` needs no file paths.

#include <string>
#include <vector>

namespace intent {

struct CorpusEntry {
    std::string name;
    std::string document;       // .intent text, parseable by parse_scenario
    std::string expected_json;  // expected capacity flag and clause outcomes
    bool capacity_flagged = false;  // deliberately fails a capacity requirement
};

const std::vector<CorpusEntry>& corpus();

}  // namespace intent
