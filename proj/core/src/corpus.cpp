#include "intent/corpus.hpp"

#include <json.hpp>

namespace intent {

namespace {

std::vector<CorpusEntry> load_entries() {
    std::vector<CorpusEntry> entries;
    auto embed_corpus_entry = [&entries](const char* name, const char* document,
                                         const char* expected_json) {
        CorpusEntry e{name, document, expected_json, false};
        auto expected = nlohmann::json::parse(e.expected_json);
        e.capacity_flagged = expected.value("capacity_flagged", false);
        entries.push_back(std::move(e));
    };
#include "corpus_data.inc"
    return entries;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = load_entries();
    return entries;
}

}  // namespace intent
