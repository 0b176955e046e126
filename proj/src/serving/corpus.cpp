#include "serving/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/hash.hpp"

namespace orchsim::serving {

std::int64_t PromptCorpus::total_tokens() const {
    std::int64_t total = 0;
    for (const Prompt& p : prompts) {
        total += static_cast<std::int64_t>(p.tokens.size());
    }
    return total;
}

std::vector<std::uint64_t> synthesize_tokens(const std::string& prompt_id, int token_count) {
    const std::uint64_t base = fnv1a64(prompt_id);
    std::vector<std::uint64_t> tokens(static_cast<std::size_t>(token_count));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        tokens[i] = mix64(base + i);
    }
    return tokens;
}

PromptCorpus build_corpus(const CorpusSpec& spec, RngStream& rng) {
    if (spec.repeats < 1 || spec.max_output_tokens < 1) {
        throw std::invalid_argument("corpus: repeats and max_output_tokens must be positive");
    }
    if (spec.fixed_output_tokens &&
        (*spec.fixed_output_tokens < 1 || *spec.fixed_output_tokens > spec.max_output_tokens)) {
        throw std::invalid_argument("corpus: fixed_output_tokens out of range");
    }

    PromptCorpus corpus;
    corpus.repeats = spec.repeats;
    corpus.max_output_tokens = spec.max_output_tokens;
    corpus.fixed_output_tokens = spec.fixed_output_tokens;

    if (spec.mode == CorpusSpec::Mode::File) {
        std::ifstream in(spec.file_path);
        if (!in) {
            throw std::runtime_error("cannot open corpus file: " + spec.file_path);
        }
        std::string line;
        if (!std::getline(in, line) || line != "prompt_id,token_count") {
            throw std::runtime_error("corpus file " + spec.file_path +
                                     ": expected header 'prompt_id,token_count'");
        }
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            std::istringstream row(line);
            std::string id, count;
            if (!std::getline(row, id, ',') || !std::getline(row, count, ',')) {
                throw std::runtime_error("corpus file " + spec.file_path + ": malformed row '" +
                                         line + "'");
            }
            const int tokens = std::stoi(count);
            if (tokens < 1) {
                throw std::runtime_error("corpus file " + spec.file_path +
                                         ": non-positive token count for " + id);
            }
            corpus.prompts.push_back(Prompt{id, synthesize_tokens(id, tokens)});
        }
        if (corpus.prompts.empty()) {
            throw std::runtime_error("corpus file " + spec.file_path + ": no prompts");
        }
        return corpus;
    }

    if (spec.prompts < 1 || spec.mean_tokens < 1 || spec.jitter_tokens < 0 ||
        spec.jitter_tokens >= spec.mean_tokens) {
        throw std::invalid_argument("corpus: invalid synthetic parameters");
    }
    for (int i = 0; i < spec.prompts; ++i) {
        const std::string id = "prompt-" + std::to_string(i);
        const int tokens = static_cast<int>(rng.uniform_int(spec.mean_tokens - spec.jitter_tokens,
                                                            spec.mean_tokens + spec.jitter_tokens));
        corpus.prompts.push_back(Prompt{id, synthesize_tokens(id, tokens)});
    }
    return corpus;
}

}  // namespace orchsim::serving
