#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace orchsim::serving {

struct Prompt {
    std::string prompt_id;
    std::vector<std::uint64_t> tokens;
};

struct CorpusSpec {
    enum class Mode { Synthetic, File };
    Mode mode = Mode::Synthetic;
    int prompts = 32;
    int mean_tokens = 8500;
    int jitter_tokens = 500;
    int repeats = 8;
    int max_output_tokens = 512;
    std::optional<int> fixed_output_tokens;
    std::string file_path;
};

struct PromptCorpus {
    std::vector<Prompt> prompts;
    int repeats = 8;
    int max_output_tokens = 512;
    std::optional<int> fixed_output_tokens;

    std::int64_t total_tokens() const;
};

// Token identities are synthesized deterministically from the prompt id, so
// prefix relations are exact and reproducible; ids are distinct, so prompts
// have disjoint prefixes. File mode (CSV: prompt_id,token_count) substitutes
// real token counts.
PromptCorpus build_corpus(const CorpusSpec& spec, RngStream& rng);

std::vector<std::uint64_t> synthesize_tokens(const std::string& prompt_id, int token_count);

}  // namespace orchsim::serving
