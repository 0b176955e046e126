#pragma once
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "core/time.hpp"

namespace orchsim::serving {

// Chain keys for the full blocks of a token sequence. Key k hashes block k's
// tokens into the predecessor's key, so two sequences share key prefixes
// exactly as far as their token prefixes agree (in whole blocks).
std::vector<std::uint64_t> block_chain_keys(std::span<const std::uint64_t> tokens,
                                            int block_size);

// Block-granular KV prefix cache for one replica.
//
// Residency respects the prefix property: a block is resident only while its
// predecessor in the chain is. Eviction is least-recently-used over blocks
// with no resident successor, which removes chains suffix-first and keeps the
// resident set prefix-closed by construction.
class PrefixCacheIndex {
public:
    PrefixCacheIndex(std::int64_t capacity_tokens, int block_size);

    int block_size() const { return block_size_; }
    std::int64_t capacity_tokens() const { return capacity_tokens_; }
    std::int64_t resident_tokens() const {
        return static_cast<std::int64_t>(entries_.size()) * block_size_;
    }
    std::size_t resident_blocks() const { return entries_.size(); }

    // Longest resident chain prefix for these tokens, in tokens (block
    // multiples; never exceeds the token count).
    std::int64_t match_tokens(std::span<const std::uint64_t> tokens) const;

    // Makes all full blocks resident with last_used = now, evicting LRU
    // blocks as needed. A sequence longer than capacity is inserted truncated
    // (head-preserving) and counted in truncated_inserts(). Returns the
    // number of blocks evicted.
    std::size_t insert(std::span<const std::uint64_t> tokens, TimeMs now);

    std::uint64_t truncated_inserts() const { return truncated_inserts_; }
    std::uint64_t total_evictions() const { return total_evictions_; }

    void check_invariants() const;

private:
    struct Entry {
        std::uint64_t parent = 0;  // 0 = chain root
        int child_count = 0;
        TimeMs last_used = 0;
        std::uint64_t seq = 0;
    };

    using LeafKey = std::tuple<TimeMs, std::uint64_t, std::uint64_t>;  // (last_used, seq, block)

    void touch(std::uint64_t key, Entry& entry, TimeMs now);
    bool evict_lru_leaf(std::uint64_t protected_key);

    std::int64_t capacity_tokens_;
    int block_size_;
    std::size_t capacity_blocks_;
    std::unordered_map<std::uint64_t, Entry> entries_;
    std::set<LeafKey> leaves_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t truncated_inserts_ = 0;
    std::uint64_t total_evictions_ = 0;
};

}  // namespace orchsim::serving
