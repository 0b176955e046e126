#include "serving/prefix_cache.hpp"

#include <stdexcept>

#include "core/hash.hpp"

namespace orchsim::serving {

std::vector<std::uint64_t> block_chain_keys(std::span<const std::uint64_t> tokens,
                                            int block_size) {
    const std::size_t full_blocks = tokens.size() / static_cast<std::size_t>(block_size);
    std::vector<std::uint64_t> keys;
    keys.reserve(full_blocks);
    std::uint64_t chain = 0x6f72636873696dull;  // chain root seed
    for (std::size_t b = 0; b < full_blocks; ++b) {
        std::uint64_t h = kFnvOffset;
        for (std::size_t i = 0; i < static_cast<std::size_t>(block_size); ++i) {
            h = fnv1a64(tokens[b * static_cast<std::size_t>(block_size) + i], h);
        }
        chain = mix64(chain ^ h);
        if (chain == 0) {
            chain = 1;  // 0 is the root sentinel
        }
        keys.push_back(chain);
    }
    return keys;
}

PrefixCacheIndex::PrefixCacheIndex(std::int64_t capacity_tokens, int block_size)
    : capacity_tokens_(capacity_tokens), block_size_(block_size) {
    if (capacity_tokens < block_size || block_size < 1) {
        throw std::invalid_argument("PrefixCacheIndex: capacity must hold at least one block");
    }
    capacity_blocks_ = static_cast<std::size_t>(capacity_tokens / block_size);
}

std::int64_t PrefixCacheIndex::match_tokens(std::span<const std::uint64_t> tokens) const {
    const std::vector<std::uint64_t> keys = block_chain_keys(tokens, block_size_);
    std::size_t resident = 0;
    for (std::uint64_t key : keys) {
        if (entries_.find(key) == entries_.end()) {
            break;
        }
        ++resident;
    }
    return static_cast<std::int64_t>(resident) * block_size_;
}

void PrefixCacheIndex::touch(std::uint64_t key, Entry& entry, TimeMs now) {
    if (entry.child_count == 0) {
        leaves_.erase(LeafKey{entry.last_used, entry.seq, key});
        entry.last_used = now;
        leaves_.insert(LeafKey{entry.last_used, entry.seq, key});
    } else {
        entry.last_used = now;
    }
}

bool PrefixCacheIndex::evict_lru_leaf(std::uint64_t protected_key) {
    for (auto it = leaves_.begin(); it != leaves_.end(); ++it) {
        const std::uint64_t key = std::get<2>(*it);
        if (key == protected_key) {
            continue;  // never evict the tail of the chain being inserted
        }
        const Entry entry = entries_.at(key);
        leaves_.erase(it);
        entries_.erase(key);
        if (entry.parent != 0) {
            auto parent_it = entries_.find(entry.parent);
            if (parent_it == entries_.end()) {
                throw std::logic_error("PrefixCacheIndex: resident block lost its parent");
            }
            if (--parent_it->second.child_count == 0) {
                leaves_.insert(LeafKey{parent_it->second.last_used, parent_it->second.seq,
                                       entry.parent});
            }
        }
        ++total_evictions_;
        return true;
    }
    return false;
}

std::size_t PrefixCacheIndex::insert(std::span<const std::uint64_t> tokens, TimeMs now) {
    std::vector<std::uint64_t> keys = block_chain_keys(tokens, block_size_);
    if (keys.size() > capacity_blocks_) {
        keys.resize(capacity_blocks_);  // head-preserving truncation
        ++truncated_inserts_;
    }

    std::size_t evicted = 0;
    std::uint64_t parent = 0;
    std::size_t i = 0;
    // refresh the already-resident prefix
    for (; i < keys.size(); ++i) {
        auto it = entries_.find(keys[i]);
        if (it == entries_.end()) {
            break;
        }
        touch(keys[i], it->second, now);
        parent = keys[i];
    }
    // append the rest, evicting as needed
    for (; i < keys.size(); ++i) {
        while (entries_.size() >= capacity_blocks_) {
            if (!evict_lru_leaf(parent)) {
                ++truncated_inserts_;
                return evicted;  // nothing evictable but our own tail
            }
            ++evicted;
        }
        Entry entry;
        entry.parent = parent;
        entry.child_count = 0;
        entry.last_used = now;
        entry.seq = next_seq_++;
        if (parent != 0) {
            auto parent_it = entries_.find(parent);
            if (parent_it->second.child_count++ == 0) {
                leaves_.erase(LeafKey{parent_it->second.last_used, parent_it->second.seq, parent});
            }
        }
        entries_.emplace(keys[i], entry);
        leaves_.insert(LeafKey{entry.last_used, entry.seq, keys[i]});
        parent = keys[i];
    }
    return evicted;
}

void PrefixCacheIndex::check_invariants() const {
    if (resident_tokens() > capacity_tokens_) {
        throw std::logic_error("PrefixCacheIndex: capacity exceeded");
    }
    std::unordered_map<std::uint64_t, int> child_counts;
    for (const auto& [key, entry] : entries_) {
        if (entry.parent != 0) {
            auto parent_it = entries_.find(entry.parent);
            if (parent_it == entries_.end()) {
                throw std::logic_error("PrefixCacheIndex: prefix property violated");
            }
            child_counts[entry.parent] += 1;
            if (parent_it->second.last_used < entry.last_used) {
                throw std::logic_error("PrefixCacheIndex: parent older than child");
            }
        }
    }
    std::size_t leaf_count = 0;
    for (const auto& [key, entry] : entries_) {
        const int expected = entry.child_count;
        auto it = child_counts.find(key);
        const int actual = it == child_counts.end() ? 0 : it->second;
        if (expected != actual) {
            throw std::logic_error("PrefixCacheIndex: child count diverged");
        }
        if (expected == 0) {
            ++leaf_count;
            if (leaves_.find(LeafKey{entry.last_used, entry.seq, key}) == leaves_.end()) {
                throw std::logic_error("PrefixCacheIndex: leaf missing from eviction index");
            }
        }
    }
    if (leaf_count != leaves_.size()) {
        throw std::logic_error("PrefixCacheIndex: eviction index holds non-leaves");
    }
}

}  // namespace orchsim::serving
