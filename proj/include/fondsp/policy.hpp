#pragma once

#include "fondsp/grounder.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fondsp {

// Mapping from unique states to ground non-deterministic actions.
class Policy {
public:
    // Inserts or overwrites the action for `state`.
    void set(const State &state, ActionId action) { map_[state] = action; }
    bool erase(const State &state) { return map_.erase(state) > 0; }

    std::optional<ActionId> action(const State &state) const {
        auto it = map_.find(state);
        if (it == map_.end())
            return std::nullopt;
        return it->second;
    }
    bool contains(const State &state) const { return map_.contains(state); }
    std::size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }

    auto begin() const { return map_.begin(); }
    auto end() const { return map_.end(); }

    // Entries ordered by state, for stable output.
    std::vector<std::pair<State, ActionId>> sorted_entries() const {
        std::vector<std::pair<State, ActionId>> out(map_.begin(), map_.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const Policy &, const Policy &) = default;

private:
    std::unordered_map<State, ActionId, StateHash> map_;
};

}  // namespace fondsp
