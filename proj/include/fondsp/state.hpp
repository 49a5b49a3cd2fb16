#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fondsp {

using AtomId = std::uint32_t;
using ActionId = std::uint32_t;

// Dense bitset over the atom table of one task. Two states compare equal
// only if they were created for the same atom count.
class State {
public:
    State() = default;
    explicit State(std::size_t num_atoms)
        : num_atoms_(num_atoms), words_((num_atoms + 63) / 64, 0) {}

    static State from_atoms(std::size_t num_atoms, std::span<const AtomId> atoms) {
        State s(num_atoms);
        for (AtomId a : atoms)
            s.set(a);
        return s;
    }

    std::size_t num_atoms() const { return num_atoms_; }

    bool contains(AtomId a) const {
        return (words_[a >> 6] >> (a & 63)) & 1U;
    }
    void set(AtomId a) { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
    void reset(AtomId a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }

    bool contains_all(std::span<const AtomId> atoms) const {
        for (AtomId a : atoms)
            if (!contains(a))
                return false;
        return true;
    }
    bool contains_none(std::span<const AtomId> atoms) const {
        for (AtomId a : atoms)
            if (contains(a))
                return false;
        return true;
    }

    // Grows the atom table; new atoms are false.
    void resize(std::size_t num_atoms) {
        num_atoms_ = num_atoms;
        words_.resize((num_atoms + 63) / 64, 0);
    }

    std::vector<AtomId> atoms() const {
        std::vector<AtomId> out;
        for (std::size_t i = 0; i < num_atoms_; ++i)
            if (contains(static_cast<AtomId>(i)))
                out.push_back(static_cast<AtomId>(i));
        return out;
    }

    std::size_t hash() const {
        std::size_t h = num_atoms_ * 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t w : words_)
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    friend bool operator==(const State &, const State &) = default;
    friend auto operator<=>(const State &a, const State &b) {
        if (auto c = a.num_atoms_ <=> b.num_atoms_; c != 0)
            return c;
        return a.words_ <=> b.words_;
    }

private:
    std::size_t num_atoms_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateHash {
    std::size_t operator()(const State &s) const { return s.hash(); }
};

}  // namespace fondsp
