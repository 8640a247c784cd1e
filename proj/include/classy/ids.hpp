#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace classy {

/// Fixed-universe bitset over instance ids.  All covers and cover
/// intersections in the library are computed on these; the universe is the
/// number of instances of the dataset the set refers to.  Bits beyond the
/// universe are kept zero so popcounts and comparisons stay word-wise.
class IdSet {
public:
    IdSet() = default;

    explicit IdSet(std::size_t universe)
        : words_((universe + 63) / 64, 0), universe_(universe) {}

    /// The set {0, ..., universe-1}.
    static IdSet full(std::size_t universe) {
        IdSet s(universe);
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    std::size_t universe() const { return universe_; }

    void set(std::size_t i) {
        assert(i < universe_);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(std::size_t i) {
        assert(i < universe_);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    bool test(std::size_t i) const {
        assert(i < universe_);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    IdSet& operator&=(const IdSet& o) {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    IdSet operator&(const IdSet& o) const {
        IdSet r = *this;
        r &= o;
        return r;
    }

    /// Remove every element of `o` from this set.
    IdSet& subtract(const IdSet& o) {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    /// |this ∩ o| without materializing the intersection.
    std::size_t intersection_count(const IdSet& o) const {
        assert(universe_ == o.universe_);
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            n += std::popcount(words_[i] & o.words_[i]);
        return n;
    }

    bool is_subset_of(const IdSet& o) const {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool operator==(const IdSet& o) const {
        return universe_ == o.universe_ && words_ == o.words_;
    }

    template <class F>
    void for_each(F f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                f(wi * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    std::vector<std::uint32_t> to_vector() const {
        std::vector<std::uint32_t> v;
        v.reserve(count());
        for_each([&](std::size_t i) { v.push_back(static_cast<std::uint32_t>(i)); });
        return v;
    }

private:
    void trim() {
        if (universe_ & 63) words_.back() &= (std::uint64_t{1} << (universe_ & 63)) - 1;
    }

    std::vector<std::uint64_t> words_;
    std::size_t universe_ = 0;
};

} // namespace classy
