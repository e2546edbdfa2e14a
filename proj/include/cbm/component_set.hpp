// Fixed-universe bitset over component indices.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbm {

/**
 * @brief Set of component indices drawn from {0, ..., n-1}.
 *
 * Storage is one 64-bit word per 64 components, so systems with n <= 64 are
 * a single machine word and all set algebra is constant time. Larger systems
 * fall back to a word array. Indices are 0-based; files and printed tables
 * use 1-based component ids.
 */
class ComponentSet {
public:
    ComponentSet() = default;

    explicit ComponentSet(std::size_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}

    static ComponentSet full(std::size_t universe) {
        ComponentSet s(universe);
        for (std::size_t w = 0; w < s.words_.size(); ++w) {
            s.words_[w] = ~std::uint64_t{0};
        }
        s.trim();
        return s;
    }

    static ComponentSet from_mask(std::size_t universe, std::uint64_t mask) {
        if (universe > 64) {
            throw std::invalid_argument("from_mask requires a universe of at most 64");
        }
        ComponentSet s(universe);
        if (!s.words_.empty()) {
            s.words_[0] = mask;
        }
        s.trim();
        return s;
    }

    static ComponentSet from_indices(std::size_t universe, const std::vector<std::size_t>& idx) {
        ComponentSet s(universe);
        for (auto i : idx) {
            s.insert(i);
        }
        return s;
    }

    std::size_t universe() const { return universe_; }

    bool contains(std::size_t i) const {
        return i < universe_ && ((words_[i / 64] >> (i % 64)) & 1U) != 0;
    }

    void insert(std::size_t i) {
        check(i);
        words_[i / 64] |= std::uint64_t{1} << (i % 64);
    }

    void erase(std::size_t i) {
        check(i);
        words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    bool empty() const {
        for (auto w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    /// Low word; only meaningful as the whole set when universe() <= 64.
    std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

    bool is_subset_of(const ComponentSet& other) const {
        same_universe(other);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if ((words_[w] & ~other.words_[w]) != 0) {
                return false;
            }
        }
        return true;
    }

    bool intersects(const ComponentSet& other) const {
        same_universe(other);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if ((words_[w] & other.words_[w]) != 0) {
                return true;
            }
        }
        return false;
    }

    ComponentSet& operator|=(const ComponentSet& o) {
        same_universe(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }
    ComponentSet& operator&=(const ComponentSet& o) {
        same_universe(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }
    /// Set difference.
    ComponentSet& operator-=(const ComponentSet& o) {
        same_universe(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
        return *this;
    }

    friend ComponentSet operator|(ComponentSet a, const ComponentSet& b) { return a |= b; }
    friend ComponentSet operator&(ComponentSet a, const ComponentSet& b) { return a &= b; }
    friend ComponentSet operator-(ComponentSet a, const ComponentSet& b) { return a -= b; }

    /// Complement within the universe.
    ComponentSet complement() const {
        ComponentSet c(universe_);
        for (std::size_t w = 0; w < words_.size(); ++w) c.words_[w] = ~words_[w];
        c.trim();
        return c;
    }

    friend bool operator==(const ComponentSet&, const ComponentSet&) = default;

    /// Members in ascending order.
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits != 0) {
                auto b = static_cast<std::size_t>(std::countr_zero(bits));
                out.push_back(w * 64 + b);
                bits &= bits - 1;
            }
        }
        return out;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits != 0) {
                auto b = static_cast<std::size_t>(std::countr_zero(bits));
                fn(w * 64 + b);
                bits &= bits - 1;
            }
        }
    }

    /// Brace list of 1-based ids, e.g. "{1,3}".
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for_each([&](std::size_t i) {
            if (!first) s += ',';
            s += std::to_string(i + 1);
            first = false;
        });
        return s + "}";
    }

private:
    void check(std::size_t i) const {
        if (i >= universe_) {
            throw std::out_of_range("component index " + std::to_string(i) +
                                    " outside universe of " + std::to_string(universe_));
        }
    }

    void same_universe(const ComponentSet& o) const {
        if (o.universe_ != universe_) {
            throw std::invalid_argument("component sets over different universes");
        }
    }

    void trim() {
        if (universe_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
        }
    }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

/**
 * @brief Visit every k-subset of `pool` in lexicographic order of positions.
 *
 * `fn` receives a span-like `const std::vector<std::size_t>&` of members and
 * returns false to stop early. Returns false if stopped early.
 */
template <class Fn>
bool for_each_combination(const std::vector<std::size_t>& pool, std::size_t k, Fn&& fn) {
    const std::size_t n = pool.size();
    if (k == 0 || k > n) {
        return true;
    }
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    std::vector<std::size_t> members(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) members[i] = pool[pos[i]];
        if (!fn(static_cast<const std::vector<std::size_t>&>(members))) {
            return false;
        }
        std::size_t i = k;
        while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) {
            return true;
        }
        ++pos[i - 1];
        for (std::size_t t = i; t < k; ++t) pos[t] = pos[t - 1] + 1;
    }
}

}  // namespace cbm
