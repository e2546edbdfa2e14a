#include "cbm/component_set.hpp"

#include <gtest/gtest.h>

#include <set>

using cbm::ComponentSet;

TEST(ComponentSet, AlgebraMatchesStdSet) {
    for (std::size_t n : {5u, 64u, 65u, 130u}) {
        ComponentSet a(n), b(n);
        std::set<std::size_t> sa, sb;
        for (std::size_t i = 0; i < n; i += 3) {
            a.insert(i);
            sa.insert(i);
        }
        for (std::size_t i = 1; i < n; i += 2) {
            b.insert(i);
            sb.insert(i);
        }
        auto u = a;
        u |= b;
        auto in = a;
        in &= b;
        auto d = a;
        d -= b;
        std::size_t cu = 0, ci = 0, cd = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool ia = sa.count(i), ib = sb.count(i);
            EXPECT_EQ(u.contains(i), ia || ib);
            EXPECT_EQ(in.contains(i), ia && ib);
            EXPECT_EQ(d.contains(i), ia && !ib);
            cu += ia || ib;
            ci += ia && ib;
            cd += ia && !ib;
        }
        EXPECT_EQ(u.count(), cu);
        EXPECT_EQ(in.count(), ci);
        EXPECT_EQ(d.count(), cd);
        EXPECT_EQ(a.complement().count(), n - a.count());
        EXPECT_TRUE(in.is_subset_of(a));
        EXPECT_TRUE(ComponentSet::full(n).complement().empty());
    }
}

TEST(ComponentSet, MaskAndIndices) {
    const auto s = ComponentSet::from_mask(6, 0b101010);
    EXPECT_EQ(s.indices(), (std::vector<std::size_t>{1, 3, 5}));
    EXPECT_EQ(s.mask(), 0b101010u);
    EXPECT_EQ(s.to_string(), "{2,4,6}");
    EXPECT_EQ(ComponentSet::from_indices(6, {1, 3, 5}), s);
    EXPECT_THROW(ComponentSet(3).insert(3), std::out_of_range);
}

TEST(Combinations, CountsAndLexicographicOrder) {
    const std::vector<std::size_t> pool{2, 4, 7, 9, 11};
    std::vector<std::vector<std::size_t>> seen;
    cbm::for_each_combination(pool, 3, [&](const std::vector<std::size_t>& c) {
        seen.push_back(c);
        return true;
    });
    ASSERT_EQ(seen.size(), 10u);
    EXPECT_EQ(seen.front(), (std::vector<std::size_t>{2, 4, 7}));
    EXPECT_EQ(seen[1], (std::vector<std::size_t>{2, 4, 9}));
    EXPECT_EQ(seen.back(), (std::vector<std::size_t>{7, 9, 11}));
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));

    for (std::size_t n = 1; n <= 12; ++n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        std::size_t total = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            cbm::for_each_combination(p, k, [&](const std::vector<std::size_t>&) {
                ++total;
                return true;
            });
        }
        EXPECT_EQ(total, (std::size_t{1} << n) - 1);
    }
}

TEST(Combinations, EarlyStop) {
    std::size_t calls = 0;
    const bool done = cbm::for_each_combination({0, 1, 2, 3}, 2, [&](const std::vector<std::size_t>&) {
        return ++calls < 3;
    });
    EXPECT_FALSE(done);
    EXPECT_EQ(calls, 3u);
}
