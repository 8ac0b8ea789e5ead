#include <catch2/catch_amalgamated.hpp>

#include "gridsym/core.hpp"

using namespace gridsym;

TEST_CASE("lex_compare follows the first differing component") {
    CHECK(lex_compare({1, 2}, {1, 3}) == Ordering::Less);
    CHECK(lex_compare({2, 0}, {1, 9}) == Ordering::Greater);
    CHECK(lex_compare({3, 3}, {3, 3}) == Ordering::Equal);
    CHECK_THROWS_AS(lex_compare({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("directions_of enumerates sign classes modulo negation") {
    auto one = directions_of({1, 0});
    REQUIRE(one.size() == 1);
    CHECK(one[0].positive() == MultiIndex{1, 0});
    CHECK(one[0].negative() == MultiIndex{-1, 0});

    auto two = directions_of({1, 1});
    REQUIRE(two.size() == 2);
    CHECK(two[0].contains({1, 1}));
    CHECK(two[0].contains({-1, -1}));
    CHECK(two[1].contains({1, -1}));
    CHECK(two[1].contains({-1, 1}));

    auto three = directions_of({2, 0, 3});
    REQUIRE(three.size() == 2);
    CHECK(three[0].positive() == MultiIndex{2, 0, 3});
    CHECK(three[1].positive() == MultiIndex{2, 0, -3});

    CHECK_THROWS_AS(directions_of({0, 0}), std::invalid_argument);
}

TEST_CASE("directions_of partitions all sign variants into pairs") {
    // brute force: every sign variant of t belongs to exactly one class
    const MultiIndex t{1, 2, 3};
    auto classes = directions_of(t);
    CHECK(classes.size() == 4);  // 2^(3-1)
    std::vector<MultiIndex> variants;
    for (int s0 : {1, -1})
        for (int s1 : {1, -1})
            for (int s2 : {1, -1}) variants.push_back({s0 * 1, s1 * 2, s2 * 3});
    for (const auto& v : variants) {
        int hits = 0;
        for (const auto& c : classes)
            if (c.contains(v)) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("flatten maps the box onto 0..size-1 in lex order") {
    IndexRange r({3, 3});
    CHECK(r.flatten({1, 1}) == 0);
    CHECK(r.flatten({1, 2}) == 1);
    CHECK(r.flatten({3, 3}) == 8);
    CHECK_THROWS_AS(r.flatten({0, 1}), std::out_of_range);
    CHECK_THROWS_AS(r.unflatten(9), std::out_of_range);
}

TEST_CASE("flatten/unflatten round trip and ordered enumeration") {
    std::uint64_t seed = 12345;
    auto next = [&seed]() {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        return seed;
    };
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = 1 + next() % 3;
        MultiIndex n(d);
        for (auto& v : n) v = 1 + static_cast<std::int64_t>(next() % 6);
        IndexRange r(n);
        for (std::int64_t lin = 0; lin < r.size(); ++lin) CHECK(r.flatten(r.unflatten(lin)) == lin);

        MultiIndex prev;
        std::int64_t count = 0;
        r.for_each([&](const MultiIndex& k) {
            if (!prev.empty()) CHECK(lex_compare(prev, k) == Ordering::Less);
            prev = k;
            ++count;
        });
        CHECK(count == r.size());
    }
}

TEST_CASE("componentwise index helpers") {
    const MultiIndex a{3, -1}, b{1, 4};
    CHECK(a + b == MultiIndex{4, 3});
    CHECK(a - b == MultiIndex{2, -5});
    CHECK(abs(a) == MultiIndex{3, 1});
    CHECK(hadamard(a, b) == MultiIndex{3, -4});
    CHECK(componentwise_leq({1, 1}, {1, 2}));
    CHECK_FALSE(componentwise_leq({2, 1}, {1, 2}));
}
