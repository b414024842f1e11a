#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "stabcut/rayshoot.hpp"

using namespace stabcut;

namespace {

// linear-scan reference
struct scan_oracle {
    std::vector<ray_segment> segs;
    std::vector<char> dead;

    std::optional<ray_hit> first_hit(coord at, coord from, bool increasing) const {
        std::optional<ray_hit> best;
        for (std::uint32_t i = 0; i < segs.size(); ++i) {
            if (dead[i]) continue;
            const auto& s = segs[i];
            bool contains = s.open ? (s.lo < at && at < s.hi) : (s.lo <= at && at <= s.hi);
            if (!contains) continue;
            if (increasing ? s.line <= from : s.line >= from) continue;
            if (!best || (increasing ? s.line < best->line : s.line > best->line))
                best = ray_hit{s.line, i};
        }
        return best;
    }
};

std::vector<ray_segment> random_disjoint(std::mt19937_64& rng, int n) {
    // segments on distinct lines are trivially disjoint
    std::vector<ray_segment> segs;
    for (int i = 0; i < n; ++i) {
        coord lo = static_cast<coord>(rng() % 200);
        coord hi = lo + 1 + static_cast<coord>(rng() % 50);
        segs.push_back({static_cast<coord>(i) * 3 + static_cast<coord>(rng() % 3), lo, hi,
                        (rng() & 1) != 0});
    }
    return segs;
}

}  // namespace

TEST_CASE("empty store answers nothing") {
    ray_shooter rs(std::vector<ray_segment>{});
    CHECK_FALSE(rs.first_hit(5, 0, true).has_value());
}

TEST_CASE("basic hit and start-point exclusion") {
    // one vertical-style segment on line 0 spanning [0,2]
    ray_shooter rs({{0, 0, 2, false}, {4, 0, 2, false}});
    auto hit = rs.first_hit(1, 2, false);
    REQUIRE(hit);
    CHECK(hit->line == 0);
    // a ray starting exactly on a stored segment reports the next one
    auto next = rs.first_hit(1, 0, true);
    REQUIRE(next);
    CHECK(next->line == 4);
}

TEST_CASE("open spans exclude their endpoints") {
    ray_shooter rs({{3, 0, 2, true}});
    CHECK_FALSE(rs.first_hit(0, 0, true).has_value());
    CHECK_FALSE(rs.first_hit(2, 0, true).has_value());
    CHECK(rs.first_hit(1, 0, true).has_value());
}

TEST_CASE("delete removes segments; double delete is an error") {
    ray_shooter rs({{0, 0, 2, false}, {4, 0, 2, false}});
    auto hit = rs.first_hit(1, -1, true);
    REQUIRE(hit);
    rs.erase(hit->id);
    auto next = rs.first_hit(1, -1, true);
    REQUIRE(next);
    CHECK(next->line == 4);
    rs.erase(next->id);
    CHECK_FALSE(rs.first_hit(1, -1, true).has_value());
    CHECK_THROWS_AS(rs.erase(next->id), std::invalid_argument);
}

TEST_CASE("intersecting input is rejected") {
    CHECK_THROWS_AS(ray_shooter({{0, 0, 4, false}, {0, 2, 6, false}}), std::invalid_argument);
    // touching closed endpoints also intersect
    CHECK_THROWS_AS(ray_shooter({{0, 0, 2, false}, {0, 2, 4, false}}), std::invalid_argument);
    // open endpoints may touch
    CHECK_NOTHROW(ray_shooter({{0, 0, 2, true}, {0, 2, 4, false}}));
}

TEST_CASE("fuzz against the linear-scan oracle") {
    std::mt19937_64 rng(20240817);
    for (int round = 0; round < 20; ++round) {
        int n = 1 + static_cast<int>(rng() % 120);
        auto segs = random_disjoint(rng, n);
        ray_shooter rs(segs);
        scan_oracle oracle{segs, std::vector<char>(segs.size(), 0)};
        for (int op = 0; op < 500; ++op) {
            if (rng() % 4 == 0 && rs.alive() > 0) {
                std::uint32_t id = static_cast<std::uint32_t>(rng() % segs.size());
                if (!rs.erased(id)) {
                    rs.erase(id);
                    oracle.dead[id] = 1;
                    continue;
                }
            }
            coord at = static_cast<coord>(rng() % 260);
            coord from = static_cast<coord>(rng() % (3 * n + 2)) - 1;
            bool inc = (rng() & 1) != 0;
            auto got = rs.first_hit(at, from, inc);
            auto want = oracle.first_hit(at, from, inc);
            REQUIRE(got.has_value() == want.has_value());
            if (got) CHECK(got->line == want->line);
        }
    }
}
