#ifndef STABCUT_RAYSHOOT_HPP
#define STABCUT_RAYSHOOT_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stabcut/core.hpp"

namespace stabcut {

// Deletable orthogonal ray shooting over disjoint parallel segments.
//
// The structure is axis-agnostic: a stored segment lies on `line` (its
// perpendicular coordinate) and spans lo..hi along the other axis; `open`
// selects (lo,hi) versus [lo,hi]. A query shoots from (at, from_line) towards
// increasing or decreasing line values and reports the first segment whose
// span contains `at`. The start line itself is excluded, so a ray starting on
// a stored segment reports the next one behind it.
//
// Implementation: a static segment tree over the span axis (leaves alternate
// endpoint values and the gaps between them, so open/closed spans and integer
// query coordinates are handled exactly); each node keeps its segments sorted
// by line with union-find successor/predecessor skipping over deleted
// entries. Query and delete cost O(log^2 n) amortized.

struct ray_segment {
    coord line = 0;
    coord lo = 0;
    coord hi = 0;
    bool open = false;
    auto operator<=>(const ray_segment&) const = default;
};

struct ray_hit {
    coord line = 0;
    std::uint32_t id = 0;
};

class ray_shooter {
public:
    ray_shooter() = default;

    explicit ray_shooter(std::vector<ray_segment> segs) : segs_(std::move(segs)) {
        for (const auto& s : segs_) {
            if (s.lo >= s.hi) throw std::invalid_argument("ray_shooter: empty span");
        }
        check_disjoint();
        build();
    }

    std::size_t size() const { return segs_.size(); }
    std::size_t alive() const { return alive_; }
    bool erased(std::uint32_t id) const { return dead_.at(id); }
    const ray_segment& segment(std::uint32_t id) const { return segs_.at(id); }

    void erase(std::uint32_t id) {
        if (id >= segs_.size()) throw std::invalid_argument("ray_shooter: bad id");
        if (dead_[id]) throw std::invalid_argument("ray_shooter: double delete");
        dead_[id] = true;
        --alive_;
        for (auto [n, pos] : id_slots_[id]) {
            node& nd = nodes_[n];
            nd.nxt[pos] = pos + 1;
            // prv slot pos+1 no longer points at pos; find_prev path-compresses the rest
            nd.prv[pos + 1] = pos == 0 ? kNone : pos - 1;
        }
    }

    // First alive segment hit by the ray from (at, from_line).
    std::optional<ray_hit> first_hit(coord at, coord from_line, bool increasing) const {
        if (coords_.empty()) return std::nullopt;
        int leaf = leaf_for(at);
        if (leaf < 0) return std::nullopt;
        std::optional<ray_hit> best;
        std::size_t pos = 1;
        std::size_t l = 0, r = leaf_count_ - 1;
        while (true) {
            scan_node(nodes_[pos], from_line, increasing, best);
            if (l == r) break;
            std::size_t mid = (l + r) / 2;
            if (static_cast<std::size_t>(leaf) <= mid) {
                pos = 2 * pos;
                r = mid;
            } else {
                pos = 2 * pos + 1;
                l = mid + 1;
            }
        }
        return best;
    }

private:
    struct node {
        std::vector<std::pair<coord, std::uint32_t>> items;  // sorted by (line,id)
        // nxt[i]: smallest alive index >= i (items.size() if none)
        // prv[i]: largest alive index < i, stored shifted: prv[i+1], with prv[0] = none
        mutable std::vector<std::uint32_t> nxt;
        mutable std::vector<std::uint32_t> prv;
    };

    static constexpr std::uint32_t kNone = 0xffffffffu;

    void check_disjoint() const {
        std::vector<std::uint32_t> order(segs_.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::tie(segs_[a].line, segs_[a].lo) < std::tie(segs_[b].line, segs_[b].lo);
        });
        for (std::size_t i = 1; i < order.size(); ++i) {
            const auto& a = segs_[order[i - 1]];
            const auto& b = segs_[order[i]];
            if (a.line != b.line) continue;
            if (b.lo < a.hi || (b.lo == a.hi && !a.open && !b.open))
                throw std::invalid_argument("ray_shooter: intersecting segments");
        }
    }

    void build() {
        coords_.reserve(segs_.size() * 2);
        for (const auto& s : segs_) {
            coords_.push_back(s.lo);
            coords_.push_back(s.hi);
        }
        std::sort(coords_.begin(), coords_.end());
        coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
        leaf_count_ = coords_.empty() ? 1 : coords_.size() * 2 - 1;
        nodes_.assign(4 * leaf_count_ + 4, node{});
        dead_.assign(segs_.size(), false);
        id_slots_.assign(segs_.size(), {});
        alive_ = segs_.size();
        std::vector<std::vector<std::uint32_t>> node_ids(nodes_.size());
        for (std::uint32_t i = 0; i < segs_.size(); ++i) {
            const auto& s = segs_[i];
            long long a = 2 * static_cast<long long>(value_index(s.lo));
            long long b = 2 * static_cast<long long>(value_index(s.hi));
            if (s.open) {
                ++a;
                --b;
            }
            if (a > b) continue;
            place(1, 0, leaf_count_ - 1, static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                  i, node_ids);
        }
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            node& nd = nodes_[n];
            if (node_ids[n].empty()) continue;
            nd.items.reserve(node_ids[n].size());
            for (std::uint32_t id : node_ids[n]) nd.items.emplace_back(segs_[id].line, id);
            std::sort(nd.items.begin(), nd.items.end());
            nd.nxt.resize(nd.items.size() + 1);
            nd.prv.resize(nd.items.size() + 1);
            for (std::uint32_t i = 0; i <= nd.items.size(); ++i) {
                nd.nxt[i] = i;
                nd.prv[i] = i == 0 ? kNone : i - 1;
            }
            for (std::uint32_t i = 0; i < nd.items.size(); ++i)
                id_slots_[nd.items[i].second].emplace_back(static_cast<std::uint32_t>(n), i);
        }
    }

    std::size_t value_index(coord v) const {
        return static_cast<std::size_t>(
            std::lower_bound(coords_.begin(), coords_.end(), v) - coords_.begin());
    }

    // leaf 2i is the point coords_[i], leaf 2i+1 the open gap after it
    int leaf_for(coord at) const {
        auto it = std::lower_bound(coords_.begin(), coords_.end(), at);
        if (it != coords_.end() && *it == at)
            return static_cast<int>(2 * (it - coords_.begin()));
        if (it == coords_.begin() || it == coords_.end()) return -1;
        return static_cast<int>(2 * (it - coords_.begin() - 1) + 1);
    }

    void place(std::size_t pos, std::size_t l, std::size_t r, std::size_t a, std::size_t b,
               std::uint32_t id, std::vector<std::vector<std::uint32_t>>& node_ids) {
        if (b < l || r < a) return;
        if (a <= l && r <= b) {
            node_ids[pos].push_back(id);
            return;
        }
        std::size_t mid = (l + r) / 2;
        place(2 * pos, l, mid, a, b, id, node_ids);
        place(2 * pos + 1, mid + 1, r, a, b, id, node_ids);
    }

    static std::uint32_t find_next(const node& nd, std::uint32_t i) {
        while (nd.nxt[i] != i) {
            nd.nxt[i] = nd.nxt[nd.nxt[i]];
            i = nd.nxt[i];
        }
        return i;
    }

    static std::uint32_t find_prev(const node& nd, std::uint32_t i) {
        // i is a shifted index into prv; result is an item index or kNone
        while (true) {
            std::uint32_t p = nd.prv[i];
            if (p == kNone) return kNone;
            if (nd.prv[p + 1] == p) return p;  // p alive (its shifted slot points to itself)
            nd.prv[i] = nd.prv[p + 1];
        }
    }

    void scan_node(const node& nd, coord from, bool increasing,
                   std::optional<ray_hit>& best) const {
        if (nd.items.empty()) return;
        const auto& v = nd.items;
        if (increasing) {
            auto it = std::upper_bound(v.begin(), v.end(), std::make_pair(from, UINT32_MAX));
            auto j = find_next(nd, static_cast<std::uint32_t>(it - v.begin()));
            if (j < v.size() && (!best || v[j].first < best->line))
                best = ray_hit{v[j].first, v[j].second};
        } else {
            auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(from, std::uint32_t{0}));
            auto j = find_prev(nd, static_cast<std::uint32_t>(it - v.begin()));
            if (j != kNone && (!best || v[j].first > best->line))
                best = ray_hit{v[j].first, v[j].second};
        }
    }

    std::vector<ray_segment> segs_;
    std::vector<coord> coords_;
    std::size_t leaf_count_ = 1;
    std::vector<node> nodes_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> id_slots_;
    std::vector<bool> dead_;
    std::size_t alive_ = 0;
};

}  // namespace stabcut

#endif
