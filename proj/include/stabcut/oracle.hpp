#ifndef STABCUT_ORACLE_HPP
#define STABCUT_ORACLE_HPP

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>
#include <vector>

#include "stabcut/cstab2.hpp"
#include "stabcut/geom.hpp"
#include "stabcut/partition.hpp"
#include "stabcut/pixelation.hpp"

namespace stabcut {

struct prune_options {
    bool class_counters = true;  // per-class crossing counters with cutoff
    bool conflicts = true;       // eager forbidding of crossing partners
    bool wedge = true;           // wedge-pixel dichotomy branching
};

struct oracle_budget {
    long long max_nodes = -1;  // < 0: unlimited
};

struct min_stab_result {
    bool budget_exceeded = false;
    int lower_bound = 1;
    std::optional<int> value;  // incumbent; exact minimum when not exceeded
    std::optional<conforming_partition> witness;
    long long nodes = 0;
};

struct enumerate_result {
    bool budget_exceeded = false;
    std::vector<conforming_partition> partitions;  // canonical order, each once
    long long nodes = 0;
};

enum class ternary { yes, no, budget_exceeded };

struct decide_result {
    ternary verdict = ternary::no;
    std::optional<conforming_partition> witness;
    long long nodes = 0;
};

namespace detail {

// Shared search over segment choice vectors. Branching covers a reflex vertex
// at a time: either take its horizontal segment, or forbid it and take the
// vertical one. Shared segments re-enter through later vertices, so every
// minimal conforming partition is generated exactly once.
class oracle_search {
public:
    oracle_search(const polygon& poly, prune_options opt) : opt_(opt) {
        info_ = reflex_segments(poly);
        classes_ = stab_classes_raw(poly, info_, false);
        fill_class_crossings(poly, info_, classes_);
        classes_.erase(std::remove_if(classes_.begin(), classes_.end(),
                                      [](const stab_class& c) { return c.grid_line; }),
                       classes_.end());
        classes_of_seg_.assign(info_.segments.size(), {});
        for (std::size_t c = 0; c < classes_.size(); ++c)
            for (int id : classes_[c].crossed)
                classes_of_seg_[id].push_back(static_cast<int>(c));
        conflicts_of_.assign(info_.segments.size(), {});
        for (auto [h, v] : reflex_crossings(info_)) {
            conflicts_of_[h].push_back(v);
            conflicts_of_[v].push_back(h);
        }
        if (opt_.wedge) build_wedge_groups(poly);
        chosen_.assign(info_.segments.size(), 0);
        forbidden_.assign(info_.segments.size(), 0);
        count_.assign(classes_.size(), 0);
    }

    const reflex_info& info() const { return info_; }

    // leaf callback: complete conforming cover with per-class counts exact;
    // returns false to stop the whole search (early exit)
    using leaf_fn = std::function<bool(const std::vector<char>& chosen, int value)>;

    // cutoff: if >= 0, prune branches whose running value exceeds it
    bool run(int cutoff_value, long long max_nodes, leaf_fn leaf) {
        cutoff_ = cutoff_value;
        max_nodes_ = max_nodes;
        nodes_ = 0;
        exceeded_ = false;
        stopped_ = false;
        leaf_ = std::move(leaf);
        branch(0);
        return !exceeded_;
    }

    long long nodes() const { return nodes_; }
    bool exceeded() const { return exceeded_; }

    // incumbent-driven tightening from inside a leaf callback
    void tighten_cutoff(int c) {
        cutoff_ = c;
        over_cutoff_ = false;
        recompute_over_cutoff();
    }

    bool is_minimal_cover(const std::vector<char>& chosen) const {
        for (std::size_t s = 0; s < chosen.size(); ++s) {
            if (!chosen[s]) continue;
            bool removable = true;
            for (const point& apex : info_.segments[s].apexes) {
                auto ids = info_.by_apex.at(apex);
                int other_seg = ids[0] == static_cast<int>(s) ? ids[1] : ids[0];
                if (!chosen[other_seg]) {
                    removable = false;
                    break;
                }
            }
            if (removable) return false;
        }
        return true;
    }

private:
    struct wedge_group {
        std::vector<int> h_segs, v_segs;
    };

    void build_wedge_groups(const polygon& poly) {
        pixelation px = pixelate(poly);
        group_of_vertex_.clear();
        for (const point& p : info_.vertices) group_of_vertex_[p] = -1;
        for (int f = 0; f < static_cast<int>(px.pixels.size()); ++f) {
            const pixel& pix = px.pixels[f];
            std::vector<point> reflex_corners;
            bool eligible = false;
            for (int c : pix.corner) {
                const pix_vertex& v = px.vertices[c];
                if (v.is_reflex_corner) reflex_corners.push_back(v.p);
            }
            if (reflex_corners.empty()) continue;
            eligible = true;
            for (const point& p : reflex_corners)
                if (wedge_pixel(px, p) != f) eligible = false;
            if (!eligible) continue;
            wedge_group g;
            auto add_side = [&](int side, std::vector<int>& out) {
                if (side >= 0 &&
                    std::find(out.begin(), out.end(), side) == out.end())
                    out.push_back(side);
            };
            add_side(pix.side[0], g.v_segs);
            add_side(pix.side[1], g.v_segs);
            add_side(pix.side[2], g.h_segs);
            add_side(pix.side[3], g.h_segs);
            // all apexes of the side segments must be corners of this pixel
            for (const auto* set : {&g.h_segs, &g.v_segs}) {
                for (int s : *set) {
                    for (const point& apex : info_.segments[s].apexes) {
                        if (std::find(reflex_corners.begin(), reflex_corners.end(), apex) ==
                            reflex_corners.end())
                            eligible = false;
                    }
                }
            }
            if (!eligible || g.h_segs.empty() || g.v_segs.empty()) continue;
            int gid = static_cast<int>(groups_.size());
            groups_.push_back(g);
            for (const point& p : reflex_corners) group_of_vertex_[p] = gid;
        }
    }

    bool covered(const point& p) const {
        auto ids = info_.by_apex.at(p);
        return chosen_[ids[0]] || chosen_[ids[1]];
    }

    bool can_take(int seg) const {
        if (forbidden_[seg]) return false;
        for (int c : conflicts_of_[seg])
            if (chosen_[c]) return false;
        return true;
    }

    // trail-based take/forbid with undo
    struct trail_mark {
        std::size_t taken, forbidden;
    };
    trail_mark mark() const { return {taken_trail_.size(), forbid_trail_.size()}; }

    bool take(int seg) {
        if (chosen_[seg]) return true;
        if (!can_take(seg)) return false;
        chosen_[seg] = 1;
        taken_trail_.push_back(seg);
        for (int c : classes_of_seg_[seg]) {
            ++count_[c];
            if (cutoff_ >= 0 && opt_.class_counters && count_[c] + 1 > cutoff_) over_cutoff_ = true;
        }
        if (opt_.conflicts) {
            for (int c : conflicts_of_[seg]) {
                if (!forbidden_[c]) {
                    forbidden_[c] = 1;
                    forbid_trail_.push_back(c);
                }
            }
        }
        return true;
    }

    void forbid(int seg) {
        if (!forbidden_[seg]) {
            forbidden_[seg] = 1;
            forbid_trail_.push_back(seg);
        }
    }

    void rewind(trail_mark m) {
        while (taken_trail_.size() > m.taken) {
            int seg = taken_trail_.back();
            taken_trail_.pop_back();
            chosen_[seg] = 0;
            for (int c : classes_of_seg_[seg]) --count_[c];
        }
        while (forbid_trail_.size() > m.forbidden) {
            forbidden_[forbid_trail_.back()] = 0;
            forbid_trail_.pop_back();
        }
        over_cutoff_ = false;
        recompute_over_cutoff();
    }

    void recompute_over_cutoff() {
        if (cutoff_ < 0 || !opt_.class_counters) return;
        for (std::size_t c = 0; c < count_.size(); ++c)
            if (count_[c] + 1 > cutoff_) {
                over_cutoff_ = true;
                return;
            }
    }

    int current_value() const {
        int v = 1;
        for (std::size_t c = 0; c < count_.size(); ++c) v = std::max(v, count_[c] + 1);
        return v;
    }

    void branch(std::size_t cursor) {
        if (stopped_ || exceeded_) return;
        ++nodes_;
        if (max_nodes_ >= 0 && nodes_ > max_nodes_) {
            exceeded_ = true;
            return;
        }
        if (cutoff_ >= 0 && opt_.class_counters && over_cutoff_) return;

        while (cursor < info_.vertices.size() && covered(info_.vertices[cursor])) ++cursor;
        if (cursor == info_.vertices.size()) {
            int value = current_value();
            if (cutoff_ >= 0 && value > cutoff_) return;  // exact filter, prune or not
            if (!leaf_(chosen_, value)) stopped_ = true;
            return;
        }
        const point& p = info_.vertices[cursor];
        auto ids = info_.by_apex.at(p);

        int gid = opt_.wedge ? group_of_vertex_.at(p) : -1;
        if (gid >= 0) {
            const wedge_group& g = groups_[gid];
            for (int side = 0; side < 2; ++side) {
                const auto& take_set = side == 0 ? g.h_segs : g.v_segs;
                const auto& forbid_set = side == 0 ? g.v_segs : g.h_segs;
                trail_mark m = mark();
                bool ok = true;
                for (int s : forbid_set)
                    if (chosen_[s]) ok = false;
                for (int s : take_set)
                    if (ok && !take(s)) ok = false;
                if (ok) {
                    for (int s : forbid_set) forbid(s);
                    branch(cursor);
                }
                rewind(m);
                if (stopped_ || exceeded_) return;
            }
            return;
        }

        // take the horizontal segment, or forbid it and take the vertical one
        {
            trail_mark m = mark();
            if (take(ids[0])) branch(cursor);
            rewind(m);
            if (stopped_ || exceeded_) return;
        }
        {
            trail_mark m = mark();
            forbid(ids[0]);
            if (take(ids[1])) branch(cursor);
            rewind(m);
        }
    }

    prune_options opt_;
    reflex_info info_;
    std::vector<stab_class> classes_;
    std::vector<std::vector<int>> classes_of_seg_;
    std::vector<std::vector<int>> conflicts_of_;
    std::vector<wedge_group> groups_;
    std::map<point, int> group_of_vertex_;

    std::vector<char> chosen_, forbidden_;
    std::vector<int> count_;
    std::vector<int> taken_trail_;
    std::vector<int> forbid_trail_;
    bool over_cutoff_ = false;
    int cutoff_ = -1;
    long long max_nodes_ = -1;
    long long nodes_ = 0;
    bool exceeded_ = false;
    bool stopped_ = false;
    leaf_fn leaf_;
};

inline conforming_partition to_partition(const std::vector<char>& chosen) {
    conforming_partition cp;
    for (std::size_t i = 0; i < chosen.size(); ++i)
        if (chosen[i]) cp.chosen.push_back(static_cast<int>(i));
    return cp;
}

}  // namespace detail

// Exact minimum conforming stabbing number by branch and bound: each complete
// cover tightens the cutoff so only strictly better covers are explored.
inline min_stab_result min_conforming_stabbing(const polygon& poly, oracle_budget budget = {},
                                               prune_options opt = {}) {
    detail::oracle_search search(poly, opt);
    min_stab_result res;
    res.lower_bound = search.info().vertices.empty() ? 1 : 2;
    int incumbent = INT_MAX;
    search.run(-1, budget.max_nodes, [&](const std::vector<char>& chosen, int value) {
        if (value < incumbent) {
            incumbent = value;
            res.value = value;
            res.witness = detail::to_partition(chosen);
            search.tighten_cutoff(value - 1);
        }
        return incumbent > res.lower_bound;  // cannot improve past the lower bound
    });
    res.budget_exceeded = search.exceeded();
    res.nodes = search.nodes();
    if (!res.budget_exceeded && res.value) res.lower_bound = *res.value;
    return res;
}

// Every minimal conforming partition, optionally only those with stabbing
// number at most max_k, in canonical (lexicographic chosen-set) order.
inline enumerate_result enumerate_minimal(const polygon& poly,
                                          std::optional<int> max_k = std::nullopt,
                                          oracle_budget budget = {}, prune_options opt = {}) {
    detail::oracle_search search(poly, opt);
    enumerate_result res;
    search.run(max_k ? *max_k : -1, budget.max_nodes,
               [&](const std::vector<char>& chosen, int value) {
                   (void)value;
                   if (search.is_minimal_cover(chosen))
                       res.partitions.push_back(detail::to_partition(chosen));
                   return true;
               });
    res.budget_exceeded = search.exceeded();
    res.nodes = search.nodes();
    std::sort(res.partitions.begin(), res.partitions.end(),
              [](const conforming_partition& a, const conforming_partition& b) {
                  return a.chosen < b.chosen;
              });
    for (std::size_t i = 1; i < res.partitions.size(); ++i) {
        if (res.partitions[i].chosen == res.partitions[i - 1].chosen)
            throw std::logic_error("enumerate_minimal: duplicate partition generated");
    }
    return res;
}

// Decision form: consistent with min_conforming_stabbing by construction.
inline decide_result decide_cstab_k_exact(const polygon& poly, int k, oracle_budget budget = {},
                                          prune_options opt = {}) {
    detail::oracle_search search(poly, opt);
    decide_result res;
    bool found = false;
    conforming_partition witness;
    search.run(k, budget.max_nodes, [&](const std::vector<char>& chosen, int value) {
        (void)value;
        found = true;
        witness = detail::to_partition(chosen);
        return false;
    });
    res.nodes = search.nodes();
    if (found) {
        res.verdict = ternary::yes;
        res.witness = std::move(witness);
    } else if (search.exceeded()) {
        res.verdict = ternary::budget_exceeded;
    } else {
        res.verdict = ternary::no;
    }
    return res;
}

}  // namespace stabcut

#endif
