#ifndef STABCUT_CSTAB2_HPP
#define STABCUT_CSTAB2_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stabcut/geom.hpp"
#include "stabcut/partition.hpp"
#include "stabcut/pixelation.hpp"
#include "stabcut/rayshoot.hpp"
#include "stabcut/twosat.hpp"

namespace stabcut {

namespace detail {

// One deletable shooter per orientation over reflex segments (open) plus
// polygon edges (closed), all in doubled coordinates. meta[i] is the reflex
// segment / stab class behind store id i, or -1 for an edge.
struct store {
    ray_shooter shooter;
    std::vector<int> meta;
    std::vector<std::uint32_t> of;  // reflex/class id -> store id
};

inline store make_reflex_store(const polygon& poly, const reflex_info& info, axis dir) {
    std::vector<ray_segment> segs;
    store st;
    st.of.assign(info.segments.size(), 0);
    for (std::size_t i = 0; i < info.segments.size(); ++i) {
        const gseg& s = info.segments[i].s;
        if (s.dir != dir) continue;
        st.of[i] = static_cast<std::uint32_t>(segs.size());
        segs.push_back({2 * s.line, 2 * s.lo, 2 * s.hi, true});
        st.meta.push_back(static_cast<int>(i));
    }
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            point a = ring[i], b = ring[(i + 1) % ring.size()];
            bool horizontal = a.y == b.y;
            if ((dir == axis::horizontal) != horizontal) continue;
            coord line = horizontal ? a.y : a.x;
            coord lo = horizontal ? std::min(a.x, b.x) : std::min(a.y, b.y);
            coord hi = horizontal ? std::max(a.x, b.x) : std::max(a.y, b.y);
            segs.push_back({2 * line, 2 * lo, 2 * hi, false});
            st.meta.push_back(-1);
        }
    }
    st.shooter = ray_shooter(std::move(segs));
    return st;
}

inline store make_class_store(const polygon& poly, const std::vector<stab_class>& classes,
                              axis dir) {
    std::vector<ray_segment> segs;
    store st;
    st.of.assign(classes.size(), 0);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const stab_class& cls = classes[c];
        if (cls.dir != dir || cls.grid_line) continue;
        st.of[c] = static_cast<std::uint32_t>(segs.size());
        segs.push_back({cls.cross2, cls.lo2, cls.hi2, true});
        st.meta.push_back(static_cast<int>(c));
    }
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            point a = ring[i], b = ring[(i + 1) % ring.size()];
            bool horizontal = a.y == b.y;
            if ((dir == axis::horizontal) != horizontal) continue;
            coord line = horizontal ? a.y : a.x;
            coord lo = horizontal ? std::min(a.x, b.x) : std::min(a.y, b.y);
            coord hi = horizontal ? std::max(a.x, b.x) : std::max(a.y, b.y);
            segs.push_back({2 * line, 2 * lo, 2 * hi, false});
            st.meta.push_back(-1);
        }
    }
    st.shooter = ray_shooter(std::move(segs));
    return st;
}

}  // namespace detail

// Transversal crossings of every strip class, by walking a ray shooter over
// the perpendicular reflex segments. O((n + total crossings) log^2 n).
inline void fill_class_crossings(const polygon& poly, const reflex_info& info,
                                 std::vector<stab_class>& classes) {
    detail::store h_store = detail::make_reflex_store(poly, info, axis::horizontal);
    detail::store v_store = detail::make_reflex_store(poly, info, axis::vertical);
    for (auto& cls : classes) {
        if (cls.grid_line) continue;
        cls.crossed.clear();
        const detail::store& st =
            cls.dir == axis::horizontal ? v_store : h_store;
        coord from = cls.lo2;
        while (true) {
            auto hit = st.shooter.first_hit(cls.cross2, from, true);
            if (!hit || hit->line >= cls.hi2) break;
            int seg = st.meta[hit->id];
            if (seg < 0)
                throw std::logic_error("fill_class_crossings: edge inside a stabbing segment");
            cls.crossed.push_back(seg);
            from = hit->line;
        }
    }
}

// The Lemma 2 instance: one variable per reflex segment, coverage clauses per
// reflex vertex, conflict clauses per crossing pair, and at-most-one
// exclusions per stabbing class. Exclusions use a shared prefix ladder
// (auxiliary variables in frequency order), which keeps the clause count at
// O(sum of class degrees) while staying pure 2-SAT.
struct lemma2_instance {
    two_sat sat;
    int num_segments = 0;
    long long coverage_clauses = 0;
    long long conflict_clauses = 0;
    long long exclusion_clauses = 0;
    int aux_vars = 0;
};

inline lemma2_instance build_two_sat(const reflex_info& info,
                                     const std::vector<stab_class>& classes) {
    lemma2_instance inst;
    inst.num_segments = static_cast<int>(info.segments.size());
    for (int i = 0; i < inst.num_segments; ++i) inst.sat.add_var();

    for (const point& p : info.vertices) {
        auto ids = info.by_apex.at(p);
        inst.sat.add_clause(two_sat::pos(ids[0]), two_sat::pos(ids[1]));
        ++inst.coverage_clauses;
    }
    for (auto [h, v] : reflex_crossings(info)) {
        inst.sat.add_clause(two_sat::neg(h), two_sat::neg(v));
        ++inst.conflict_clauses;
    }

    std::vector<long long> freq(info.segments.size(), 0);
    for (const auto& cls : classes)
        if (!cls.grid_line)
            for (int id : cls.crossed) ++freq[id];

    // prefix ladder: node variable = "some segment on this trie path chosen"
    std::map<std::pair<int, int>, int> trie;  // (parent node var, seg) -> node var
    for (const auto& cls : classes) {
        if (cls.grid_line || cls.crossed.size() < 2) continue;
        std::vector<int> order = cls.crossed;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::tie(freq[b], a) < std::tie(freq[a], b);
        });
        int parent = -1;
        for (int seg : order) {
            if (parent >= 0) {
                inst.sat.add_clause(two_sat::neg(seg), two_sat::neg(parent));
                ++inst.exclusion_clauses;
            }
            auto [it, fresh] = trie.try_emplace({parent, seg}, -1);
            if (fresh) {
                it->second = inst.sat.add_var();
                ++inst.aux_vars;
                inst.sat.imply(two_sat::pos(seg), two_sat::pos(it->second));
                if (parent >= 0) inst.sat.imply(two_sat::pos(parent), two_sat::pos(it->second));
            }
            parent = it->second;
        }
    }
    return inst;
}

inline lemma2_instance build_two_sat(const pixelation& px) {
    return build_two_sat(px.reflex, px.classes);
}

// Scalable stabbing<=2 witness verification: conforming plus at most one
// chosen segment crossed per stabbing class.
inline void verify_stab2_witness(const polygon& poly, const reflex_info& info,
                                 const std::vector<stab_class>& classes,
                                 const conforming_partition& cp) {
    auto chk = check_conforming(info, cp);
    if (!chk.ok) throw std::logic_error("stab2 witness not conforming: " + chk.message);
    std::vector<ray_segment> hsegs, vsegs;
    for (int id : cp.chosen) {
        const gseg& s = info.segments[id].s;
        (s.dir == axis::horizontal ? hsegs : vsegs)
            .push_back({2 * s.line, 2 * s.lo, 2 * s.hi, true});
    }
    ray_shooter hshoot(std::move(hsegs)), vshoot(std::move(vsegs));
    for (const auto& cls : classes) {
        if (cls.grid_line) continue;
        const ray_shooter& st = cls.dir == axis::horizontal ? vshoot : hshoot;
        auto hit = st.first_hit(cls.cross2, cls.lo2, true);
        if (!hit || hit->line >= cls.hi2) continue;
        auto second = st.first_hit(cls.cross2, hit->line, true);
        if (second && second->line < cls.hi2)
            throw std::logic_error("stab2 witness crosses two segments in one class");
    }
}

// Lemma 2 route: decides 2-CSTAB and provides a verified witness.
inline std::optional<conforming_partition> decide_cstab2_sat(const polygon& poly) {
    reflex_info info = reflex_segments(poly);
    if (info.vertices.empty()) return conforming_partition{};
    auto classes = stab_classes_raw(poly, info, false);
    fill_class_crossings(poly, info, classes);
    lemma2_instance inst = build_two_sat(info, classes);
    auto model = inst.sat.solve();
    if (!model) return std::nullopt;
    conforming_partition cp;
    for (int i = 0; i < inst.num_segments; ++i)
        if ((*model)[i]) cp.chosen.push_back(i);
    cp.normalize();
    verify_stab2_witness(poly, info, classes, cp);
    return cp;
}

enum class seg_flag : unsigned char { undecided, fixed, impossible };

struct rule_event {
    char rule;  // '4','5' seeds; '1' contradiction; '2' fixed; '3' class; 'i' impossible via R3
    int segment = -1;  // reflex segment id, if any
    int cls = -1;      // stab class index, if any
};

struct segment_status {
    std::vector<seg_flag> flags;
    std::vector<int> fixed_list;       // in processing order
    std::vector<int> impossible_list;
    std::vector<int> r3_classes;
    bool contradiction = false;
    std::string reason;
    std::vector<rule_event> trace;
};

// Rules R1-R5 with the ray-shooting worklist: seeds gates as fixed (R5) and
// crossing segments as impossible (R4), then propagates R1/R2/R3 until
// quiescence. Each segment changes its flag at most once and each class
// enters the R3 list at most once.
inline segment_status propagate_rules(const polygon& poly, const reflex_info& info,
                                      const std::vector<stab_class>& classes) {
    segment_status st;
    st.flags.assign(info.segments.size(), seg_flag::undecided);

    detail::store r_h = detail::make_reflex_store(poly, info, axis::horizontal);
    detail::store r_v = detail::make_reflex_store(poly, info, axis::vertical);
    detail::store s_h = detail::make_class_store(poly, classes, axis::horizontal);
    detail::store s_v = detail::make_class_store(poly, classes, axis::vertical);

    std::vector<char> removed_r(info.segments.size(), 0);
    std::vector<char> removed_s(classes.size(), 0);
    std::vector<char> in_r3(classes.size(), 0);
    std::deque<int> q_imp, q_fix, q_r3;

    auto remove_reflex = [&](int seg) {
        if (removed_r[seg]) return;
        removed_r[seg] = 1;
        detail::store& stx =
            info.segments[seg].s.dir == axis::horizontal ? r_h : r_v;
        stx.shooter.erase(stx.of[seg]);
    };

    // R5: any gate is fixed
    for (const gate& g : find_gates(info)) {
        q_fix.push_back(g.segment_id);
        st.trace.push_back({'5', g.segment_id, -1});
    }
    // R4: one ray-shooting query per reflex segment detects a crossing
    for (int seg = 0; seg < static_cast<int>(info.segments.size()); ++seg) {
        const gseg& s = info.segments[seg].s;
        const detail::store& perp = s.dir == axis::horizontal ? r_v : r_h;
        auto hit = perp.shooter.first_hit(2 * s.line, 2 * s.lo, true);
        if (hit && hit->line < 2 * s.hi) {
            q_imp.push_back(seg);
            st.trace.push_back({'4', seg, -1});
        }
    }

    auto contradict = [&](std::string why, int seg) {
        st.contradiction = true;
        st.reason = std::move(why);
        st.trace.push_back({'1', seg, -1});
    };

    while (!st.contradiction && (!q_imp.empty() || !q_fix.empty() || !q_r3.empty())) {
        if (!q_imp.empty()) {
            int seg = q_imp.front();
            q_imp.pop_front();
            if (st.flags[seg] == seg_flag::impossible) continue;
            if (st.flags[seg] == seg_flag::fixed) {
                contradict("segment both fixed and impossible", seg);
                break;
            }
            st.flags[seg] = seg_flag::impossible;
            st.impossible_list.push_back(seg);
            remove_reflex(seg);
            for (const point& apex : info.segments[seg].apexes) {
                auto ids = info.by_apex.at(apex);
                int other_seg = ids[0] == seg ? ids[1] : ids[0];
                if (st.flags[other_seg] == seg_flag::impossible) {
                    contradict("both segments of vertex " + point_str(apex) + " impossible",
                               other_seg);
                    break;
                }
                if (st.flags[other_seg] == seg_flag::undecided) {
                    q_fix.push_back(other_seg);
                    st.trace.push_back({'2', other_seg, -1});
                }
            }
            continue;
        }
        if (!q_fix.empty()) {
            int seg = q_fix.front();
            q_fix.pop_front();
            if (st.flags[seg] == seg_flag::fixed) continue;
            if (st.flags[seg] == seg_flag::impossible) {
                contradict("segment both fixed and impossible", seg);
                break;
            }
            st.flags[seg] = seg_flag::fixed;
            st.fixed_list.push_back(seg);
            // every stabbing class crossing this segment triggers R3
            const gseg& s = info.segments[seg].s;
            detail::store& stab_perp = s.dir == axis::horizontal ? s_v : s_h;
            coord from = 2 * s.lo;
            while (true) {
                auto hit = stab_perp.shooter.first_hit(2 * s.line, from, true);
                if (!hit || hit->line >= 2 * s.hi) break;
                from = hit->line;
                int cls = stab_perp.meta[hit->id];
                if (cls < 0)
                    throw std::logic_error("propagate_rules: edge inside a reflex segment");
                if (in_r3[cls]) throw std::logic_error("propagate_rules: class re-entered R3");
                in_r3[cls] = 1;
                removed_s[cls] = 1;
                stab_perp.shooter.erase(hit->id);
                q_r3.push_back(cls);
                st.trace.push_back({'3', -1, cls});
            }
            continue;
        }
        {
            int cls = q_r3.front();
            q_r3.pop_front();
            st.r3_classes.push_back(cls);
            const stab_class& c = classes[cls];
            detail::store& perp = c.dir == axis::horizontal ? r_v : r_h;
            coord from = c.lo2;
            int fixed_seen = 0;
            while (true) {
                auto hit = perp.shooter.first_hit(c.cross2, from, true);
                if (!hit || hit->line >= c.hi2) break;
                from = hit->line;
                int seg = perp.meta[hit->id];
                if (seg < 0)
                    throw std::logic_error("propagate_rules: edge inside a stabbing segment");
                if (st.flags[seg] == seg_flag::fixed) {
                    // two fixed segments on one stabbing segment cannot both stay
                    if (++fixed_seen >= 2) q_imp.push_back(seg);
                    continue;
                }
                remove_reflex(seg);
                q_imp.push_back(seg);
                st.trace.push_back({'i', seg, cls});
            }
        }
    }
    return st;
}

// Pieces obtained by inserting all fixed segments. Every piece must be thin
// and gate-free with only undecided reflex segments (Observation 1); a
// violation indicates a propagation bug and is surfaced.
inline std::vector<polygon> decompose_pieces(const polygon& poly, const reflex_info& info,
                                             const segment_status& st) {
    if (st.contradiction)
        throw std::invalid_argument("decompose_pieces: propagation ended in contradiction");
    std::vector<gseg> fixed;
    for (std::size_t i = 0; i < info.segments.size(); ++i)
        if (st.flags[i] == seg_flag::fixed) fixed.push_back(info.segments[i].s);
    cell_grid g = build_cell_grid(poly, fixed);
    face_set f = compute_faces(g);
    std::vector<polygon> pieces;
    std::map<gseg, seg_flag> flag_of;
    for (std::size_t i = 0; i < info.segments.size(); ++i)
        flag_of[info.segments[i].s] = st.flags[i];
    for (int i = 0; i < f.count; ++i) {
        polygon piece = trace_face(g, f, i);
        auto d = validate(piece);
        if (!d.ok()) throw std::logic_error("decompose_pieces: invalid piece: " + d.str());
        reflex_info pinfo = reflex_segments(piece);
        for (const auto& rs : pinfo.segments) {
            auto it = flag_of.find(rs.s);
            if (it == flag_of.end() || it->second != seg_flag::undecided)
                throw std::logic_error(
                    "decompose_pieces: piece reflex segment is not an undecided segment of P");
        }
        if (!is_thin(piece, pinfo)) throw std::logic_error("decompose_pieces: piece not thin");
        if (!find_gates(pinfo).empty())
            throw std::logic_error("decompose_pieces: piece has a gate");
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

struct fast_stats {
    bool used_pieces = false;
    int num_pieces = 0;
    bool piece_unsat = false;  // open in the paper whether this can occur
    std::size_t fixed = 0, impossible = 0, r3 = 0;
};

// Theorem 3 route: rules engine, then either the fixed set already covers
// every reflex vertex, or the undecided parts split into thin gate-free
// pieces solved independently by Lemma 2 and merged (Observation 2).
inline std::optional<conforming_partition> decide_cstab2_fast(const polygon& poly,
                                                              fast_stats* stats = nullptr) {
    reflex_info info = reflex_segments(poly);
    if (info.vertices.empty()) return conforming_partition{};
    auto classes = stab_classes_raw(poly, info, false);
    segment_status st = propagate_rules(poly, info, classes);
    if (stats) {
        stats->fixed = st.fixed_list.size();
        stats->impossible = st.impossible_list.size();
        stats->r3 = st.r3_classes.size();
    }
    if (st.contradiction) return std::nullopt;

    conforming_partition cp;
    bool covered = true;
    for (const point& p : info.vertices) {
        auto ids = info.by_apex.at(p);
        if (st.flags[ids[0]] != seg_flag::fixed && st.flags[ids[1]] != seg_flag::fixed) {
            covered = false;
            break;
        }
    }
    for (std::size_t i = 0; i < info.segments.size(); ++i)
        if (st.flags[i] == seg_flag::fixed) cp.chosen.push_back(static_cast<int>(i));

    if (!covered) {
        if (stats) stats->used_pieces = true;
        std::vector<polygon> pieces = decompose_pieces(poly, info, st);
        if (stats) stats->num_pieces = static_cast<int>(pieces.size());
        std::map<gseg, int> id_of;
        for (std::size_t i = 0; i < info.segments.size(); ++i)
            id_of[info.segments[i].s] = static_cast<int>(i);
        for (const polygon& piece : pieces) {
            auto sub = decide_cstab2_sat(piece);
            if (!sub) {
                if (stats) stats->piece_unsat = true;
                return std::nullopt;
            }
            reflex_info pinfo = reflex_segments(piece);
            for (int pid : sub->chosen) cp.chosen.push_back(id_of.at(pinfo.segments[pid].s));
        }
    }
    cp.normalize();
    verify_stab2_witness(poly, info, classes, cp);
    return cp;
}

// Theorem 2: thin polygons without gates have stabbing number 1, 2 or 3, and
// the 2-versus-3 question is one Lemma 2 instance with bounded class degree.
inline int thin_gp_stabbing_number(const polygon& poly) {
    reflex_info info = reflex_segments(poly);
    if (!is_thin(poly, info))
        throw std::invalid_argument("thin_gp_stabbing_number: polygon not thin");
    if (!find_gates(info).empty())
        throw std::invalid_argument("thin_gp_stabbing_number: polygon has a gate");
    if (info.vertices.empty()) return 1;
    auto classes = stab_classes_raw(poly, info, false);
    fill_class_crossings(poly, info, classes);
    for (const auto& cls : classes) {
        if (!cls.grid_line && cls.crossed.size() > 2)
            throw std::logic_error("thin gate-free class crosses more than two segments");
    }
    lemma2_instance inst = build_two_sat(info, classes);
    return inst.sat.solve() ? 2 : 3;
}

}  // namespace stabcut

#endif
