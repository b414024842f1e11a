#ifndef STABCUT_TWOSAT_HPP
#define STABCUT_TWOSAT_HPP

#include <optional>
#include <vector>

namespace stabcut {

// 2-SAT over literals 2v (positive) and 2v+1 (negated), decided via strongly
// connected components of the implication graph. The SCC pass is iterative so
// instance size is bounded by memory, not stack depth. Assignments are
// deterministic: Tarjan numbers components sink-first in adjacency order, and
// a variable is true iff its positive literal sits in an earlier component.
class two_sat {
public:
    int add_var() {
        adj_.emplace_back();
        adj_.emplace_back();
        return num_vars_++;
    }

    static int pos(int v) { return 2 * v; }
    static int neg(int v) { return 2 * v + 1; }

    void add_clause(int lit_a, int lit_b) {
        adj_[lit_a ^ 1].push_back(lit_b);
        if (lit_a != lit_b) adj_[lit_b ^ 1].push_back(lit_a);
        ++num_clauses_;
    }

    void imply(int lit_a, int lit_b) { add_clause(lit_a ^ 1, lit_b); }

    int num_vars() const { return num_vars_; }
    long long num_clauses() const { return num_clauses_; }

    std::optional<std::vector<char>> solve() const {
        int m = 2 * num_vars_;
        std::vector<int> comp(m, -1), low(m, 0), num(m, -1), stk;
        std::vector<char> on_stack(m, 0);
        std::vector<std::pair<int, std::size_t>> frames;
        int counter = 0, comps = 0;
        for (int s = 0; s < m; ++s) {
            if (num[s] != -1) continue;
            frames.emplace_back(s, 0);
            while (!frames.empty()) {
                int u = frames.back().first;
                if (frames.back().second == 0) {
                    num[u] = low[u] = counter++;
                    stk.push_back(u);
                    on_stack[u] = 1;
                }
                if (frames.back().second < adj_[u].size()) {
                    int v = adj_[u][frames.back().second++];
                    if (num[v] == -1) {
                        frames.emplace_back(v, 0);
                    } else if (on_stack[v]) {
                        low[u] = std::min(low[u], num[v]);
                    }
                } else {
                    if (low[u] == num[u]) {
                        while (true) {
                            int w = stk.back();
                            stk.pop_back();
                            on_stack[w] = 0;
                            comp[w] = comps;
                            if (w == u) break;
                        }
                        ++comps;
                    }
                    frames.pop_back();
                    if (!frames.empty()) {
                        int p = frames.back().first;
                        low[p] = std::min(low[p], low[u]);
                    }
                }
            }
        }
        std::vector<char> val(num_vars_);
        for (int v = 0; v < num_vars_; ++v) {
            if (comp[2 * v] == comp[2 * v + 1]) return std::nullopt;
            val[v] = comp[2 * v] < comp[2 * v + 1];  // closer to a sink wins
        }
        return val;
    }

private:
    int num_vars_ = 0;
    long long num_clauses_ = 0;
    std::vector<std::vector<int>> adj_;
};

}  // namespace stabcut

#endif
