// Copyright 2026 The Iceberg Compiler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "iceberg/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace iceberg {

namespace {

// Primal-dual blossom algorithm, O(n^3). Vertices are 1-based inside; ids
// above n name blossoms.
class Blossom {
   public:
    struct E {
        int u = 0, v = 0;
        int64_t w = 0;
    };

    explicit Blossom(int n)
        : n_(n),
          cap_(2 * n + 2),
          g_(cap_, std::vector<E>(cap_)),
          lab_(cap_),
          match_(cap_),
          slack_(cap_),
          st_(cap_),
          pa_(cap_),
          flo_from_(cap_, std::vector<int>(n + 1)),
          s_(cap_),
          vis_(cap_),
          flo_(cap_) {
        for (int u = 1; u <= n_; ++u) {
            for (int v = 1; v <= n_; ++v) g_[u][v] = {u, v, 0};
        }
    }

    void add(int u, int v, int64_t w) {
        if (w > g_[u][v].w) {
            g_[u][v].w = w;
            g_[v][u].w = w;
        }
    }

    std::vector<int> solve() {
        std::fill(match_.begin(), match_.end(), 0);
        nx_ = n_;
        for (int u = 0; u <= n_; ++u) {
            st_[u] = u;
            flo_[u].clear();
        }
        int64_t wmax = 0;
        for (int u = 1; u <= n_; ++u) {
            for (int v = 1; v <= n_; ++v) {
                flo_from_[u][v] = u == v ? u : 0;
                wmax = std::max(wmax, g_[u][v].w);
            }
        }
        for (int u = 1; u <= n_; ++u) lab_[u] = wmax;
        while (augment_once()) {
        }
        std::vector<int> mate(n_, -1);
        for (int u = 1; u <= n_; ++u) {
            if (match_[u]) mate[u - 1] = match_[u] - 1;
        }
        return mate;
    }

   private:
    int64_t delta(const E &e) const { return lab_[e.u] + lab_[e.v] - g_[e.u][e.v].w * 2; }

    void update_slack(int u, int x) {
        if (!slack_[x] || delta(g_[u][x]) < delta(g_[slack_[x]][x])) slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u) {
            if (g_[u][x].w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
        }
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int y : flo_[x]) q_push(y);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_) {
            for (int y : flo_[x]) set_st(y, b);
        }
    }

    int get_pr(int b, int xr) {
        int pr = static_cast<int>(std::find(flo_[b].begin(), flo_[b].end(), xr) - flo_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flo_[b].begin() + 1, flo_[b].end());
            return static_cast<int>(flo_[b].size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[u] = g_[u][v].v;
        if (u <= n_) return;
        E e = g_[u][v];
        int xr = flo_from_[u][e.u], pr = get_pr(u, xr);
        for (int i = 0; i < pr; ++i) set_match(flo_[u][i], flo_[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flo_[u].begin(), flo_[u].begin() + pr, flo_[u].end());
    }

    void augment(int u, int v) {
        for (;;) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++stamp_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == stamp_) return u;
            vis_[u] = stamp_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= nx_ && st_[b]) ++b;
        if (b > nx_) ++nx_;
        lab_[b] = 0;
        s_[b] = 0;
        match_[b] = match_[lca];
        flo_[b].clear();
        flo_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flo_[b].push_back(x);
            flo_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(flo_[b].begin() + 1, flo_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flo_[b].push_back(x);
            flo_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= nx_; ++x) g_[b][x].w = g_[x][b].w = 0;
        for (int x = 1; x <= n_; ++x) flo_from_[b][x] = 0;
        for (int xs : flo_[b]) {
            for (int x = 1; x <= nx_; ++x) {
                if (g_[b][x].w == 0 || delta(g_[xs][x]) < delta(g_[b][x])) {
                    g_[b][x] = g_[xs][x];
                    g_[x][b] = g_[x][xs];
                }
            }
            for (int x = 1; x <= n_; ++x) {
                if (flo_from_[xs][x]) flo_from_[b][x] = xs;
            }
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int x : flo_[b]) set_st(x, x);
        int xr = flo_from_[b][g_[b][pa_[b]].u], pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flo_[b][i], xns = flo_[b][i + 1];
            pa_[xs] = g_[xns][xs].u;
            s_[xs] = 1;
            s_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        s_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = pr + 1; i < flo_[b].size(); ++i) {
            int xs = flo_[b][i];
            s_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
    }

    bool on_found_edge(const E &e) {
        int u = st_[e.u], v = st_[e.v];
        if (s_[v] == -1) {
            pa_[v] = e.u;
            s_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            s_[nu] = 0;
            q_push(nu);
        } else if (s_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool augment_once() {
        for (int x = 1; x <= nx_; ++x) {
            s_[x] = -1;
            slack_[x] = 0;
        }
        q_.clear();
        for (int x = 1; x <= nx_; ++x) {
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                s_[x] = 0;
                q_push(x);
            }
        }
        if (q_.empty()) return false;
        for (;;) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (s_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v) {
                    if (g_[u][v].w > 0 && st_[u] != st_[v]) {
                        if (delta(g_[u][v]) == 0) {
                            if (on_found_edge(g_[u][v])) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
                }
            }
            int64_t d = std::numeric_limits<int64_t>::max();
            for (int b = n_ + 1; b <= nx_; ++b) {
                if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
            }
            for (int x = 1; x <= nx_; ++x) {
                if (st_[x] == x && slack_[x]) {
                    if (s_[x] == -1) d = std::min(d, delta(g_[slack_[x]][x]));
                    else if (s_[x] == 0) d = std::min(d, delta(g_[slack_[x]][x]) / 2);
                }
            }
            for (int u = 1; u <= n_; ++u) {
                if (s_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (s_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= nx_; ++b) {
                if (st_[b] == b) {
                    if (s_[st_[b]] == 0) lab_[b] += d * 2;
                    else if (s_[st_[b]] == 1) lab_[b] -= d * 2;
                }
            }
            q_.clear();
            for (int x = 1; x <= nx_; ++x) {
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x && delta(g_[slack_[x]][x]) == 0) {
                    if (on_found_edge(g_[slack_[x]][x])) return true;
                }
            }
            for (int b = n_ + 1; b <= nx_; ++b) {
                if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
            }
        }
    }

    int n_, nx_ = 0, cap_;
    std::vector<std::vector<E>> g_;
    std::vector<int64_t> lab_;
    std::vector<int> match_, slack_, st_, pa_;
    std::vector<std::vector<int>> flo_from_;
    std::vector<int> s_, vis_;
    std::vector<std::vector<int>> flo_;
    std::deque<int> q_;
    int stamp_ = 0;
};

}  // namespace

std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge> &edges) {
    if (n <= 0) return {};
    Blossom b(n);
    for (const auto &e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::out_of_range("matching edge endpoint");
        // Doubled weights keep every dual update integral.
        if (e.u != e.v && e.w > 0) b.add(e.u + 1, e.v + 1, 2 * e.w);
    }
    return b.solve();
}

int64_t matching_weight(const std::vector<int> &mate, const std::vector<WeightedEdge> &edges) {
    int64_t total = 0;
    int n = static_cast<int>(mate.size());
    std::vector<std::vector<int64_t>> best(n, std::vector<int64_t>(n, 0));
    for (const auto &e : edges) {
        if (e.u == e.v) continue;
        best[e.u][e.v] = best[e.v][e.u] = std::max(best[e.u][e.v], e.w);
    }
    for (int v = 0; v < n; ++v) {
        if (mate[v] > v) total += best[v][mate[v]];
    }
    return total;
}

}  // namespace iceberg
