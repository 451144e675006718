#pragma once

// Reference computations for the tests. Everything here is written against
// the raw RoMDP tables only, independently of the library's solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "compmdp/model.hpp"

namespace oracle {

using compmdp::RoMDP;
using compmdp::Target;

struct Values {
    std::size_t m = 0, n = 0;
    std::vector<double> p, r;  // row-major m x n
    double P(std::size_t i, std::size_t j) const { return p[i * n + j]; }
    double R(std::size_t i, std::size_t j) const { return r[i * n + j]; }
};

// Gauss-Jordan elimination with full row pivot search; solves A x = B for
// several right-hand sides at once (columns of B).
inline std::vector<std::vector<double>> gauss_jordan(std::vector<std::vector<double>> a,
                                                     std::vector<std::vector<double>> b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        const double d = a[c][c];
        for (double& v : a[c]) v /= d;
        for (double& v : b[c]) v /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0.0) continue;
            const double f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) a[r][k] -= f * a[c][k];
            for (std::size_t k = 0; k < b[r].size(); ++k) b[r][k] -= f * b[c][k];
        }
    }
    return b;
}

// p and r of the chain obtained by fixing action choice[q] at every position.
inline Values solve_with(const RoMDP& a, const std::vector<std::size_t>& choice) {
    const std::size_t nq = a.num_positions();
    Values v{a.entrances, a.exits, std::vector<double>(a.entrances * a.exits),
             std::vector<double>(a.entrances * a.exits)};
    for (std::size_t j = 1; j <= a.exits; ++j) {
        // Positions that can reach exit j.
        std::vector<bool> good(nq, false);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t q = 0; q < nq; ++q) {
                if (good[q]) continue;
                for (const auto& e : a.row(q, choice[q]))
                    if (e.prob > 0 && ((e.to.is_exit() && e.to.index == j) ||
                                       (e.to.is_position() && good[e.to.index]))) {
                        good[q] = true;
                        changed = true;
                        break;
                    }
            }
        }
        std::vector<std::size_t> idx(nq, nq), order;
        for (std::size_t q = 0; q < nq; ++q)
            if (good[q]) {
                idx[q] = order.size();
                order.push_back(q);
            }
        const std::size_t k = order.size();
        std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
        std::vector<std::vector<double>> rhs(k, std::vector<double>(1, 0.0));
        for (std::size_t s = 0; s < k; ++s) {
            m[s][s] = 1.0;
            for (const auto& e : a.row(order[s], choice[order[s]])) {
                if (e.to.is_exit() && e.to.index == j) rhs[s][0] += e.prob;
                if (e.to.is_position() && good[e.to.index]) m[s][idx[e.to.index]] -= e.prob;
            }
        }
        std::vector<double> x(nq, 0.0), y(nq, 0.0);
        if (k > 0) {
            auto sx = gauss_jordan(m, rhs);
            for (std::size_t s = 0; s < k; ++s) x[order[s]] = sx[s][0];
            for (std::size_t s = 0; s < k; ++s) rhs[s][0] = a.rewards[order[s]] * x[order[s]];
            auto sy = gauss_jordan(m, rhs);
            for (std::size_t s = 0; s < k; ++s) y[order[s]] = sy[s][0];
        }
        for (std::size_t i = 0; i < a.entrances; ++i) {
            const Target t = a.entry[i];
            double p = 0, r = 0;
            if (t.is_exit() && t.index == j) p = 1;
            if (t.is_position()) {
                p = x[t.index];
                r = y[t.index];
            }
            if (p < 1e-15) p = r = 0;
            v.p[i * v.n + j - 1] = p;
            v.r[i * v.n + j - 1] = r;
        }
    }
    return v;
}

// Calls f for every memoryless scheduler over enabled actions.
inline void for_each_scheduler(const RoMDP& a,
                               const std::function<void(const std::vector<std::size_t>&)>& f) {
    const std::size_t nq = a.num_positions();
    std::vector<std::vector<std::size_t>> opts(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t ac = 0; ac < a.num_actions(); ++ac)
            if (!a.row(q, ac).empty()) opts[q].push_back(ac);
        if (opts[q].empty()) opts[q].push_back(0);
    }
    std::vector<std::size_t> pos(nq, 0), choice(nq);
    for (;;) {
        for (std::size_t q = 0; q < nq; ++q) choice[q] = opts[q][pos[q]];
        f(choice);
        std::size_t q = 0;
        while (q < nq && ++pos[q] == opts[q].size()) pos[q++] = 0;
        if (q == nq) return;
    }
}

struct Best {
    double r = -1, p = -1;
    // Largest p among schedulers whose r is within tie_tol of the maximum.
    double p_at_max = -1;
    std::vector<std::vector<double>> all_p, all_r;
};

// Optimal (max r, then max p) per entrance/exit over all memoryless schedulers.
inline std::vector<Best> brute_force(const RoMDP& a) {
    std::vector<Best> best(a.entrances * a.exits);
    for_each_scheduler(a, [&](const std::vector<std::size_t>& ch) {
        Values v = solve_with(a, ch);
        for (std::size_t k = 0; k < best.size(); ++k) {
            best[k].all_p.push_back({v.p[k]});
            best[k].all_r.push_back({v.r[k]});
            if (v.r[k] > best[k].r) best[k].r = v.r[k];
        }
    });
    for (auto& b : best)
        for (std::size_t s = 0; s < b.all_r.size(); ++s)
            if (b.all_r[s][0] >= b.r - 1e-10) b.p_at_max = std::max(b.p_at_max, b.all_p[s][0]);
    return best;
}

// True when (p, r) is an optimal value at this entrance/exit up to tol: r is
// maximal, some scheduler realizes (p, r), and no scheduler with the same r
// reaches the exit with visibly larger probability.
inline bool matches_optimum(const Best& b, double p, double r, double tol) {
    if (std::fabs(r - b.r) > tol) return false;
    bool realized = false;
    for (std::size_t s = 0; s < b.all_r.size(); ++s) {
        if (std::fabs(b.all_r[s][0] - r) <= tol && std::fabs(b.all_p[s][0] - p) <= tol)
            realized = true;
        if (b.all_r[s][0] >= r - 1e-12 && b.all_p[s][0] > p + tol) return false;
    }
    return realized;
}

}  // namespace oracle
