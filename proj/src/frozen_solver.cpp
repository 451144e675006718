#include "compmdp/frozen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "compmdp/error.hpp"

namespace compmdp {

namespace {

struct PolicyValues {
    std::vector<double> x;  // probability of reaching the exit
    std::vector<double> y;  // weighted reward
};

PolicyValues evaluate(const RoMDP& a, const Scheduler& tau) {
    const std::size_t nq = a.num_positions();
    std::vector<std::vector<std::size_t>> pred(nq);
    std::vector<std::size_t> reach;
    constexpr std::size_t absent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> local(nq, absent);
    for (std::size_t q = 0; q < nq; ++q)
        for (const Edge& e : a.row(q, tau.choice[q])) {
            if (!(e.prob > 0.0)) continue;
            if (e.to.is_position())
                pred[e.to.index].push_back(q);
            else if (local[q] == absent) {
                local[q] = reach.size();
                reach.push_back(q);
            }
        }
    for (std::size_t h = 0; h < reach.size(); ++h)
        for (std::size_t s : pred[reach[h]])
            if (local[s] == absent) {
                local[s] = reach.size();
                reach.push_back(s);
            }

    PolicyValues out{std::vector<double>(nq, 0.0), std::vector<double>(nq, 0.0)};
    if (reach.empty()) return out;
    SparseRows p(reach.size());
    std::vector<double> b(reach.size(), 0.0);
    for (std::size_t h = 0; h < reach.size(); ++h)
        for (const Edge& e : a.row(reach[h], tau.choice[reach[h]])) {
            if (e.to.is_exit())
                b[h] += e.prob;
            else if (local[e.to.index] != absent)
                p[h].push_back({local[e.to.index], e.prob});
        }
    TransientSolver solver(std::move(p));
    std::vector<double> x = solver.solve(b);
    std::vector<double> c(reach.size());
    for (std::size_t h = 0; h < reach.size(); ++h) c[h] = a.rewards[reach[h]] * x[h];
    std::vector<double> y = solver.solve(c);
    for (std::size_t h = 0; h < reach.size(); ++h) {
        out.x[reach[h]] = x[h];
        out.y[reach[h]] = y[h];
    }
    return out;
}

void check_deadline(const std::optional<std::chrono::steady_clock::time_point>& deadline) {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
        throw Timeout("frozen block solve exceeded its time budget");
}

}  // namespace

FrozenSolution solve_single_exit(const RoMDP& a,
                                 std::optional<std::chrono::steady_clock::time_point> deadline) {
    if (a.exits != 1) throw FrozenMultiExit("frozen block must have exactly one exit");
    const std::size_t nq = a.num_positions();
    std::vector<std::vector<std::size_t>> choices(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t ac = 0; ac < a.num_actions(); ++ac)
            if (a.enabled(q, ac)) choices[q].push_back(ac);
    }
    auto reach_of = [&](std::size_t q, std::size_t ac, const std::vector<double>& x) {
        double val = 0.0;
        for (const Edge& e : a.row(q, ac)) val += e.prob * (e.to.is_exit() ? 1.0 : x[e.to.index]);
        return val;
    };

    // Maximal probability of reaching the exit, iterated upwards from zero.
    // Sweeps visit successors before predecessors.
    SparseRows graph(nq);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t ac : choices[q])
            for (const Edge& e : a.row(q, ac))
                if (e.to.is_position()) graph[q].push_back({e.to.index, e.prob});
    const std::vector<std::size_t> order = successors_first(graph);
    graph.clear();

    FrozenSolution out;
    std::vector<double> x(nq, 0.0);
    for (; out.sweeps < kGaussSeidelMaxSweeps; ++out.sweeps) {
        if (out.sweeps % 64 == 0) check_deadline(deadline);
        double delta = 0.0;
        for (std::size_t q : order) {
            double best = 0.0;
            for (std::size_t ac : choices[q]) best = std::max(best, reach_of(q, ac, x));
            delta = std::max(delta, best - x[q]);
            x[q] = best;
        }
        if (delta <= kValueIterationTolerance) break;
    }

    // Extract a policy attaining that probability. Positions are assigned
    // outwards from the exit so that end components are never closed.
    Scheduler tau{std::vector<std::size_t>(nq, 0)};
    for (std::size_t q = 0; q < nq; ++q)
        if (!choices[q].empty()) tau.choice[q] = choices[q][0];
    std::vector<bool> assigned(nq, false);
    std::vector<std::vector<std::size_t>> pred(nq);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t ac : choices[q])
            for (const Edge& e : a.row(q, ac))
                if (e.to.is_position()) pred[e.to.index].push_back(q);
    std::deque<std::size_t> queue;
    auto try_assign = [&](std::size_t q) {
        if (assigned[q] || x[q] <= 0.0) return;
        for (std::size_t ac : choices[q]) {
            if (reach_of(q, ac, x) < x[q] - 1e-9) continue;
            bool progress = false;
            for (const Edge& e : a.row(q, ac))
                if (e.prob > 0.0 && (e.to.is_exit() || assigned[e.to.index])) progress = true;
            if (!progress) continue;
            tau.choice[q] = ac;
            assigned[q] = true;
            queue.push_back(q);
            return;
        }
    };
    for (std::size_t q = 0; q < nq; ++q) try_assign(q);
    while (!queue.empty()) {
        const std::size_t q = queue.front();
        queue.pop_front();
        for (std::size_t p : pred[q]) try_assign(p);
    }

    // Improve the weighted reward. Changing one action also changes the
    // probability of reaching the exit, so a switch is kept only if no
    // position gets worse; this makes the search strictly ascending.
    auto no_worse = [&](const PolicyValues& n, const PolicyValues& o, bool& better) {
        better = false;
        for (std::size_t q = 0; q < nq; ++q) {
            const double tol = 1e-12 * std::max(1.0, std::fabs(o.y[q]));
            if (n.y[q] < o.y[q] - tol) return false;
            if (n.y[q] > o.y[q] + tol) better = true;
            else if (std::fabs(n.y[q] - o.y[q]) <= tol && n.x[q] < o.x[q] - 1e-12) return false;
        }
        return true;
    };
    PolicyValues pv = evaluate(a, tau);
    for (std::size_t round = 0; round < 10000; ++round) {
        check_deadline(deadline);
        std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> candidates;
        for (std::size_t q = 0; q < nq; ++q) {
            for (std::size_t ac : choices[q]) {
                if (ac == tau.choice[q]) continue;
                double xs = 0.0, ys = 0.0;
                for (const Edge& e : a.row(q, ac)) {
                    if (e.to.is_exit()) {
                        xs += e.prob;
                    } else {
                        xs += e.prob * pv.x[e.to.index];
                        ys += e.prob * pv.y[e.to.index];
                    }
                }
                ys += a.rewards[q] * xs;
                if (ys > pv.y[q] + 1e-12 * std::max(1.0, std::fabs(pv.y[q])))
                    candidates.push_back({ys - pv.y[q], {q, ac}});
            }
        }
        if (candidates.empty()) break;
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& l, const auto& r) { return l.first > r.first; });

        bool accepted = false;
        // All positions at once (best candidate per position), then one at a time.
        Scheduler all = tau;
        std::vector<bool> seen(nq, false);
        for (const auto& c : candidates)
            if (!seen[c.second.first]) {
                seen[c.second.first] = true;
                all.choice[c.second.first] = c.second.second;
            }
        PolicyValues next = evaluate(a, all);
        bool better = false;
        if (no_worse(next, pv, better) && better) {
            tau = std::move(all);
            pv = std::move(next);
            accepted = true;
        }
        for (std::size_t k = 0; !accepted && k < candidates.size() && k < 64; ++k) {
            Scheduler one = tau;
            one.choice[candidates[k].second.first] = candidates[k].second.second;
            next = evaluate(a, one);
            if (no_worse(next, pv, better) && better) {
                tau = std::move(one);
                pv = std::move(next);
                accepted = true;
            }
        }
        if (!accepted) break;
        ++out.improvements;
    }
    out.scheduler = tau;
    out.value = solve_under(a, tau);
    return out;
}

}  // namespace compmdp
