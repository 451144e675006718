#include "compmdp/mc_engine.hpp"

#include <cmath>

#include "compmdp/error.hpp"

namespace compmdp {

void snap(SemanticArrowMC& f) {
    for (std::size_t k = 0; k < f.p.data.size(); ++k)
        if (f.p.data[k] < kSnapThreshold) {
            f.p.data[k] = 0.0;
            f.r.data[k] = 0.0;
        }
}

bool is_subnormal(const SemanticArrowMC& f, double tol) {
    for (std::size_t i = 0; i < f.m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < f.n; ++j) s += f.p(i, j);
        if (s > 1.0 + tol) return false;
    }
    return true;
}

bool is_realizable(const SemanticArrowMC& f) {
    for (std::size_t k = 0; k < f.p.data.size(); ++k)
        if (f.p.data[k] == 0.0 && f.r.data[k] != 0.0) return false;
    return true;
}

SemanticArrowMC solve_component_mc(const RoMC& c) {
    if (!c.is_chain()) throw MalformedModel("solve_component_mc expects a single-action model");
    return solve_under(c, Scheduler{std::vector<std::size_t>(c.num_positions(), 0)});
}

SemanticArrowMC solve_under(const RoMDP& a, const Scheduler& tau) {
    const std::size_t nq = a.num_positions();
    if (tau.choice.size() != nq) throw IncompleteScheduler("scheduler does not cover all positions");

    // Predecessors among positions and direct feeders of each exit.
    std::vector<std::vector<std::size_t>> pred(nq);
    std::vector<std::vector<std::size_t>> feeds(a.exits + 1);
    for (std::size_t q = 0; q < nq; ++q)
        for (const Edge& e : a.row(q, tau.choice[q])) {
            if (!(e.prob > 0.0)) continue;
            if (e.to.is_position())
                pred[e.to.index].push_back(q);
            else
                feeds[e.to.index].push_back(q);
        }

    SemanticArrowMC out(a.entrances, a.exits);
    for (std::size_t i = 0; i < a.entrances; ++i)
        if (a.entry[i].is_exit()) out.p(i, a.entry[i].index - 1) = 1.0;

    std::vector<std::size_t> local(nq);
    constexpr std::size_t absent = static_cast<std::size_t>(-1);
    for (std::size_t j = 1; j <= a.exits; ++j) {
        // Positions with positive probability of reaching exit j.
        std::vector<std::size_t> reach;
        std::fill(local.begin(), local.end(), absent);
        for (std::size_t q : feeds[j])
            if (local[q] == absent) {
                local[q] = reach.size();
                reach.push_back(q);
            }
        for (std::size_t h = 0; h < reach.size(); ++h)
            for (std::size_t s : pred[reach[h]])
                if (local[s] == absent) {
                    local[s] = reach.size();
                    reach.push_back(s);
                }
        if (reach.empty()) continue;

        SparseRows p(reach.size());
        std::vector<double> b(reach.size(), 0.0);
        for (std::size_t h = 0; h < reach.size(); ++h) {
            for (const Edge& e : a.row(reach[h], tau.choice[reach[h]])) {
                if (e.to.is_position()) {
                    if (local[e.to.index] != absent) p[h].push_back({local[e.to.index], e.prob});
                } else if (e.to.index == j) {
                    b[h] += e.prob;
                }
            }
        }
        TransientSolver solver(std::move(p));
        std::vector<double> x = solver.solve(b);
        std::vector<double> c(reach.size());
        for (std::size_t h = 0; h < reach.size(); ++h) c[h] = a.rewards[reach[h]] * x[h];
        std::vector<double> y = solver.solve(c);

        for (std::size_t i = 0; i < a.entrances; ++i) {
            Target t = a.entry[i];
            if (!t.is_position() || local[t.index] == absent) continue;
            out.p(i, j - 1) = x[local[t.index]];
            out.r(i, j - 1) = y[local[t.index]];
        }
    }
    snap(out);
    return out;
}

SemanticArrowMC identity_mc(std::size_t n) {
    SemanticArrowMC f(n, n);
    for (std::size_t i = 0; i < n; ++i) f.p(i, i) = 1.0;
    return f;
}

SemanticArrowMC swap_mc(std::size_t m, std::size_t n) {
    SemanticArrowMC f(m + n, n + m);
    for (std::size_t i = 0; i < m + n; ++i) f.p(i, i < m ? i + n : i - m) = 1.0;
    return f;
}

SemanticArrowMC seq_mc(const SemanticArrowMC& f, const SemanticArrowMC& g) {
    if (f.n != g.m)
        throw ArityMismatch("semantic composition of " + std::to_string(f.m) + "->" +
                            std::to_string(f.n) + " with " + std::to_string(g.m) + "->" +
                            std::to_string(g.n));
    SemanticArrowMC h(f.m, g.n);
    for (std::size_t i = 0; i < f.m; ++i)
        for (std::size_t k = 0; k < f.n; ++k) {
            const double pf = f.p(i, k), rf = f.r(i, k);
            if (pf == 0.0) continue;
            for (std::size_t j = 0; j < g.n; ++j) {
                h.p(i, j) += pf * g.p(k, j);
                h.r(i, j) += pf * g.r(k, j) + rf * g.p(k, j);
            }
        }
    snap(h);
    return h;
}

SemanticArrowMC sum_mc(const SemanticArrowMC& f, const SemanticArrowMC& g) {
    SemanticArrowMC h(f.m + g.m, f.n + g.n);
    for (std::size_t i = 0; i < f.m; ++i)
        for (std::size_t j = 0; j < f.n; ++j) {
            h.p(i, j) = f.p(i, j);
            h.r(i, j) = f.r(i, j);
        }
    for (std::size_t i = 0; i < g.m; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            h.p(f.m + i, f.n + j) = g.p(i, j);
            h.r(f.m + i, f.n + j) = g.r(i, j);
        }
    return h;
}

SemanticArrowMC trace_mc(std::size_t l, const SemanticArrowMC& f) {
    if (l > f.m || l > f.n)
        throw ArityMismatch("trace over " + std::to_string(l) + " wires of a " +
                            std::to_string(f.m) + "->" + std::to_string(f.n) + " arrow");
    const std::size_t m = f.m - l, n = f.n - l;
    SemanticArrowMC h(m, n);
    constexpr std::size_t absent = static_cast<std::size_t>(-1);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t col = l + k;
        // Loop ports that can escape to output k.
        std::vector<std::size_t> local(l, absent), ports;
        for (std::size_t j = 0; j < l; ++j)
            if (f.p(j, col) > 0.0) {
                local[j] = ports.size();
                ports.push_back(j);
            }
        for (std::size_t h2 = 0; h2 < ports.size(); ++h2)
            for (std::size_t j = 0; j < l; ++j)
                if (local[j] == absent && f.p(j, ports[h2]) > 0.0) {
                    local[j] = ports.size();
                    ports.push_back(j);
                }

        std::vector<double> x(l, 0.0), y(l, 0.0);
        if (!ports.empty()) {
            SparseRows p(ports.size());
            std::vector<double> b(ports.size());
            for (std::size_t h2 = 0; h2 < ports.size(); ++h2) {
                const std::size_t j = ports[h2];
                b[h2] = f.p(j, col);
                for (std::size_t h3 = 0; h3 < ports.size(); ++h3)
                    if (f.p(j, ports[h3]) > 0.0) p[h2].push_back({h3, f.p(j, ports[h3])});
            }
            TransientSolver solver(std::move(p));
            std::vector<double> xs = solver.solve(b);
            std::vector<double> c(ports.size());
            for (std::size_t h2 = 0; h2 < ports.size(); ++h2) {
                const std::size_t j = ports[h2];
                c[h2] = f.r(j, col);
                for (std::size_t h3 = 0; h3 < ports.size(); ++h3)
                    c[h2] += f.r(j, ports[h3]) * xs[h3];
            }
            std::vector<double> ys = solver.solve(c);
            for (std::size_t h2 = 0; h2 < ports.size(); ++h2) {
                x[ports[h2]] = xs[h2];
                y[ports[h2]] = ys[h2];
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t row = l + i;
            double pv = f.p(row, col), rv = f.r(row, col);
            for (std::size_t j = 0; j < l; ++j) {
                pv += f.p(row, j) * x[j];
                rv += f.r(row, j) * x[j] + f.p(row, j) * y[j];
            }
            h.p(i, k) = pv;
            h.r(i, k) = rv;
        }
    }
    snap(h);
    return h;
}

PathBounds path_oracle(const RoMC& c, std::size_t entrance, std::size_t exit, std::size_t horizon,
                       std::size_t budget) {
    if (!c.is_chain()) throw MalformedModel("path_oracle expects a single-action model");
    if (entrance < 1 || entrance > c.entrances || exit < 1 || exit > c.exits)
        throw ArityMismatch("entrance or exit out of range");
    PathBounds out;
    Target start = c.entry[entrance - 1];
    if (start.is_exit()) {
        out.p_lower = start.index == exit ? 1.0 : 0.0;
        return out;
    }
    const std::size_t nq = c.num_positions();
    if (horizon == 0) {
        out.residual_mass = 1.0;
        out.residual_reward = c.rewards[start.index];
        return out;
    }
    if (nq > budget / horizon) throw BudgetExceeded("path frontier exceeds budget");

    std::vector<double> mass(nq, 0.0), reward(nq, 0.0), nmass(nq), nreward(nq);
    mass[start.index] = 1.0;
    reward[start.index] = c.rewards[start.index];
    for (std::size_t step = 0; step < horizon; ++step) {
        std::fill(nmass.begin(), nmass.end(), 0.0);
        std::fill(nreward.begin(), nreward.end(), 0.0);
        bool live = false;
        for (std::size_t q = 0; q < nq; ++q) {
            if (mass[q] == 0.0) continue;
            for (const Edge& e : c.row(q, 0)) {
                if (e.to.is_exit()) {
                    if (e.to.index == exit) {
                        out.p_lower += mass[q] * e.prob;
                        out.r_lower += reward[q] * e.prob;
                    }
                    continue;
                }
                // Paths that would exceed the horizon stay in the residual.
                if (step + 1 == horizon) continue;
                const std::size_t t = e.to.index;
                nmass[t] += mass[q] * e.prob;
                nreward[t] += (reward[q] + mass[q] * c.rewards[t]) * e.prob;
                live = true;
            }
        }
        if (step + 1 == horizon) {
            for (std::size_t q = 0; q < nq; ++q) {
                if (mass[q] == 0.0) continue;
                for (const Edge& e : c.row(q, 0))
                    if (e.to.is_position()) {
                        out.residual_mass += mass[q] * e.prob;
                        out.residual_reward +=
                            (reward[q] + mass[q] * c.rewards[e.to.index]) * e.prob;
                    }
            }
            break;
        }
        std::swap(mass, nmass);
        std::swap(reward, nreward);
        if (!live) break;
    }
    return out;
}

}  // namespace compmdp
