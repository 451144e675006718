#include "compmdp/linear_solver.hpp"

#include <algorithm>
#include <cmath>

#include "compmdp/error.hpp"

namespace compmdp {

Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            double v = a(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += v * b(k, j);
        }
    return c;
}

DenseLU::DenseLU(Matrix a) : n_(a.rows), lu_(std::move(a)), perm_(n_) {
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t piv = k;
        double best = std::fabs(lu_(k, k));
        for (std::size_t i = k + 1; i < n_; ++i)
            if (std::fabs(lu_(i, k)) > best) {
                best = std::fabs(lu_(i, k));
                piv = i;
            }
        if (!(best > 1e-300)) throw SingularSystem("singular linear system");
        if (piv != k) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
        }
        const double d = lu_(k, k);
        for (std::size_t i = k + 1; i < n_; ++i) {
            double f = lu_(i, k) / d;
            lu_(i, k) = f;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

std::vector<double> DenseLU::solve(std::vector<double> b) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n_; i-- > 0;) {
        for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

std::vector<std::size_t> successors_first(const SparseRows& p) {
    const std::size_t n = p.size();
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<char> state(n, 0);  // 0 new, 1 open, 2 done
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t root = 0; root < n; ++root) {
        if (state[root]) continue;
        stack.push_back({root, 0});
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k < p[v].size()) {
                const std::size_t w = p[v][k++].first;
                if (!state[w]) {
                    state[w] = 1;
                    stack.push_back({w, 0});
                }
            } else {
                state[v] = 2;
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    return order;
}

TransientSolver::TransientSolver(SparseRows p, std::size_t dense_limit) : p_(std::move(p)) {
    const std::size_t n = p_.size();
    dense_ = n <= dense_limit;
    if (dense_) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = 1.0;
            for (auto [j, v] : p_[i]) a(i, j) -= v;
        }
        lu_.emplace_back(std::move(a));
    } else {
        diag_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (auto [j, v] : p_[i])
                if (j == i) diag_[i] += v;
        order_ = successors_first(p_);
    }
}

std::vector<double> TransientSolver::solve(const std::vector<double>& b) const {
    if (dense_) return lu_.front().solve(b);

    const std::size_t n = p_.size();
    std::vector<double> x(n, 0.0);
    for (std::size_t sweep = 0; sweep < kGaussSeidelMaxSweeps; ++sweep) {
        double delta = 0.0, scale = 0.0;
        for (std::size_t i : order_) {
            double acc = b[i];
            for (auto [j, v] : p_[i])
                if (j != i) acc += v * x[j];
            double nx = acc / (1.0 - diag_[i]);
            delta = std::max(delta, std::fabs(nx - x[i]));
            scale = std::max(scale, std::fabs(nx));
            x[i] = nx;
        }
        if (delta <= kGaussSeidelTolerance * scale) return x;
    }
    throw SingularSystem("Gauss-Seidel did not converge");
}

}  // namespace compmdp
