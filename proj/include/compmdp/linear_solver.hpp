#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace compmdp {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

Matrix multiply(const Matrix& a, const Matrix& b);

// LU factorization with partial pivoting.
class DenseLU {
public:
    explicit DenseLU(Matrix a);
    std::vector<double> solve(std::vector<double> b) const;
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

// Sparse rows of a substochastic matrix P over transient unknowns.
using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

// Depth-first postorder of the graph i -> j for entries (j, v) of row i, so a
// Gauss-Seidel sweep in this order sees updated successors on acyclic parts.
std::vector<std::size_t> successors_first(const SparseRows& p);

inline constexpr std::size_t kDenseLimit = 2000;
inline constexpr double kGaussSeidelTolerance = 1e-12;
inline constexpr std::size_t kGaussSeidelMaxSweeps = 1000000;

// Solves x = b + P x. Direct elimination up to kDenseLimit unknowns and
// Gauss-Seidel sweeps above that. The same instance can be reused for
// several right-hand sides.
class TransientSolver {
public:
    explicit TransientSolver(SparseRows p, std::size_t dense_limit = kDenseLimit);
    std::vector<double> solve(const std::vector<double>& b) const;
    std::size_t size() const { return p_.size(); }

private:
    SparseRows p_;
    std::vector<double> diag_;
    std::vector<std::size_t> order_;
    bool dense_ = true;
    std::vector<DenseLU> lu_;  // empty or one element
};

}  // namespace compmdp
