#pragma once

#include <Eigen/Dense>

#include "lrtune/common.hpp"

namespace lrtune {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct CholeskyResult {
    Mat lower;
    double jitter_used = 0.0;  // effective jitter added to the diagonal
    int escalations = 0;
};

/// Cholesky factor of M + jitter*I. A failed factorization escalates the
/// jitter tenfold up to `max_escalations` times before giving up. A zero
/// starting jitter escalates to 1e-6 * mean(diag) first.
inline CholeskyResult robust_cholesky(const Mat& M, double jitter = 0.0,
                                      int max_escalations = 3) {
    require(M.rows() == M.cols(), "cholesky: matrix must be square");
    const auto n = M.rows();
    double base = 1e-6 * M.diagonal().mean();
    if (!(base > 0.0)) base = 1e-12;
    double j = jitter;
    for (int attempt = 0; attempt <= max_escalations; ++attempt) {
        Mat shifted = M;
        if (j != 0.0) shifted.diagonal().array() += j;
        Eigen::LLT<Mat> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Mat L = llt.matrixL();
            if (L.diagonal().minCoeff() > 0.0 && L.allFinite())
                return {std::move(L), j, attempt};
        }
        j = (j == 0.0) ? base : j * 10.0;
    }
    throw NotPositiveDefinite("matrix of size " + std::to_string(n) +
                              " not positive definite after jitter escalation to " +
                              std::to_string(j / 10.0));
}

/// Solves L x = b with L lower-triangular.
inline Mat solve_lower(const Mat& L, const Mat& B) {
    return L.triangularView<Eigen::Lower>().solve(B);
}

/// Solves L^T x = b with L lower-triangular.
inline Mat solve_lower_transpose(const Mat& L, const Mat& B) {
    return L.triangularView<Eigen::Lower>().transpose().solve(B);
}

/// k-means++ seeding followed by a few Lloyd iterations; returns k centers.
/// Deterministic given the rng. Requires k <= number of distinct rows.
inline Mat kmeans_centers(const Mat& points, int k, Rng& rng, int lloyd_iters = 10) {
    const int n = static_cast<int>(points.rows());
    require(n >= 1 && k >= 1, "kmeans: need at least one point and one center");
    require(k <= n, "kmeans: more centers than points");

    Mat centers(k, points.cols());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    centers.row(0) = points.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = (points.row(i) - centers.row(c - 1)).squaredNorm();
            d2[i] = std::min(d2[i], d);
            total += d2[i];
        }
        int chosen = n - 1;
        if (total > 0.0) {
            double r = rng.uniform() * total, acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) { chosen = i; break; }
            }
        } else {
            chosen = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = points.row(chosen);
    }

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < lloyd_iters; ++iter) {
        bool moved = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = (points.row(i) - centers.row(c)).squaredNorm();
                if (d < bd) { bd = d; best = c; }
            }
            if (assign[i] != best) { assign[i] = best; moved = true; }
        }
        if (!moved && iter > 0) break;
        Mat sums = Mat::Zero(k, points.cols());
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assign[i]) += points.row(i);
            counts[assign[i]]++;
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
    }
    return centers;
}

/// Latin hypercube sample of n points in [0,1]^d.
inline Mat latin_hypercube(int n, int d, Rng& rng) {
    Mat X(n, d);
    std::vector<int> perm(n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
        for (int i = 0; i < n; ++i)
            X(i, j) = (perm[i] + rng.uniform()) / n;
    }
    return X;
}

/// Nodes and weights of the n-point Gauss-Hermite rule (weight e^{-x^2}),
/// computed by the Golub-Welsch eigen decomposition.
inline void gauss_hermite(int n, Vec& nodes, Vec& weights) {
    Mat J = Mat::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        double b = std::sqrt(i / 2.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    nodes = es.eigenvalues();
    weights.resize(n);
    const double sqrt_pi = std::sqrt(3.14159265358979323846264338327950288);
    for (int i = 0; i < n; ++i) {
        double v0 = es.eigenvectors()(0, i);
        weights(i) = sqrt_pi * v0 * v0;
    }
}

}  // namespace lrtune
