// Copyright 2026 The bsap Authors
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
#pragma once

/// @file eigensolve.hpp
/// Dense diagonalization with degenerate-level clustering.
///
/// Floating point splits exactly degenerate levels by round-off, so
/// eigenvalues closer than `tolerance * max(1, |lambda|)` to their neighbour
/// are chained into one cluster. Spectral projectors are built per cluster.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bsap/pauli.hpp"

namespace bsap {

inline constexpr double kDefaultClusterTolerance = 1e-8;
inline constexpr int kMaxDenseSites = 12;

/// Half-open range [begin, end) of eigenvalue ranks sharing one level.
struct EigenCluster {
    int begin = 0;
    int end = 0;
    [[nodiscard]] int size() const { return end - begin; }
};

struct EigenSolution {
    /// Ascending.
    Eigen::VectorXd eigenvalues;
    /// Column k is the eigenvector for eigenvalues[k], in the full 2^L space.
    Eigen::MatrixXcd eigenvectors;
    double cluster_tolerance = kDefaultClusterTolerance;
    std::vector<EigenCluster> clusters;

    [[nodiscard]] int size() const {
        return static_cast<int>(eigenvalues.size());
    }
    [[nodiscard]] int num_clusters() const {
        return static_cast<int>(clusters.size());
    }

    /// Index of the cluster containing eigenvalue rank `rank`.
    [[nodiscard]] int cluster_of_rank(int rank) const {
        detail::require(rank >= 0 && rank < size(), "eigenvalue rank out of range");
        for (int c = 0; c < num_clusters(); ++c) {
            if (rank < clusters[c].end) {
                return c;
            }
        }
        return num_clusters() - 1;
    }

    [[nodiscard]] double cluster_energy(int cluster) const {
        const auto &c = clusters.at(cluster);
        return eigenvalues.segment(c.begin, c.size()).mean();
    }

    /// ||(1 - P_c)|psi>|| for the spectral projector of cluster `cluster`.
    [[nodiscard]] double residual_norm(const StateVector &psi, int cluster) const {
        detail::require(cluster >= 0 && cluster < num_clusters(),
                        "cluster index out of range");
        detail::require(static_cast<Eigen::Index>(psi.dimension()) ==
                            eigenvectors.rows(),
                        "state dimension does not match the spectrum");
        const auto &c = clusters[cluster];
        const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(),
                                                   eigenvectors.rows());
        const auto block = eigenvectors.middleCols(c.begin, c.size());
        const Eigen::VectorXcd coeffs = block.adjoint() * v;
        const Eigen::VectorXcd rest = v - block * coeffs;
        return rest.norm();
    }
};

namespace detail {

inline std::vector<EigenCluster> cluster_levels(const Eigen::VectorXd &values,
                                                double tol) {
    std::vector<EigenCluster> out;
    const int n = static_cast<int>(values.size());
    int start = 0;
    for (int k = 1; k <= n; ++k) {
        const bool split =
            k == n || std::abs(values[k] - values[k - 1]) >
                          tol * std::max(1.0, std::abs(values[k - 1]));
        if (split) {
            out.push_back({start, k});
            start = k;
        }
    }
    return out;
}

inline void check_dense_size(int num_sites) {
    if (num_sites > kMaxDenseSites) {
        throw ResourceLimitError("dense diagonalization limited to 12 sites");
    }
}

/// Solves a Hermitian matrix, using the real solver when it is real.
inline void hermitian_solve(const Eigen::MatrixXcd &m, Eigen::VectorXd &values,
                            Eigen::MatrixXcd &vectors) {
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
        require(es.info() == Eigen::Success, "eigensolver did not converge");
        values = es.eigenvalues();
        vectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        require(es.info() == Eigen::Success, "eigensolver did not converge");
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    }
}

inline bool commutes_with_parity(const PauliTerm &t) {
    int anti = 0;
    for (auto p : t.letters) {
        anti += (p == Pauli::Y || p == Pauli::Z) ? 1 : 0;
    }
    return anti % 2 == 0;
}

} // namespace detail

/// Full spectrum of `h` by dense diagonalization (L <= 12).
inline EigenSolution dense_eigensolve(const Hamiltonian &h,
                                      double cluster_tolerance = kDefaultClusterTolerance) {
    detail::check_dense_size(h.num_sites);
    const Eigen::MatrixXcd m = dense_matrix(h);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    detail::require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
                    "Hamiltonian is not Hermitian");
    EigenSolution sol;
    sol.cluster_tolerance = cluster_tolerance;
    detail::hermitian_solve(m, sol.eigenvalues, sol.eigenvectors);
    sol.clusters = detail::cluster_levels(sol.eigenvalues, cluster_tolerance);
    return sol;
}

/// Spectrum of `h` restricted to the +1 or -1 eigenspace of the global spin
/// flip X^{(x)L}. Requires every term to commute with the spin flip. The
/// sector basis is (|b> + parity |~b>)/sqrt(2) over bitstrings b with bit 0
/// clear; eigenvectors are returned embedded in the full space.
inline EigenSolution parity_sector_eigensolve(const Hamiltonian &h, int parity,
                                              double cluster_tolerance = kDefaultClusterTolerance) {
    detail::require(parity == 1 || parity == -1, "parity must be +1 or -1");
    detail::check_dense_size(h.num_sites);
    for (const auto &t : h.terms) {
        detail::require(detail::commutes_with_parity(t),
                        "Hamiltonian does not commute with the spin flip");
    }
    const Index dim = Index{1} << h.num_sites;
    const Index all = dim - 1;
    const Index half = dim / 2;
    const auto hd = static_cast<Eigen::Index>(half);

    // H (|b'> + p|~b'>)/sqrt2 = sum_b alpha_b (|b> + p|~b>)/sqrt2 with
    // alpha_b = <b|H|b'> + p <~b|H|b'>.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(hd, hd);
    for (const auto &t : h.terms) {
        const auto mk = t.masks();
        for (Index col = 0; col < half; ++col) {
            const Index b = col << 1;
            const Index target = b ^ mk.x_mask;
            const cplx a = t.coefficient * mk.phase(b);
            if ((target & 1U) == 0) {
                m(static_cast<Eigen::Index>(target >> 1), static_cast<Eigen::Index>(col)) += a;
            } else {
                m(static_cast<Eigen::Index>((target ^ all) >> 1),
                  static_cast<Eigen::Index>(col)) += static_cast<double>(parity) * a;
            }
        }
    }

    EigenSolution sol;
    sol.cluster_tolerance = cluster_tolerance;
    Eigen::MatrixXcd small;
    bool z_blocks = h.num_sites % 2 == 0;
    for (const auto &t : h.terms) {
        z_blocks = z_blocks && std::popcount(t.masks().x_mask) % 2 == 0;
    }
    if (z_blocks) {
        // Even L and Z-parity conserved: the sector splits by weight parity.
        std::vector<Eigen::Index> blocks[2];
        for (Index col = 0; col < half; ++col) {
            blocks[std::popcount(col) % 2].push_back(static_cast<Eigen::Index>(col));
        }
        Eigen::VectorXd values(hd);
        Eigen::MatrixXcd vectors = Eigen::MatrixXcd::Zero(hd, hd);
        Eigen::Index at = 0;
        for (const auto &idx : blocks) {
            Eigen::VectorXd v;
            Eigen::MatrixXcd w;
            detail::hermitian_solve(m(idx, idx), v, w);
            values.segment(at, v.size()) = v;
            for (std::size_t r = 0; r < idx.size(); ++r) {
                vectors.block(idx[r], at, 1, w.cols()) = w.row(static_cast<Eigen::Index>(r));
            }
            at += v.size();
        }
        std::vector<Eigen::Index> order(static_cast<std::size_t>(hd));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return values[a] < values[b]; });
        sol.eigenvalues.resize(hd);
        small.resize(hd, hd);
        for (Eigen::Index k = 0; k < hd; ++k) {
            sol.eigenvalues[k] = values[order[static_cast<std::size_t>(k)]];
            small.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
        }
    } else {
        detail::hermitian_solve(m, sol.eigenvalues, small);
    }
    sol.eigenvectors = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), hd);
    const double r = 1.0 / std::sqrt(2.0);
    for (Index col = 0; col < half; ++col) {
        const Index b = col << 1;
        const auto row = static_cast<Eigen::Index>(col);
        sol.eigenvectors.row(static_cast<Eigen::Index>(b)) = r * small.row(row);
        sol.eigenvectors.row(static_cast<Eigen::Index>(b ^ all)) =
            (parity * r) * small.row(row);
    }
    sol.clusters = detail::cluster_levels(sol.eigenvalues, cluster_tolerance);
    return sol;
}

/// Full spectrum assembled from the two spin-flip sectors. Same contract as
/// dense_eigensolve for spin-flip-symmetric Hamiltonians, at a quarter of the
/// cost.
inline EigenSolution parity_resolved_eigensolve(const Hamiltonian &h,
                                                double cluster_tolerance = kDefaultClusterTolerance) {
    const auto plus = parity_sector_eigensolve(h, +1, cluster_tolerance);
    const auto minus = parity_sector_eigensolve(h, -1, cluster_tolerance);
    const auto n = plus.eigenvalues.size();
    Eigen::VectorXd values(2 * n);
    values << plus.eigenvalues, minus.eigenvalues;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(2 * n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return values[a] < values[b]; });

    EigenSolution sol;
    sol.cluster_tolerance = cluster_tolerance;
    sol.eigenvalues.resize(2 * n);
    sol.eigenvectors.resize(plus.eigenvectors.rows(), 2 * n);
    for (Eigen::Index k = 0; k < 2 * n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        sol.eigenvalues[k] = values[src];
        sol.eigenvectors.col(k) = src < n ? plus.eigenvectors.col(src)
                                          : minus.eigenvectors.col(src - n);
    }
    sol.clusters = detail::cluster_levels(sol.eigenvalues, cluster_tolerance);
    return sol;
}

} // namespace bsap
