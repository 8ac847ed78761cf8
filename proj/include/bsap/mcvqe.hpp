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

/// @file mcvqe.hpp
/// Multistate-contracted VQE over one branch of the Ising-ring levels.
///
/// Every branch member w_l is carried through |w_l> -> phi_inverse_0 circuit
/// -> parity projection -> U_tau. The subspace matrix of H_T over those
/// evolved states is diagonalized classically, and eigenstates are rebuilt
/// as real combinations of the evolved members.

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "bsap/adiabatic.hpp"
#include "bsap/circuit.hpp"
#include "bsap/subspace.hpp"

namespace bsap {

/// |w> -> phi_inverse_0 circuit -> parity projection, without evolution.
inline StateVector initial_branch_state(const StateVector &w_state, int parity) {
    auto s = w_state;
    const auto ladder = phi_inverse_circuit(s.num_qubits(), 0);
    apply_plan(s, ladder, {});
    return apply_parity_sector(s, parity);
}

/// U_tau applied to the parity-projected Phi_0^{-1} image of |w>.
inline StateVector pipeline_basis_state(const Bitstring &w, int parity, const Propagator &u) {
    auto s = initial_branch_state(StateVector::basis(w.length, w.bits), parity);
    u.apply(s);
    return s;
}

inline StateVector pipeline_basis_state(const Bitstring &w, int parity, const Hamiltonian &h0,
                                        const Hamiltonian &ht, const Schedule &sched) {
    return pipeline_basis_state(w, parity, Propagator(h0, ht, sched));
}

/// Pipeline of an arbitrary superposition over W-branch basis states.
inline StateVector pipeline_state(const StateVector &w_state, int parity, const Propagator &u) {
    auto s = initial_branch_state(w_state, parity);
    u.apply(s);
    return s;
}

/// Evolved states of every member of a W branch, in branch order.
inline std::vector<StateVector> evolve_branch(const SubspaceBasis &branch, int parity,
                                              const Propagator &u) {
    detail::require(branch.branch == Branch::W, "branch states are indexed by W members");
    std::vector<StateVector> out;
    out.reserve(branch.size());
    for (const auto &w : branch.members) {
        out.push_back(pipeline_basis_state(w, parity, u));
    }
    return out;
}

struct SubspaceMatrix {
    Eigen::MatrixXd entries;

    [[nodiscard]] int dimension() const { return static_cast<int>(entries.rows()); }

    [[nodiscard]] double asymmetry() const {
        return (entries - entries.transpose()).cwiseAbs().maxCoeff();
    }
};

/// How the overlap states Psi^p_ml = (Psi_m + (-1)^p Psi_l)/sqrt2 are evolved.
enum class OverlapAssembly {
    /// Each superposition is sent through the pipeline on its own.
    Literal,
    /// Members are evolved once and superposed afterwards (the pipeline is linear).
    Linear,
};

namespace detail {

inline double overlap_entry(const StateVector &pm, const StateVector &hpm,
                            const StateVector &pl, const StateVector &hpl) {
    const cplx r{1.0 / std::sqrt(2.0), 0.0};
    const auto plus = (pm + pl) * r;
    const auto hplus = (hpm + hpl) * r;
    const auto minus = (pm - pl) * r;
    const auto hminus = (hpm - hpl) * r;
    return 0.5 * (inner(plus, hplus).real() - inner(minus, hminus).real());
}

} // namespace detail

/// E_mm = <Psi_m|U^+ H_T U|Psi_m>; E_ml = (<Psi^0_ml|..|Psi^0_ml> - <Psi^1_ml|..|Psi^1_ml>)/2.
inline SubspaceMatrix build_subspace_matrix(const SubspaceBasis &branch, int parity,
                                            const Hamiltonian &ht, const Propagator &u,
                                            OverlapAssembly assembly = OverlapAssembly::Linear) {
    detail::require(branch.size() > 0, "empty branch");
    const auto d = static_cast<Eigen::Index>(branch.size());
    SubspaceMatrix mat{Eigen::MatrixXd::Zero(d, d)};
    if (assembly == OverlapAssembly::Linear) {
        const auto states = evolve_branch(branch, parity, u);
        std::vector<StateVector> hstates;
        hstates.reserve(states.size());
        for (const auto &s : states) {
            hstates.push_back(apply_hamiltonian(ht, s));
        }
        for (Eigen::Index m = 0; m < d; ++m) {
            const auto um = static_cast<std::size_t>(m);
            mat.entries(m, m) = inner(states[um], hstates[um]).real();
            for (Eigen::Index l = 0; l < d; ++l) {
                if (l != m) {
                    const auto ul = static_cast<std::size_t>(l);
                    mat.entries(m, l) =
                        detail::overlap_entry(states[um], hstates[um], states[ul], hstates[ul]);
                }
            }
        }
        return mat;
    }
    const int L = branch.num_sites;
    const cplx r{1.0 / std::sqrt(2.0), 0.0};
    auto energy = [&](const StateVector &w_state) {
        return expectation(pipeline_state(w_state, parity, u), ht);
    };
    for (Eigen::Index m = 0; m < d; ++m) {
        const auto wm = StateVector::basis(L, branch.members[static_cast<std::size_t>(m)].bits);
        mat.entries(m, m) = energy(wm);
        for (Eigen::Index l = 0; l < d; ++l) {
            if (l == m) {
                continue;
            }
            const auto wl = StateVector::basis(L, branch.members[static_cast<std::size_t>(l)].bits);
            mat.entries(m, l) = 0.5 * (energy((wm + wl) * r) - energy((wm - wl) * r));
        }
    }
    return mat;
}

struct ReconstructedEigenpair {
    double energy = 0.0;
    /// Real unit vector over the branch basis; first nonzero entry positive.
    Eigen::VectorXd coefficients;
    int level_rank = 0;
};

/// Ascending eigenpairs of a symmetric subspace matrix.
inline std::vector<ReconstructedEigenpair> diagonalize_subspace(const SubspaceMatrix &mat) {
    detail::require(mat.dimension() > 0, "empty subspace matrix");
    const double scale = std::max(1.0, mat.entries.cwiseAbs().maxCoeff());
    detail::require(mat.asymmetry() <= 1e-10 * scale, "subspace matrix is not symmetric");
    const Eigen::MatrixXd sym = 0.5 * (mat.entries + mat.entries.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    detail::require(es.info() == Eigen::Success, "eigensolver did not converge");
    std::vector<ReconstructedEigenpair> out;
    for (Eigen::Index k = 0; k < sym.rows(); ++k) {
        Eigen::VectorXd c = es.eigenvectors().col(k);
        c.normalize();
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            if (std::abs(c[i]) > 1e-12) {
                if (c[i] < 0.0) {
                    c = -c;
                }
                break;
            }
        }
        out.push_back({es.eigenvalues()[k], std::move(c), static_cast<int>(k)});
    }
    return out;
}

/// sum_l c_l |phi_l> over evolved branch states.
inline StateVector reconstruct(const Eigen::VectorXd &coefficients,
                               const std::vector<StateVector> &evolved) {
    detail::require(static_cast<std::size_t>(coefficients.size()) == evolved.size() &&
                        !evolved.empty(),
                    "coefficient count does not match the branch");
    StateVector out = evolved[0] * cplx{coefficients[0], 0.0};
    for (std::size_t l = 1; l < evolved.size(); ++l) {
        out += evolved[l] * cplx{coefficients[static_cast<Eigen::Index>(l)], 0.0};
    }
    return out;
}

/// Amplitudes of `s` on the members of `branch`, real parts only.
inline Eigen::VectorXd branch_amplitudes(const StateVector &s, const SubspaceBasis &branch) {
    Eigen::VectorXd a(static_cast<Eigen::Index>(branch.size()));
    for (std::size_t l = 0; l < branch.size(); ++l) {
        a[static_cast<Eigen::Index>(l)] = s[branch.members[l].bits].real();
    }
    return a;
}

struct FitOptions {
    int max_sweeps = 200;
    int restarts = 8;
    double target_loss = 1e-8;
    std::uint64_t seed = 0;
};

struct FitResult {
    std::vector<double> params;
    int component_bit = 0;
    double loss = std::numeric_limits<double>::infinity();
    int sweeps = 0;
};

/// 1 - sum_l c_l a_l(params) for the plan run on |reference>.
inline double fit_loss(const Eigen::VectorXd &target, const CircuitPlan &plan,
                       std::span<const double> params, const Bitstring &reference,
                       const SubspaceBasis &branch) {
    const auto a = branch_amplitudes(explore_state(plan, params, reference), branch);
    return 1.0 - target.dot(a);
}

/// Minimizes the overlap loss over the plan's angles by exact coordinate
/// updates: along one angle the loss is A cos x + B sin x + C, so three
/// evaluations fix its minimizer. Sweeps restart from random angles, and the
/// component bit is toggled when the zero-angle overlap is negative.
inline FitResult fit_parameters(const Eigen::VectorXd &target, CircuitPlan plan,
                                const Bitstring &reference, const FitOptions &opts = {}) {
    detail::require(std::abs(target.norm() - 1.0) < 1e-10, "target coefficients must be unit norm");
    plan.validate();
    const int level = hamming_weight(reference) / 2;
    detail::require(hamming_weight(reference) % 2 == 0, "reference must have even weight");
    const auto branch = enumerate_branch(plan.num_qubits, level, Branch::W);
    detail::require(static_cast<std::size_t>(target.size()) == branch.size(),
                    "target length does not match the branch");

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    const auto np = static_cast<std::size_t>(plan.num_params);

    FitResult best;
    std::vector<double> zeros(np, 0.0);
    // Pick the component whose identity point already overlaps non-negatively.
    int start_bit = 0;
    {
        plan.component_bit = 0;
        if (fit_loss(target, plan, zeros, reference, branch) > 1.0) {
            start_bit = 1;
        }
    }
    for (int attempt = 0; attempt < 2 * opts.restarts && best.loss > opts.target_loss; ++attempt) {
        plan.component_bit = (start_bit + attempt % 2) % 2;
        std::vector<double> p(np, 0.0);
        if (attempt >= 2) {
            for (auto &x : p) {
                x = angle(rng);
            }
        }
        double loss = fit_loss(target, plan, p, reference, branch);
        int sweep = 0;
        for (; sweep < opts.max_sweeps && loss > opts.target_loss; ++sweep) {
            const double before = loss;
            for (std::size_t k = 0; k < np; ++k) {
                const double x0 = p[k];
                const double l0 = loss;
                p[k] = x0 + std::numbers::pi / 2;
                const double lp = fit_loss(target, plan, p, reference, branch);
                p[k] = x0 - std::numbers::pi / 2;
                const double lm = fit_loss(target, plan, p, reference, branch);
                p[k] = x0 - std::numbers::pi / 2 -
                       std::atan2(2.0 * l0 - lp - lm, lp - lm);
                p[k] = std::remainder(p[k], 2.0 * std::numbers::pi);
                loss = fit_loss(target, plan, p, reference, branch);
            }
            if (before - loss < 1e-13) {
                ++sweep;
                break;
            }
        }
        if (loss < best.loss) {
            best = {p, plan.component_bit, loss, sweep};
        }
    }
    return best;
}

} // namespace bsap
