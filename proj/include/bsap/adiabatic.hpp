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

/// @file adiabatic.hpp
/// Stepped evolution along H(s) = H0 + f(s)(HT - H0), the preparation-error
/// metric and spectral-flow tracking.
///
/// Step k of N (k = 1..N) uses H at the midpoint s_k = (k - 1/2)/N for a
/// duration dt. Trotter mode splits each step bond by bond: all even bonds,
/// then all odd bonds, each bond carrying exp(-i dt h_bond) as one two-qubit
/// gate. The alternative PauliLayer split applies exp(-i dt H_YY), then
/// exp(-i dt H_XX), then exp(-i dt H_ZZ).

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bsap/circuit.hpp"
#include "bsap/eigensolve.hpp"
#include "bsap/models.hpp"

namespace bsap {

inline constexpr int kMaxExactSites = 10;

enum class SteppingMode { Trotter, Exact };
enum class TrotterSplit { BondWise, PauliLayer };

inline std::string to_string(SteppingMode m) {
    return m == SteppingMode::Exact ? "exact" : "trotter";
}
inline SteppingMode parse_stepping_mode(const std::string &name) {
    if (name == "trotter") return SteppingMode::Trotter;
    if (name == "exact") return SteppingMode::Exact;
    detail::fail("unknown stepping mode '" + name + "'");
}
inline std::string to_string(TrotterSplit s) {
    return s == TrotterSplit::PauliLayer ? "pauli-layer" : "bond";
}
inline TrotterSplit parse_trotter_split(const std::string &name) {
    if (name == "bond") return TrotterSplit::BondWise;
    if (name == "pauli-layer") return TrotterSplit::PauliLayer;
    detail::fail("unknown Trotter split '" + name + "'");
}

struct Schedule {
    int num_steps = 1;
    /// In units of 1/Jz.
    double step_duration = 0.25;
    ScheduleFunction function{};
    SteppingMode mode = SteppingMode::Trotter;
    TrotterSplit split = TrotterSplit::BondWise;

    [[nodiscard]] double total_time() const { return num_steps * step_duration; }

    /// s_k = (k - 1/2)/N for k = 1..N.
    [[nodiscard]] double midpoint(int k) const {
        return (k - 0.5) / static_cast<double>(num_steps);
    }

    void validate() const {
        detail::require(num_steps >= 1, "schedule needs at least one step");
        detail::require(std::isfinite(step_duration) && step_duration > 0.0,
                        "step duration must be positive");
    }
};

/// exp(-i theta P) applied in place.
inline void apply_pauli_rotation(StateVector &psi, const PauliMasks &p, double theta) {
    const double c = std::cos(theta);
    const cplx ms{0.0, -std::sin(theta)};
    auto a = psi.amplitudes();
    if (p.x_mask == 0) {
        for (Index b = 0; b < a.size(); ++b) {
            a[b] *= c + ms * p.phase(b);
        }
        return;
    }
    for (Index b = 0; b < a.size(); ++b) {
        const Index partner = b ^ p.x_mask;
        if (partner < b) {
            continue;
        }
        const cplx vb = a[b];
        const cplx vp = a[partner];
        a[b] = c * vb + ms * p.phase(partner) * vp;
        a[partner] = c * vp + ms * p.phase(b) * vb;
    }
}

namespace detail {

/// exp(-i t M) for a Hermitian matrix.
inline Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd &m, double t) {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    hermitian_solve(m, values, vectors);
    Eigen::VectorXcd phases(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        phases[k] = std::exp(cplx{0.0, -t * values[k]});
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
}

/// Bond of a term: i for support {i, i+1}, L-1 for the wraparound pair, the
/// site itself for single-site terms, -1 otherwise.
inline int bond_of(const PauliTerm &t) {
    const auto s = t.support();
    const int L = t.num_sites();
    if (s.size() == 1) {
        return s[0];
    }
    if (s.size() == 2) {
        if (s[1] == s[0] + 1) {
            return s[0];
        }
        if (s[0] == 0 && s[1] == L - 1 && L > 2) {
            return L - 1;
        }
    }
    return -1;
}

/// One gate or one Pauli rotation of a Trotter step.
struct StepAction {
    std::optional<GateMatrix> gate;
    std::vector<int> targets;
    PauliMasks masks;
    double theta = 0.0;

    void apply(StateVector &psi) const {
        if (gate) {
            psi.apply(*gate, targets);
        } else {
            apply_pauli_rotation(psi, masks, theta);
        }
    }
};

inline std::vector<StepAction> bond_step(const Hamiltonian &h, double dt) {
    const int L = h.num_sites;
    std::vector<Hamiltonian> bonds(static_cast<std::size_t>(L), Hamiltonian{2, {}, std::nullopt});
    std::vector<bool> used(static_cast<std::size_t>(L), false);
    std::vector<StepAction> rest;
    for (const auto &t : h.terms) {
        const int b = bond_of(t);
        if (b < 0) {
            rest.push_back({std::nullopt, {}, t.masks(), dt * t.coefficient});
            continue;
        }
        const int j = (b + 1) % L;
        const auto &l = t.letters;
        bonds[static_cast<std::size_t>(b)].add(
            PauliTerm{t.coefficient, {l[static_cast<std::size_t>(b)], l[static_cast<std::size_t>(j)]}});
        used[static_cast<std::size_t>(b)] = true;
    }
    std::vector<StepAction> out;
    for (int parity : {0, 1}) {
        for (int b = parity; b < L; b += 2) {
            if (!used[static_cast<std::size_t>(b)] || (L == 2 && b == 1)) {
                continue;
            }
            const auto m = dense_matrix(bonds[static_cast<std::size_t>(b)]);
            out.push_back({GateMatrix(hermitian_exp(m, dt)), {b, (b + 1) % L}, {}, 0.0});
        }
    }
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

inline std::vector<StepAction> pauli_layer_step(const Hamiltonian &h, double dt) {
    auto kind = [](const PauliTerm &t) {
        int nx = 0, ny = 0, nz = 0;
        for (auto p : t.letters) {
            nx += p == Pauli::X;
            ny += p == Pauli::Y;
            nz += p == Pauli::Z;
        }
        if (nx == 0 && ny == 0) return 2;  // diagonal: joins the ZZ layer
        if (nx == 2 && ny == 0 && nz == 0) return 1;
        if (ny == 2 && nx == 0 && nz == 0) return 0;
        return 3;
    };
    std::vector<StepAction> out;
    for (int layer = 0; layer < 4; ++layer) {
        for (const auto &t : h.terms) {
            if (kind(t) == layer) {
                out.push_back({std::nullopt, {}, t.masks(), dt * t.coefficient});
            }
        }
    }
    return out;
}

} // namespace detail

/// The N step operators of a schedule, built once and applied to any number
/// of states.
class Propagator {
  public:
    Propagator(const Hamiltonian &h0, const Hamiltonian &ht, const Schedule &sched)
        : num_sites_(h0.num_sites) {
        sched.validate();
        detail::require(h0.num_sites == ht.num_sites,
                        "initial and target Hamiltonians differ in size");
        if (sched.mode == SteppingMode::Exact && num_sites_ > kMaxExactSites) {
            throw ResourceLimitError("exact stepping limited to 10 sites");
        }
        const double dt = sched.step_duration;
        for (int k = 1; k <= sched.num_steps; ++k) {
            const auto h = interpolate(h0, ht, sched.midpoint(k), sched.function);
            if (sched.mode == SteppingMode::Exact) {
                exact_.push_back(detail::hermitian_exp(dense_matrix(h), dt));
            } else if (sched.split == TrotterSplit::BondWise) {
                trotter_.push_back(detail::bond_step(h, dt));
            } else {
                trotter_.push_back(detail::pauli_layer_step(h, dt));
            }
        }
    }

    [[nodiscard]] int num_sites() const { return num_sites_; }

    void apply(StateVector &psi) const {
        detail::require(psi.num_qubits() == num_sites_,
                        "state and Hamiltonian sizes differ");
        for (const auto &u : exact_) {
            Eigen::Map<Eigen::VectorXcd> v(psi.amplitudes().data(),
                                           static_cast<Eigen::Index>(psi.dimension()));
            const Eigen::VectorXcd next = u * v;
            v = next;
        }
        for (const auto &step : trotter_) {
            for (const auto &a : step) {
                a.apply(psi);
            }
        }
    }

  private:
    int num_sites_ = 0;
    std::vector<Eigen::MatrixXcd> exact_;
    std::vector<std::vector<detail::StepAction>> trotter_;
};

/// U_tau |state>.
inline StateVector evolve(StateVector state, const Hamiltonian &h0,
                          const Hamiltonian &ht, const Schedule &sched) {
    Propagator(h0, ht, sched).apply(state);
    return state;
}

/// ||(1 - P_m)|prepared>|| for the cluster `cluster` of `spectrum`.
inline double preparation_error(const StateVector &prepared, const EigenSolution &spectrum,
                                int cluster) {
    detail::require(std::abs(prepared.norm() - 1.0) < 1e-8, "prepared state is not normalized");
    detail::require(cluster >= 0 && cluster < spectrum.num_clusters(),
                    "level index out of range");
    return std::clamp(spectrum.residual_norm(prepared, cluster), 0.0, 1.0);
}

/// As above against the dense spectrum of `ht`; `level` indexes its clusters.
inline double preparation_error(const StateVector &prepared, const Hamiltonian &ht, int level) {
    return preparation_error(prepared, dense_eigensolve(ht), level);
}

/// Eigenvalue ranks [begin, end) followed from s = 0 to s = 1.
struct LevelPartition {
    int begin = 0;
    int end = 1;
};

namespace detail {
inline void check_partition(const EigenSolution &sol, const LevelPartition &p) {
    require(p.begin >= 0 && p.begin < p.end && p.end <= sol.size(),
            "partition ranks out of range");
    const bool lo = p.begin == 0 ||
                    sol.cluster_of_rank(p.begin) != sol.cluster_of_rank(p.begin - 1);
    const bool hi = p.end == sol.size() ||
                    sol.cluster_of_rank(p.end) != sol.cluster_of_rank(p.end - 1);
    require(lo && hi, "partition splits a degenerate level");
}

inline Eigen::VectorXcd as_vector(const StateVector &s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(),
                                              static_cast<Eigen::Index>(s.dimension()));
}
} // namespace detail

/// ||(1 - P(1)) U_tau P(0)|initial>||, with P(s) the spectral projector of
/// H(s) onto the partition's ranks.
inline double ap_subspace_error(const Hamiltonian &h0, const Hamiltonian &ht,
                                const Schedule &sched, const LevelPartition &partition,
                                const StateVector &initial) {
    const auto start = dense_eigensolve(interpolate(h0, ht, 0.0, sched.function));
    const auto end = dense_eigensolve(interpolate(h0, ht, 1.0, sched.function));
    detail::check_partition(start, partition);
    detail::check_partition(end, partition);
    const auto n = partition.end - partition.begin;

    const auto b0 = start.eigenvectors.middleCols(partition.begin, n);
    const Eigen::VectorXcd projected = b0 * (b0.adjoint() * detail::as_vector(initial));
    std::vector<cplx> amps(projected.data(), projected.data() + projected.size());
    StateVector psi(initial.num_qubits(), std::move(amps));
    Propagator(h0, ht, sched).apply(psi);

    const auto b1 = end.eigenvectors.middleCols(partition.begin, n);
    const Eigen::VectorXcd v = detail::as_vector(psi);
    return (v - b1 * (b1.adjoint() * v)).norm();
}

struct LevelCrossing {
    /// Between s_grid[interval] and s_grid[interval + 1].
    int interval = 0;
    double s_low = 0.0;
    double s_high = 0.0;
};

struct SpectralFlow {
    std::vector<double> s_grid;
    /// Ascending eigenvalues per grid point.
    std::vector<Eigen::VectorXd> eigenvalue_tracks;
    /// Cluster id of every eigenvalue per grid point.
    std::vector<std::vector<int>> cluster_ids;
    /// Gap of the requested partition per grid point; empty without one.
    std::vector<double> gaps;
    std::vector<LevelCrossing> crossings;
    /// True when crossings were searched between Z-parity sectors.
    bool sector_resolved = false;

    /// Cluster sizes at grid point k, ascending in energy.
    [[nodiscard]] std::vector<int> degeneracies(std::size_t k) const {
        std::vector<int> out;
        for (int id : cluster_ids.at(k)) {
            if (static_cast<std::size_t>(id) == out.size()) {
                out.push_back(0);
            }
            ++out.back();
        }
        return out;
    }
};

namespace detail {

/// True when every term commutes with the product of all Z.
inline bool conserves_z_parity(const Hamiltonian &h) {
    for (const auto &t : h.terms) {
        if (std::popcount(t.masks().x_mask) % 2 != 0) {
            return false;
        }
    }
    return true;
}

inline std::vector<int> cluster_id_list(const EigenSolution &sol) {
    std::vector<int> ids(static_cast<std::size_t>(sol.size()));
    for (int c = 0; c < sol.num_clusters(); ++c) {
        for (int r = sol.clusters[c].begin; r < sol.clusters[c].end; ++r) {
            ids[static_cast<std::size_t>(r)] = c;
        }
    }
    return ids;
}

inline double partition_gap(const Eigen::VectorXd &e, const LevelPartition &p) {
    double gap = std::numeric_limits<double>::infinity();
    if (p.begin > 0) gap = std::min(gap, e[p.begin] - e[p.begin - 1]);
    if (p.end < e.size()) gap = std::min(gap, e[p.end] - e[p.end - 1]);
    return std::max(gap, 0.0);
}

} // namespace detail

/// Dense spectra of H(s) on `s_points`. Crossings are flagged when a level of
/// one Z-parity sector changes order with, or touches, a level of the other
/// between neighbouring grid points; without that symmetry, a drop in the
/// number of distinct levels is flagged instead.
inline SpectralFlow spectral_flow(const Hamiltonian &h0, const Hamiltonian &ht,
                                  ScheduleFunction f, const std::vector<double> &s_points,
                                  std::optional<LevelPartition> partition = std::nullopt,
                                  double tolerance = kDefaultClusterTolerance) {
    detail::require(!s_points.empty(), "spectral flow needs at least one grid point");
    if (h0.num_sites > kMaxExactSites) {
        throw ResourceLimitError("spectral flow limited to 10 sites");
    }
    SpectralFlow flow;
    flow.s_grid = s_points;
    const Index dim = Index{1} << h0.num_sites;
    std::vector<int> even, odd;
    for (Index b = 0; b < dim; ++b) {
        (std::popcount(b) % 2 == 0 ? even : odd).push_back(static_cast<int>(b));
    }

    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> sectors;
    bool resolved = true;
    for (double s : s_points) {
        const auto h = interpolate(h0, ht, s, f);
        const auto sol = dense_eigensolve(h, tolerance);
        flow.eigenvalue_tracks.push_back(sol.eigenvalues);
        flow.cluster_ids.push_back(detail::cluster_id_list(sol));
        if (partition) {
            detail::check_partition(sol, *partition);
            flow.gaps.push_back(detail::partition_gap(sol.eigenvalues, *partition));
        }
        resolved = resolved && detail::conserves_z_parity(h);
        if (resolved) {
            const Eigen::MatrixXd m = dense_matrix(h).real();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(m(even, even), Eigen::EigenvaluesOnly);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(m(odd, odd), Eigen::EigenvaluesOnly);
            sectors.emplace_back(ea.eigenvalues(), eb.eigenvalues());
        }
    }
    flow.sector_resolved = resolved;

    for (std::size_t k = 0; k + 1 < s_points.size(); ++k) {
        bool crossed = false;
        if (resolved) {
            const auto &[a0, b0] = sectors[k];
            const auto &[a1, b1] = sectors[k + 1];
            const bool interior = s_points[k + 1] < 1.0;
            for (Eigen::Index i = 0; i < a0.size() && !crossed; ++i) {
                for (Eigen::Index j = 0; j < b0.size() && !crossed; ++j) {
                    const double d0 = a0[i] - b0[j];
                    const double d1 = a1[i] - b1[j];
                    const double tol0 = tolerance * std::max(1.0, std::abs(a0[i]));
                    const double tol1 = tolerance * std::max(1.0, std::abs(a1[i]));
                    const bool apart0 = std::abs(d0) > tol0;
                    crossed = apart0 && ((std::abs(d1) > tol1 && d0 * d1 < 0.0) ||
                                         (interior && std::abs(d1) <= tol1));
                }
            }
        } else {
            crossed = flow.cluster_ids[k + 1].back() < flow.cluster_ids[k].back();
        }
        if (crossed) {
            flow.crossings.push_back({static_cast<int>(k), s_points[k], s_points[k + 1]});
        }
    }
    return flow;
}

/// Columns: s, eigenvalue_index, eigenvalue, cluster_id.
inline void write_csv(std::ostream &out, const SpectralFlow &flow) {
    out << "s,eigenvalue_index,eigenvalue,cluster_id\n";
    char buf[64];
    for (std::size_t k = 0; k < flow.s_grid.size(); ++k) {
        const auto &e = flow.eigenvalue_tracks[k];
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.10g,%ld,%.12g,%d\n", flow.s_grid[k],
                          static_cast<long>(i), e[i],
                          flow.cluster_ids[k][static_cast<std::size_t>(i)]);
            out << buf;
        }
    }
}

} // namespace bsap
