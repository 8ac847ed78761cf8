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

/// @file experiment.hpp
/// Experiment configuration, per-point preparation runs and grid sweeps.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bsap/mcvqe.hpp"

namespace bsap {

inline constexpr int kMaxSweepSites = 12;

enum class Method { Bsap, ApBaseline };

inline std::string to_string(Method m) {
    return m == Method::ApBaseline ? "ap-baseline" : "bsap";
}
inline Method parse_method(const std::string &name) {
    if (name == "bsap") return Method::Bsap;
    if (name == "ap-baseline") return Method::ApBaseline;
    detail::fail("unknown method '" + name + "'");
}

/// One target. For B-SAP: branch n, spin-flip sector `parity`, and the rank
/// inside the branch's subspace spectrum. For the AP baseline only
/// `level_rank` is used: the m-th eigenstate of H_0 is sent to the level of
/// H_T holding eigenvalue rank m.
struct LevelSpec {
    int n = 0;
    int parity = 1;
    int level_rank = 0;
};

struct ExperimentConfig {
    int num_sites = 10;
    int grid_points = 21;
    std::array<double, 2> jx_range{0.0, 1.0};
    std::array<double, 2> jy_range{0.0, 1.0};
    double jz = 1.0;
    /// Defaults to L/2 when unset.
    std::optional<int> steps;
    double dt = 0.25;
    ScheduleShape shape = ScheduleShape::Linear;
    SteppingMode mode = SteppingMode::Trotter;
    TrotterSplit split = TrotterSplit::BondWise;
    std::vector<LevelSpec> levels{LevelSpec{}};
    Method method = Method::Bsap;
    std::uint64_t seed = 0;
    std::string output;
    int workers = 1;
    /// Record wall times; off by default so outputs are byte-reproducible.
    bool timing = false;
    /// Single coupling point for `prepare` and `spectrum`.
    double jx_ratio = 0.5;
    double jy_ratio = 0.5;
    /// Grid size along s for `spectrum`.
    int s_points = 101;
    /// Prepare n = 1 targets through the fitted circuit instead of the
    /// direct combination of evolved branch states.
    bool use_circuit = false;

    [[nodiscard]] int num_steps() const { return steps.value_or(num_sites / 2); }

    [[nodiscard]] Schedule schedule() const {
        return {num_steps(), dt / std::abs(jz), ScheduleFunction{shape}, mode, split};
    }

    /// Ratio values along one axis, endpoints included.
    [[nodiscard]] static std::vector<double> axis(const std::array<double, 2> &range, int points) {
        std::vector<double> out;
        for (int k = 0; k < points; ++k) {
            out.push_back(points == 1 ? range[0]
                                      : range[0] + (range[1] - range[0]) * k / (points - 1));
        }
        return out;
    }

    void validate() const {
        detail::require(num_sites >= 4 && num_sites % 2 == 0,
                        "L must be an even integer >= 4");
        if (num_sites > kMaxSweepSites) {
            throw ResourceLimitError("runs limited to L <= 12");
        }
        if (mode == SteppingMode::Exact && num_sites > kMaxExactSites) {
            throw ResourceLimitError("exact stepping limited to L <= 10");
        }
        detail::require(grid_points >= 1, "grid needs at least one point per axis");
        for (const auto *r : {&jx_range, &jy_range}) {
            detail::require(std::abs((*r)[0]) <= 1.0 && std::abs((*r)[1]) <= 1.0,
                            "ratio ranges must lie in [-1, 1] to keep |Jz| >= |Jx| >= |Jy|");
        }
        detail::require(std::abs(jx_ratio) <= 1.0 && std::abs(jy_ratio) <= 1.0,
                        "ratios must lie in [-1, 1]");
        detail::require(std::isfinite(jz) && jz != 0.0, "Jz must be finite and non-zero");
        detail::require(num_steps() >= 1, "steps must be >= 1");
        detail::require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
        detail::require(workers >= 1, "workers must be >= 1");
        detail::require(s_points >= 1, "s grid needs at least one point");
        detail::require(!levels.empty(), "no target levels");
        for (const auto &lv : levels) {
            if (method == Method::ApBaseline) {
                detail::require(lv.level_rank >= 0 && lv.level_rank < (1 << num_sites),
                                "AP level index out of range");
                continue;
            }
            detail::require(lv.parity == 1 || lv.parity == -1, "parity must be +1 or -1");
            if (lv.n >= 2) {
                detail::fail("level n = " + std::to_string(lv.n) +
                             " is not constructed in this artifact (only n = 0 and n = 1)");
            }
            detail::require(lv.n >= 0, "level n must be 0 or 1");
            detail::require(lv.level_rank >= 0 &&
                                static_cast<std::uint64_t>(lv.level_rank) <
                                    branch_dimension(num_sites, lv.n),
                            "level rank exceeds the branch dimension");
        }
    }
};

inline nlohmann::json to_json(const ExperimentConfig &c) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto &lv : c.levels) {
        levels.push_back({{"n", lv.n}, {"parity", lv.parity}, {"level_rank", lv.level_rank}});
    }
    return {{"L", c.num_sites},
            {"grid_points", c.grid_points},
            {"jx_range", c.jx_range},
            {"jy_range", c.jy_range},
            {"jz", c.jz},
            {"schedule",
             {{"steps", c.num_steps()},
              {"dt", c.dt},
              {"function", to_string(c.shape)},
              {"mode", to_string(c.mode)},
              {"split", to_string(c.split)}}},
            {"levels", levels},
            {"method", to_string(c.method)},
            {"seed", c.seed},
            {"output", c.output},
            {"workers", c.workers},
            {"timing", c.timing},
            {"point", {c.jx_ratio, c.jy_ratio}},
            {"s_points", c.s_points},
            {"use_circuit", c.use_circuit}};
}

/// Reads the fields present in `j`; absent ones keep the values in `base`.
/// Unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json &j, ExperimentConfig base = {}) {
    detail::require(j.is_object(), "config must be a JSON object");
    static const std::vector<std::string> known{
        "L", "grid_points", "jx_range", "jy_range", "jz", "schedule", "levels", "method",
        "seed", "output", "workers", "timing", "point", "s_points", "use_circuit"};
    for (const auto &[key, _] : j.items()) {
        detail::require(std::find(known.begin(), known.end(), key) != known.end(),
                        "unknown config key '" + key + "'");
    }
    auto &c = base;
    if (j.contains("L")) c.num_sites = j.at("L").get<int>();
    if (j.contains("grid_points")) c.grid_points = j.at("grid_points").get<int>();
    if (j.contains("jx_range")) c.jx_range = j.at("jx_range").get<std::array<double, 2>>();
    if (j.contains("jy_range")) c.jy_range = j.at("jy_range").get<std::array<double, 2>>();
    if (j.contains("jz")) c.jz = j.at("jz").get<double>();
    if (j.contains("schedule")) {
        const auto &s = j.at("schedule");
        if (s.contains("steps")) c.steps = s.at("steps").get<int>();
        if (s.contains("dt")) c.dt = s.at("dt").get<double>();
        if (s.contains("function")) c.shape = parse_schedule_shape(s.at("function").get<std::string>());
        if (s.contains("mode")) c.mode = parse_stepping_mode(s.at("mode").get<std::string>());
        if (s.contains("split")) c.split = parse_trotter_split(s.at("split").get<std::string>());
    }
    if (j.contains("levels")) {
        c.levels.clear();
        for (const auto &lv : j.at("levels")) {
            c.levels.push_back({lv.value("n", 0), lv.value("parity", 1), lv.value("level_rank", 0)});
        }
    }
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    if (j.contains("point")) {
        const auto p = j.at("point").get<std::array<double, 2>>();
        c.jx_ratio = p[0];
        c.jy_ratio = p[1];
    }
    if (j.contains("s_points")) c.s_points = j.at("s_points").get<int>();
    if (j.contains("use_circuit")) c.use_circuit = j.at("use_circuit").get<bool>();
    return c;
}

struct RunRecord {
    double jx_ratio = 0.0;
    double jy_ratio = 0.0;
    int parity = 1;
    int n = 0;
    int level_rank = 0;
    int steps = 0;
    double error = 0.0;
    double energy_estimate = 0.0;
    long long wall_time_ms = 0;
    /// Final loss of the circuit fit when the circuit path was used.
    std::optional<double> fit_loss;

    [[nodiscard]] auto key() const {
        return std::make_tuple(jx_ratio, jy_ratio, parity, n, level_rank);
    }
};

inline nlohmann::json to_json(const RunRecord &r) {
    nlohmann::json j{{"jx_ratio", r.jx_ratio},
                     {"jy_ratio", r.jy_ratio},
                     {"parity", r.parity},
                     {"n", r.n},
                     {"level_rank", r.level_rank},
                     {"steps", r.steps},
                     {"error", r.error},
                     {"energy_estimate", r.energy_estimate},
                     {"wall_time_ms", r.wall_time_ms}};
    if (r.fit_loss) {
        j["fit_loss"] = *r.fit_loss;
    }
    return j;
}

inline constexpr const char *kCsvHeader =
    "jx_ratio,jy_ratio,parity,n,level_rank,steps,error,energy_estimate,wall_time_ms";

inline std::string csv_row(const RunRecord &r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%d,%d,%d,%.10e,%.12g,%lld", r.jx_ratio,
                  r.jy_ratio, r.parity, r.n, r.level_rank, r.steps, r.error, r.energy_estimate,
                  r.wall_time_ms);
    return buf;
}

inline void write_csv(std::ostream &out, const std::vector<RunRecord> &records) {
    out << kCsvHeader << '\n';
    for (const auto &r : records) {
        out << csv_row(r) << '\n';
    }
}

/// Sum of the branch dimensions below level n: the sector rank of the first
/// state of branch n in the ordering of the Ising-ring levels.
inline int sector_offset(int num_sites, int n) {
    std::uint64_t off = 0;
    for (int k = 0; k < n; ++k) {
        off += branch_dimension(num_sites, k);
    }
    return static_cast<int>(off);
}

/// Index of the m-th lowest eigenstate of a diagonal Hamiltonian.
inline Index diagonal_level_state(const Hamiltonian &h, int m) {
    const Index dim = Index{1} << h.num_sites;
    std::vector<std::pair<double, Index>> e;
    e.reserve(dim);
    for (Index b = 0; b < dim; ++b) {
        double v = 0.0;
        for (const auto &t : h.terms) {
            const auto mk = t.masks();
            detail::require(mk.x_mask == 0, "Hamiltonian is not diagonal");
            v += t.coefficient * mk.phase(b).real();
        }
        e.emplace_back(v, b);
    }
    std::sort(e.begin(), e.end());
    detail::require(m >= 0 && static_cast<Index>(m) < dim, "level index out of range");
    return e[static_cast<std::size_t>(m)].second;
}

namespace detail {

struct CellTimer {
    bool on;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    [[nodiscard]] long long ms() const {
        if (!on) return 0;
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

inline std::vector<RunRecord> run_bsap_cell(const ExperimentConfig &cfg, double rx, double ry) {
    const int L = cfg.num_sites;
    const double jx = rx * cfg.jz;
    const auto ht = build_xyz(L, jx, ry * jx, cfg.jz);
    const auto h0 = build_h0_bsap(L, cfg.jz);
    const auto sched = cfg.schedule();
    const Propagator u(h0, ht, sched);

    std::vector<RunRecord> out;
    std::map<int, EigenSolution> spectra;
    for (const auto &lv : cfg.levels) {
        if (!spectra.count(lv.parity)) {
            spectra.emplace(lv.parity, parity_sector_eigensolve(ht, lv.parity));
        }
    }
    std::map<std::pair<int, int>, std::pair<std::vector<StateVector>, std::vector<ReconstructedEigenpair>>>
        branches;
    for (const auto &lv : cfg.levels) {
        const CellTimer timer{cfg.timing};
        const auto key = std::make_pair(lv.parity, lv.n);
        if (!branches.count(key)) {
            const auto basis = enumerate_branch(L, lv.n, Branch::W);
            auto evolved = evolve_branch(basis, lv.parity, u);
            const auto mat = build_subspace_matrix(basis, lv.parity, ht, u);
            branches.emplace(key, std::make_pair(std::move(evolved), diagonalize_subspace(mat)));
        }
        const auto &[evolved, pairs] = branches.at(key);
        const auto &pair = pairs.at(static_cast<std::size_t>(lv.level_rank));
        const auto &spectrum = spectra.at(lv.parity);

        RunRecord rec;
        rec.jx_ratio = rx;
        rec.jy_ratio = ry;
        rec.parity = lv.parity;
        rec.n = lv.n;
        rec.level_rank = lv.level_rank;
        rec.steps = sched.num_steps;
        StateVector prepared;
        if (cfg.use_circuit && lv.n == 1) {
            const auto plan = build_n1_plan(L, PlanMode::Orthogonal);
            const auto reference = Bitstring{0b11, L};
            FitOptions opts;
            opts.seed = cfg.seed;
            auto fit = fit_parameters(pair.coefficients, plan, reference, opts);
            auto fitted = plan;
            fitted.component_bit = fit.component_bit;
            prepared = pipeline_state(explore_state(fitted, fit.params, reference), lv.parity, u);
            rec.fit_loss = fit.loss;
        } else {
            prepared = reconstruct(pair.coefficients, evolved);
        }
        const int rank = sector_offset(L, lv.n) + lv.level_rank;
        rec.error = preparation_error(prepared, spectrum, spectrum.cluster_of_rank(rank));
        rec.energy_estimate = pair.energy;
        rec.wall_time_ms = timer.ms();
        out.push_back(rec);
    }
    return out;
}

inline std::vector<RunRecord> run_ap_cell(const ExperimentConfig &cfg, double rx, double ry) {
    const int L = cfg.num_sites;
    const double jx = rx * cfg.jz;
    const auto ht = build_xyz(L, jx, ry * jx, cfg.jz);
    const auto h0 = build_h0_ap(L, cfg.jz);
    const auto sched = cfg.schedule();
    const Propagator u(h0, ht, sched);
    const auto spectrum = parity_resolved_eigensolve(ht);
    std::vector<RunRecord> out;
    for (const auto &lv : cfg.levels) {
        const CellTimer timer{cfg.timing};
        const int cluster = spectrum.cluster_of_rank(lv.level_rank);
        auto psi = StateVector::basis(L, diagonal_level_state(h0, lv.level_rank));
        u.apply(psi);
        // Report the spin-flip sector of the target level.
        const auto &cl = spectrum.clusters[static_cast<std::size_t>(cluster)];
        const Eigen::VectorXcd v = spectrum.eigenvectors.col(cl.begin);
        StateVector target(L, std::vector<cplx>(v.data(), v.data() + v.size()));
        RunRecord rec;
        rec.jx_ratio = rx;
        rec.jy_ratio = ry;
        rec.parity = spin_flip_expectation(target) >= 0.0 ? 1 : -1;
        rec.level_rank = lv.level_rank;
        rec.steps = sched.num_steps;
        rec.error = preparation_error(psi, spectrum, cluster);
        rec.energy_estimate = expectation(psi, ht);
        rec.wall_time_ms = timer.ms();
        out.push_back(rec);
    }
    return out;
}

} // namespace detail

/// All records for one coupling point.
inline std::vector<RunRecord> run_point(const ExperimentConfig &cfg, double jx_ratio,
                                        double jy_ratio) {
    cfg.validate();
    return cfg.method == Method::Bsap ? detail::run_bsap_cell(cfg, jx_ratio, jy_ratio)
                                      : detail::run_ap_cell(cfg, jx_ratio, jy_ratio);
}

/// Full grid sweep, `cfg.workers` threads. Rows come back sorted by
/// (jx_ratio, jy_ratio, parity, n, level_rank) whatever the execution order.
inline std::vector<RunRecord> run_sweep(const ExperimentConfig &cfg) {
    cfg.validate();
    detail::require(cfg.grid_points >= 2, "sweeps need at least two grid points per axis");
    const auto xs = ExperimentConfig::axis(cfg.jx_range, cfg.grid_points);
    const auto ys = ExperimentConfig::axis(cfg.jy_range, cfg.grid_points);
    std::vector<std::pair<double, double>> cells;
    for (double x : xs) {
        for (double y : ys) {
            cells.emplace_back(x, y);
        }
    }
    std::vector<std::vector<RunRecord>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                results[i] = run_point(cfg, cells[i].first, cells[i].second);
            } catch (...) {
                const std::lock_guard lock(err_mu);
                if (!err) err = std::current_exception();
                next = cells.size();
            }
        }
    };
    const int nthreads = std::min<int>(cfg.workers, static_cast<int>(cells.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
    std::vector<RunRecord> all;
    for (auto &r : results) {
        all.insert(all.end(), r.begin(), r.end());
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const RunRecord &a, const RunRecord &b) { return a.key() < b.key(); });
    return all;
}

/// Spectral flow for the configured method at the configured single point.
inline SpectralFlow run_spectrum(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.num_sites > kMaxExactSites) {
        throw ResourceLimitError("spectrum limited to L <= 10");
    }
    const double jx = cfg.jx_ratio * cfg.jz;
    const auto ht = build_xyz(cfg.num_sites, jx, cfg.jy_ratio * jx, cfg.jz);
    const auto h0 = cfg.method == Method::Bsap ? build_h0_bsap(cfg.num_sites, cfg.jz)
                                               : build_h0_ap(cfg.num_sites, cfg.jz);
    return spectral_flow(h0, ht, ScheduleFunction{cfg.shape},
                         ExperimentConfig::axis({0.0, 1.0}, cfg.s_points));
}

} // namespace bsap
