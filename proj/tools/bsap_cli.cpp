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

// Command-line driver: spectrum, prepare, sweep, ap-baseline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsap/bsap.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitResourceGuard = 3;

struct Overrides {
    std::string config_path;
    std::optional<int> L, grid, steps, workers, s_points;
    std::optional<double> dt, jx_ratio, jy_ratio;
    std::optional<std::string> parity, mode, method, function, split;
    std::vector<int> level_n, level_rank;
    std::optional<std::uint64_t> seed;
    std::string out, json;
    bool timing = false;
    bool use_circuit = false;
};

void add_common(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--L", o.L, "Ring size (even)");
    cmd->add_option("--grid", o.grid, "Grid points per ratio axis");
    cmd->add_option("--steps", o.steps, "Number of steps N (default L/2)");
    cmd->add_option("--dt", o.dt, "Step duration in units of 1/Jz");
    cmd->add_option("--parity", o.parity, "Spin-flip sector: +1, -1 or both");
    cmd->add_option("--level-n", o.level_n, "Branch index n (0 or 1)");
    cmd->add_option("--level-rank", o.level_rank, "Level rank(s) inside the branch");
    cmd->add_option("--mode", o.mode, "Stepping mode: trotter or exact");
    cmd->add_option("--split", o.split, "Trotter split: bond or pauli-layer");
    cmd->add_option("--function", o.function, "Schedule function: linear, smoothstep, sin2");
    cmd->add_option("--seed", o.seed, "Seed for optimizer restarts");
    cmd->add_option("--out", o.out, "Output CSV path (stdout when empty)");
    cmd->add_option("--workers", o.workers, "Worker threads for grid sweeps");
    cmd->add_option("--json", o.json, "Also write a JSON bundle (config echo and results)");
    cmd->add_option("--jx-ratio", o.jx_ratio, "Jx/Jz for single-point commands");
    cmd->add_option("--jy-ratio", o.jy_ratio, "Jy/Jx for single-point commands");
    cmd->add_flag("--timing", o.timing, "Record wall times (breaks byte-reproducibility)");
}

std::vector<int> parse_parities(const std::string &text) {
    if (text == "both") return {1, -1};
    if (text == "+1" || text == "1") return {1};
    if (text == "-1") return {-1};
    bsap::detail::fail("parity must be +1, -1 or both");
}

bsap::ExperimentConfig build_config(const Overrides &o, bsap::Method method) {
    bsap::ExperimentConfig c;
    c.method = method;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        c = bsap::config_from_json(nlohmann::json::parse(in), c);
    }
    if (o.L) c.num_sites = *o.L;
    if (o.grid) c.grid_points = *o.grid;
    if (o.steps) c.steps = *o.steps;
    if (o.dt) c.dt = *o.dt;
    if (o.mode) c.mode = bsap::parse_stepping_mode(*o.mode);
    if (o.split) c.split = bsap::parse_trotter_split(*o.split);
    if (o.function) c.shape = bsap::parse_schedule_shape(*o.function);
    if (o.method) c.method = bsap::parse_method(*o.method);
    if (o.seed) c.seed = *o.seed;
    if (o.workers) c.workers = *o.workers;
    if (o.s_points) c.s_points = *o.s_points;
    if (o.jx_ratio) c.jx_ratio = *o.jx_ratio;
    if (o.jy_ratio) c.jy_ratio = *o.jy_ratio;
    if (!o.out.empty()) c.output = o.out;
    if (o.timing) c.timing = true;
    if (o.use_circuit) c.use_circuit = true;
    if (o.parity || !o.level_n.empty() || !o.level_rank.empty()) {
        std::vector<int> ps, ns, rs;
        for (const auto &lv : c.levels) {
            ps.push_back(lv.parity);
            ns.push_back(lv.n);
            rs.push_back(lv.level_rank);
        }
        if (o.parity) ps = parse_parities(*o.parity);
        if (!o.level_n.empty()) ns = o.level_n;
        if (!o.level_rank.empty()) rs = o.level_rank;
        auto uniq = [](std::vector<int> v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        c.levels.clear();
        for (int n : uniq(ns)) {
            for (int p : uniq(ps)) {
                for (int r : uniq(rs)) {
                    c.levels.push_back({n, p, r});
                }
            }
        }
    }
    c.validate();
    return c;
}

std::ofstream open_or_throw(const std::string &path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode | std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot write '" + path + "'");
    }
    return f;
}

void write_bundle(const std::string &path, const bsap::ExperimentConfig &c,
                  const nlohmann::json &results) {
    if (path.empty()) return;
    auto f = open_or_throw(path);
    f << nlohmann::json{{"config", bsap::to_json(c)}, {"results", results}}.dump(2) << '\n';
}

nlohmann::json records_json(const std::vector<bsap::RunRecord> &records) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &r : records) a.push_back(bsap::to_json(r));
    return a;
}

void emit_records(const bsap::ExperimentConfig &c, const std::vector<bsap::RunRecord> &records) {
    if (c.output.empty()) {
        bsap::write_csv(std::cout, records);
    } else {
        auto f = open_or_throw(c.output);
        bsap::write_csv(f, records);
    }
}

int cmd_spectrum(const Overrides &o) {
    const auto c = build_config(o, bsap::Method::Bsap);
    const auto flow = bsap::run_spectrum(c);
    if (c.output.empty()) {
        bsap::write_csv(std::cout, flow);
    } else {
        auto f = open_or_throw(c.output);
        bsap::write_csv(f, flow);
    }
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto &x : flow.crossings) {
        crossings.push_back({{"s_low", x.s_low}, {"s_high", x.s_high}});
    }
    std::cerr << "crossings flagged: " << flow.crossings.size() << '\n';
    write_bundle(o.json, c,
                 {{"degeneracies_start", flow.degeneracies(0)},
                  {"degeneracies_end", flow.degeneracies(flow.s_grid.size() - 1)},
                  {"sector_resolved", flow.sector_resolved},
                  {"crossings", crossings}});
    return 0;
}

int cmd_prepare(const Overrides &o) {
    const auto c = build_config(o, bsap::Method::Bsap);
    const auto records = bsap::run_point(c, c.jx_ratio, c.jy_ratio);
    bsap::write_csv(std::cout, records);
    if (!c.output.empty()) {
        std::ifstream probe(c.output);
        const bool fresh = !probe || probe.peek() == std::ifstream::traits_type::eof();
        probe.close();
        auto f = open_or_throw(c.output, std::ios::app);
        if (fresh) f << bsap::kCsvHeader << '\n';
        for (const auto &r : records) f << bsap::csv_row(r) << '\n';
    }
    write_bundle(o.json, c, records_json(records));
    return 0;
}

int cmd_sweep(const Overrides &o, bsap::Method method) {
    auto c = build_config(o, method);
    c.method = method;
    c.validate();
    const auto records = bsap::run_sweep(c);
    emit_records(c, records);
    write_bundle(o.json, c, records_json(records));
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Branched-subspace adiabatic preparation on the XYZ ring"};
    app.require_subcommand(1);
    Overrides o;

    auto *spectrum = app.add_subcommand("spectrum", "Eigenvalue flow of H(s) along the path");
    add_common(spectrum, o);
    spectrum->add_option("--method", o.method, "Initial Hamiltonian: bsap or ap-baseline");
    spectrum->add_option("--s-points", o.s_points, "Points on the s grid");

    auto *prepare = app.add_subcommand("prepare", "Prepare targets at one coupling point");
    add_common(prepare, o);
    prepare->add_option("--method", o.method, "bsap or ap-baseline");
    prepare->add_flag("--use-circuit", o.use_circuit,
                      "Prepare n = 1 targets through the fitted gate plan");

    auto *sweep = app.add_subcommand("sweep", "B-SAP sweep over the coupling grid");
    add_common(sweep, o);

    auto *ap = app.add_subcommand("ap-baseline", "Conventional AP sweep over the coupling grid");
    add_common(ap, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInvalidConfig;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(o);
        if (prepare->parsed()) return cmd_prepare(o);
        if (sweep->parsed()) return cmd_sweep(o, bsap::Method::Bsap);
        return cmd_sweep(o, bsap::Method::ApBaseline);
    } catch (const bsap::ResourceLimitError &e) {
        std::cerr << "resource guard: " << e.what() << '\n';
        return kExitResourceGuard;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
