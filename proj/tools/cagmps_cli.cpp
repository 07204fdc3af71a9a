// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver. Links only the C interface.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cagmps/cagmps.h"

namespace {

struct Options {
    std::string model = "tv";
    int L = 8;
    double t = 1.0;
    double V = 2.0;
    std::vector<size_t> chi{64};
    int sweeps = 40;
    std::string clifford = "both";
    uint64_t seed = 1;
    std::string reference = "none";
    std::string out = "-";
    std::string checkpoint_dir;
    std::string input;
    std::string method;
    size_t levels = 16;
    bool quiet = false;
};

int report(cagmps_status s) {
    if (s != CAGMPS_OK) std::fprintf(stderr, "cagmps: %s: %s\n", cagmps_status_name(s), cagmps_last_error());
    return static_cast<int>(s);
}

void log_progress(const char *msg, void *) { std::fprintf(stderr, "[cagmps] %s\n", msg); }

int cmd_run(const Options &o) {
    cagmps_experiment *e = nullptr;
    cagmps_status s = cagmps_experiment_create(&e);
    if (s == CAGMPS_OK) s = cagmps_experiment_set_model(e, o.model.c_str(), o.L, o.t, o.V);
    if (s == CAGMPS_OK) s = cagmps_experiment_set_chis(e, o.chi.data(), o.chi.size());
    if (s == CAGMPS_OK) s = cagmps_experiment_set_sweeps(e, o.sweeps);
    if (s == CAGMPS_OK) s = cagmps_experiment_set_clifford(e, o.clifford.c_str());
    if (s == CAGMPS_OK) s = cagmps_experiment_set_seed(e, o.seed);
    if (s == CAGMPS_OK) s = cagmps_experiment_set_reference(e, o.reference.c_str());
    if (s == CAGMPS_OK) s = cagmps_experiment_set_checkpoint_dir(e, o.checkpoint_dir.c_str());
    if (s == CAGMPS_OK && !o.quiet) s = cagmps_experiment_set_progress(e, log_progress, nullptr);
    if (s == CAGMPS_OK) s = cagmps_experiment_run(e);
    if (s == CAGMPS_OK) s = cagmps_experiment_write_csv(e, o.out.c_str());
    cagmps_experiment_destroy(e);
    return report(s);
}

int cmd_fit(const Options &o) {
    cagmps_fit f{};
    cagmps_status s = cagmps_fit_central_charge_file(o.input.c_str(), o.method.c_str(), &f);
    if (s == CAGMPS_OK) s = cagmps_write_fit(&f, o.out.c_str());
    return report(s);
}

int cmd_gates(const Options &o) {
    size_t counts[4];
    cagmps_status s = cagmps_gate_counts(counts);
    if (s == CAGMPS_OK && (counts[0] != 11520 || counts[1] != 720 || counts[2] != 32 || counts[3] != 12)) {
        std::fprintf(stderr, "cagmps: gate counts %zu,%zu,%zu,%zu do not match 11520,720,32,12\n", counts[0], counts[1],
                     counts[2], counts[3]);
        return CAGMPS_ERR_SELF_CHECK;
    }
    if (s == CAGMPS_OK) s = cagmps_write_gate_table(o.out.c_str());
    return report(s);
}

int cmd_ed(const Options &o) {
    return report(cagmps_write_ed(o.model.c_str(), o.L, o.t, o.V, o.levels, o.out.c_str()));
}

}  // namespace

int main(int argc, char **argv) {
    Options o;
    CLI::App app{"Ground states of fermion chains with Clifford-augmented Grassmann MPS"};
    app.set_version_flag("--version", std::string(cagmps_version()));
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--model", o.model, "tv or tight-binding")->check(CLI::IsMember({"tv", "tight-binding"}));
    app.add_option("--L", o.L, "chain length");
    app.add_option("--t", o.t, "hopping amplitude");
    app.add_option("--V", o.V, "nearest-neighbour interaction (tv only)");
    app.add_option("--chi", o.chi, "bond dimensions, comma separated")->delimiter(',');
    app.add_option("--sweeps", o.sweeps, "full sweeps per run");
    app.add_option("--clifford", o.clifford, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
    app.add_option("--seed", o.seed, "seed of the random initial state");
    app.add_option("--reference", o.reference, "ed, high-chi or none")->check(CLI::IsMember({"ed", "high-chi", "none"}));
    app.add_option("--out", o.out, "output path, - for stdout");
    app.add_flag("--quiet", o.quiet, "no progress on stderr");

    auto *run = app.add_subcommand("run", "energies and bond entropies per (chi, method)");
    run->add_option("--checkpoint-dir", o.checkpoint_dir, "write a state checkpoint per run here");
    auto *fit = app.add_subcommand("fit-c", "fit S = (c/6) ln L + a + b/L to mid-bond entropies");
    fit->add_option("input", o.input, "CSV with columns L and mid_bond_entropy")->required()->check(CLI::ExistingFile);
    fit->add_option("--method", o.method, "use only rows of this method (gmps or cagmps)");
    app.add_subcommand("gates", "write the table of canonical Clifford gates");
    auto *ed = app.add_subcommand("ed", "lowest levels by exact diagonalization");
    ed->add_option("--levels", o.levels, "number of levels to print")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return CAGMPS_ERR_CONFIG;
    }

    if (run->parsed()) return cmd_run(o);
    if (fit->parsed()) return cmd_fit(o);
    if (ed->parsed()) return cmd_ed(o);
    return cmd_gates(o);
}
