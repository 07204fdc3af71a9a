// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "bench.hpp"
#include "ed.hpp"
#include "errors.hpp"

using namespace cagmps;

namespace {

std::vector<std::string> lines_of(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("cagmps_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(fit, recovers_exact_coefficients) {
    std::vector<double> L{16, 24, 32, 48, 64}, S;
    for (double x : L) S.push_back(std::log(x) / 6.0 + 0.5 + 0.2 / x);
    FitResult f = fit_central_charge(L, S);
    EXPECT_NEAR(f.c, 1.0, 1e-10);
    EXPECT_NEAR(f.a, 0.5, 1e-10);
    EXPECT_NEAR(f.b, 0.2, 1e-10);
    EXPECT_LE(f.rms_residual, 1e-12);
    EXPECT_EQ(f.points, 5u);
}

TEST(fit, constant_data) {
    FitResult f = fit_central_charge({10, 20, 40}, {0.7, 0.7, 0.7});
    EXPECT_NEAR(f.c, 0.0, 1e-10);
    EXPECT_NEAR(f.b, 0.0, 1e-9);
    EXPECT_NEAR(f.a, 0.7, 1e-10);
}

TEST(fit, needs_three_distinct_sizes) {
    EXPECT_THROW(fit_central_charge({16, 16, 32, 32}, {1, 1, 2, 2}), ConfigError);
    EXPECT_THROW(fit_central_charge({16, 32}, {1, 2}), ConfigError);
    EXPECT_THROW(fit_central_charge({16, -3, 32}, {1, 2, 3}), ConfigError);
}

TEST(fit, reads_csv_with_method_filter) {
    std::string csv = "L,chi,method,mid_bond_entropy\n";
    for (double L : {16.0, 24.0, 32.0, 48.0}) {
        csv += format_double(L) + ",32,gmps," + format_double(std::log(L) / 6.0 + 0.3) + "\n";
        csv += format_double(L) + ",32,cagmps,\"" + format_double(0.5 * std::log(L) / 6.0) + "\"\n";
    }
    FitResult g = fit_central_charge_csv(csv, "gmps");
    EXPECT_NEAR(g.c, 1.0, 1e-10);
    EXPECT_EQ(g.points, 4u);
    FitResult c = fit_central_charge_csv(csv, "cagmps");
    EXPECT_NEAR(c.c, 0.5, 1e-10);
    EXPECT_THROW(fit_central_charge_csv("L,energy\n1,2\n", ""), ConfigError);
    EXPECT_THROW(fit_central_charge_csv("L,S\n16,x\n24,1\n32,1\n", ""), ConfigError);
}

TEST(format, seventeen_digits_round_trip) {
    for (double x : {0.1, -2.23606797749979, 1e-300, 123456789.123456789}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
    EXPECT_EQ(format_double(-0.0), "0");
}

TEST(gates, table_is_deterministic_and_complete) {
    std::string a = gate_table(), b = gate_table();
    EXPECT_EQ(a, b);
    auto ls = lines_of(a);
    EXPECT_NE(std::find(ls.begin(), ls.end(), "11520,720,32,12"), ls.end());
    int records = 0, tableau_rows = 0;
    for (const auto &l : ls) {
        records += l.rfind("gate ", 0) == 0;
        tableau_rows += l.find(" -> ") != std::string::npos;
    }
    EXPECT_EQ(records, 12);
    EXPECT_EQ(tableau_rows, 12 * 15);
}

TEST(ed, csv_examples) {
    ModelSpec tb{ModelKind::TightBinding, 4, 1.0, 0.0};
    auto ls = lines_of(ed_csv(tb));
    ASSERT_GE(ls.size(), 2u);
    EXPECT_EQ(ls[0], "L,t,V,level,energy");
    EXPECT_EQ(ls[1].rfind("4,1,0,0,-2.2360679", 0), 0u) << ls[1];
    EXPECT_EQ(ls.size(), 17u);

    ModelSpec two{ModelKind::TV, 2, 1.0, 0.0};
    auto spec = ed_spectrum(two);
    ASSERT_EQ(spec.size(), 4u);
    const double want[] = {-1, 0, 0, 1};
    for (int k = 0; k < 4; k++) EXPECT_NEAR(spec[k], want[k], 1e-12);
    EXPECT_EQ(lines_of(ed_csv(two)).size(), 5u);

    EXPECT_THROW(ed_csv({ModelKind::TV, 13, 1.0, 2.0}), ConfigError);
}

TEST(experiment, validation) {
    ExperimentConfig c;
    c.model = {ModelKind::TV, 14, 1.0, 2.0};
    c.reference = Reference::ED;
    EXPECT_THROW(c.validate(), ConfigError);
    c.reference = Reference::HighChi;
    EXPECT_NO_THROW(c.validate());
    c.chis = {};
    EXPECT_THROW(c.validate(), ConfigError);
    c.chis = {8};
    c.sweeps = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.sweeps = 1;
    c.model.t = -1;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(parse_method_set("maybe"), ConfigError);
    EXPECT_THROW(parse_reference("dmrg"), ConfigError);
}

TEST(experiment, ed_reference_rows) {
    ExperimentConfig c;
    c.model = {ModelKind::TV, 8, 1.0, 2.0};
    c.chis = {64};
    c.sweeps = 10;
    c.reference = Reference::ED;
    c.checkpoint_dir = scratch("ckpt").string();
    auto pts = run_experiment(c);
    ASSERT_EQ(pts.size(), 2u);
    for (const auto &p : pts) {
        EXPECT_LE(std::abs(p.energy_error), 1e-8 * std::abs(p.reference));
        EXPECT_GE(p.energy_error, -1e-9);  // variational
        EXPECT_EQ(p.bond_entropies.size(), 7u);
        EXPECT_EQ(p.mid_bond_entropy, p.bond_entropies[3]);
        for (double s : p.bond_entropies) EXPECT_GE(s, 0.0);
        EXPECT_EQ(p.monotonicity_violations, 0);
    }
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.checkpoint_dir) / "L8_chi64_cagmps.ckpt"));

    auto ls = lines_of(measurements_csv(pts));
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0],
              "L,chi,method,energy,reference,energy_error,mid_bond_entropy,mean_bond_entropy,gates_applied,wall_time_s,"
              "bond_entropies");
    EXPECT_EQ(ls[1].rfind("8,64,gmps,", 0), 0u);
    EXPECT_EQ(ls[2].rfind("8,64,cagmps,", 0), 0u);
}

TEST(write_atomic, replaces_and_leaves_no_temporaries) {
    auto p = scratch("out.csv");
    write_atomic(p.string(), "first\n");
    write_atomic(p.string(), "second\n");
    EXPECT_EQ(read_file(p.string()), "second\n");
    int files = 0;
    for (const auto &e : std::filesystem::directory_iterator(p.parent_path())) files += e.is_regular_file();
    EXPECT_EQ(files, 1);
    EXPECT_THROW(write_atomic((p.parent_path() / "missing" / "x.csv").string(), "x"), IoError);
    std::filesystem::remove_all(p.parent_path());
}
