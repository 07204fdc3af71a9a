// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "bench.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "clifford.hpp"
#include "ed.hpp"
#include "errors.hpp"
#include "gmps.hpp"

namespace cagmps {

std::string method_name(Method m) { return m == Method::GMPS ? "gmps" : "cagmps"; }

MethodSet parse_method_set(const std::string &s) {
    if (s == "off") return MethodSet::Plain;
    if (s == "on") return MethodSet::Clifford;
    if (s == "both") return MethodSet::Both;
    throw ConfigError("clifford must be on, off or both, got '" + s + "'");
}

Reference parse_reference(const std::string &s) {
    if (s == "none") return Reference::None;
    if (s == "ed") return Reference::ED;
    if (s == "high-chi" || s == "high_chi") return Reference::HighChi;
    throw ConfigError("reference must be ed, high-chi or none, got '" + s + "'");
}

std::string reference_name(Reference r) {
    switch (r) {
        case Reference::ED: return "ed";
        case Reference::HighChi: return "high-chi";
        default: return "none";
    }
}

void ExperimentConfig::validate() const {
    if (model.L < 2) throw ConfigError("L must be >= 2");
    if (!(model.t > 0) || !std::isfinite(model.t)) throw ConfigError("t must be positive");
    if (!std::isfinite(model.V) || model.V < 0) throw ConfigError("V must be finite and >= 0");
    if (chis.empty()) throw ConfigError("at least one chi is required");
    for (size_t c : chis) {
        if (c < 1) throw ConfigError("chi must be >= 1");
    }
    if (sweeps < 1) throw ConfigError("sweeps must be >= 1");
    if (seed == 0) throw ConfigError("seed must be positive");
    if (reference == Reference::ED && model.L > kMaxEdSites) {
        throw ConfigError("ed reference needs L <= " + std::to_string(kMaxEdSites) + ", got L=" +
                          std::to_string(model.L));
    }
}

SweepConfig ExperimentConfig::sweep_config(size_t chi, Method m) const {
    SweepConfig sc;
    sc.chi_max = chi;
    sc.n_sweeps = sweeps;
    sc.clifford_enabled = m == Method::CAGMPS;
    sc.seed = seed;
    return sc;
}

double reference_energy(const ExperimentConfig &cfg, const Progress &progress) {
    switch (cfg.reference) {
        case Reference::ED:
            // The ansatz is parity even, so compare against the even sector.
            if (progress) progress("reference: exact diagonalization, even sector");
            return ground_energy(cfg.model, 0);
        case Reference::HighChi:
            if (progress) progress("reference: cagmps at chi=" + std::to_string(kHighChi));
            return run(cfg.model, cfg.sweep_config(kHighChi, Method::CAGMPS)).energy;
        default:
            return std::numeric_limits<double>::quiet_NaN();
    }
}

namespace {

std::vector<Method> methods_of(MethodSet s) {
    switch (s) {
        case MethodSet::Plain: return {Method::GMPS};
        case MethodSet::Clifford: return {Method::CAGMPS};
        default: return {Method::GMPS, Method::CAGMPS};
    }
}

void write_point_checkpoint(const ExperimentConfig &cfg, const MeasurementPoint &p, const RunResult &r) {
    std::ostringstream os(std::ios::binary);
    write_checkpoint(os, r.state, r.hamiltonian, r.report.gates);
    std::filesystem::create_directories(cfg.checkpoint_dir);
    const std::string name = "L" + std::to_string(p.L) + "_chi" + std::to_string(p.chi) + "_" + method_name(p.method) + ".ckpt";
    write_atomic((std::filesystem::path(cfg.checkpoint_dir) / name).string(), os.str());
}

}  // namespace

std::vector<MeasurementPoint> run_experiment(const ExperimentConfig &cfg, const Progress &progress) {
    cfg.validate();
    const double ref = reference_energy(cfg, progress);
    std::vector<MeasurementPoint> out;
    for (size_t chi : cfg.chis) {
        for (Method m : methods_of(cfg.methods)) {
            if (progress) progress("run: L=" + std::to_string(cfg.model.L) + " chi=" + std::to_string(chi) + " " + method_name(m));
            RunResult r = run(cfg.model, cfg.sweep_config(chi, m));
            MeasurementPoint p;
            p.L = cfg.model.L;
            p.chi = chi;
            p.method = m;
            p.energy = r.energy;
            p.reference = ref;
            p.energy_error = r.energy - ref;
            p.bond_entropies = r.report.bond_entropies;
            for (double &s : p.bond_entropies) s = std::max(s, 0.0);  // clip -0 and rounding noise
            double sum = 0;
            for (double s : p.bond_entropies) sum += s;
            p.mean_bond_entropy = sum / static_cast<double>(p.bond_entropies.size());
            p.mid_bond_entropy = p.bond_entropies[static_cast<size_t>(p.L / 2 - 1)];
            p.wall_time_s = r.seconds;
            for (const auto &g : r.report.gates) p.gates_applied += g.gate != 0;
            p.monotonicity_violations = r.report.monotonicity_violations;
            if (!cfg.checkpoint_dir.empty()) write_point_checkpoint(cfg, p, r);
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (x == 0) x = 0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string measurements_csv(const std::vector<MeasurementPoint> &pts) {
    std::ostringstream os;
    os << "L,chi,method,energy,reference,energy_error,mid_bond_entropy,mean_bond_entropy,gates_applied,wall_time_s,"
          "bond_entropies\n";
    for (const auto &p : pts) {
        os << p.L << ',' << p.chi << ',' << method_name(p.method) << ',' << format_double(p.energy) << ','
           << format_double(p.reference) << ',' << format_double(p.energy_error) << ','
           << format_double(p.mid_bond_entropy) << ',' << format_double(p.mean_bond_entropy) << ','
           << p.gates_applied << ',' << format_double(p.wall_time_s) << ',';
        for (size_t i = 0; i < p.bond_entropies.size(); i++) os << (i ? ";" : "") << format_double(p.bond_entropies[i]);
        os << '\n';
    }
    return os.str();
}

FitResult fit_central_charge(const std::vector<double> &L, const std::vector<double> &S) {
    if (L.size() != S.size()) throw ConfigError("fit: L and S differ in length");
    std::set<double> distinct;
    for (double x : L) {
        if (!(x > 0) || !std::isfinite(x)) throw ConfigError("fit: L must be positive");
        distinct.insert(x);
    }
    if (distinct.size() < 3) throw ConfigError("fit: need at least 3 distinct L values");

    const auto n = static_cast<Eigen::Index>(L.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; i++) {
        A(i, 0) = std::log(L[i]) / 6.0;
        A(i, 1) = 1.0;
        A(i, 2) = 1.0 / L[i];
        y(i) = S[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < 3) throw ConfigError("fit: design matrix is rank deficient");
    Eigen::Vector3d x = qr.solve(y);
    FitResult f;
    f.c = x(0);
    f.a = x(1);
    f.b = x(2);
    f.points = L.size();
    f.rms_residual = std::sqrt((A * x - y).squaredNorm() / static_cast<double>(n));
    return f;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); i++) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                i++;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string &s, size_t row) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw ConfigError("fit: bad number '" + s + "' on data row " + std::to_string(row));
    }
}

}  // namespace

FitResult fit_central_charge_csv(const std::string &text, const std::string &method) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("fit: empty input");
    auto header = split_csv_line(line);
    auto col = [&](const std::string &name) -> int {
        for (size_t i = 0; i < header.size(); i++) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    };
    const int cl = col("L");
    int cs = col("mid_bond_entropy");
    if (cs < 0) cs = col("S");
    const int cm = col("method");
    if (cl < 0 || cs < 0) throw ConfigError("fit: header needs columns L and mid_bond_entropy (or S)");
    if (!method.empty() && cm < 0) throw ConfigError("fit: method filter given but the input has no method column");

    std::vector<double> L, S;
    size_t row = 0;
    while (std::getline(in, line)) {
        row++;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (static_cast<int>(f.size()) <= std::max({cl, cs, cm})) throw ConfigError("fit: short data row " + std::to_string(row));
        if (!method.empty() && f[cm] != method) continue;
        L.push_back(parse_number(f[cl], row));
        S.push_back(parse_number(f[cs], row));
    }
    return fit_central_charge(L, S);
}

std::string fit_csv(const FitResult &f) {
    return "c,a,b,rms_residual,points\n" + format_double(f.c) + "," + format_double(f.a) + "," + format_double(f.b) + "," +
           format_double(f.rms_residual) + "," + std::to_string(f.points) + "\n";
}

std::string gate_table() {
    const GateSet &set = canonical_gates();
    if (set.group_size != 11520 || set.quotient_size != 720 || set.even_size != 32 || set.gates.size() != 12) {
        throw SelfCheckError("gate pipeline counts are " + std::to_string(set.group_size) + "," +
                             std::to_string(set.quotient_size) + "," + std::to_string(set.even_size) + "," +
                             std::to_string(set.gates.size()));
    }
    std::ostringstream os;
    os << "# clifford gate table\n";
    os << "# counts: group,pauli_quotient,grassmann_even,classes\n";
    os << set.group_size << ',' << set.quotient_size << ',' << set.even_size << ',' << set.gates.size() << '\n';
    for (const auto &g : set.gates) {
        os << "\ngate " << g.id << '\n';
        os << "word " << word_string(g.word) << '\n';
        os << "class_size " << g.class_size << '\n';
        os << "matrix (re,im per entry, row major)\n";
        for (int r = 0; r < 4; r++) {
            for (int c = 0; c < 4; c++) {
                os << (c ? " " : "") << format_double(g.matrix(r, c).real()) << ',' << format_double(g.matrix(r, c).imag());
            }
            os << '\n';
        }
        os << "tableau\n";
        for (int k = 1; k < 16; k++) {
            const PairImage &im = g.tableau[k];
            os << pauli_char(pair_first(k)) << pauli_char(pair_second(k)) << " -> " << (im.sign > 0 ? '+' : '-')
               << pauli_char(pair_first(im.pair)) << pauli_char(pair_second(im.pair)) << '\n';
        }
        os << "end\n";
    }
    return os.str();
}

std::string ed_csv(const ModelSpec &spec, size_t max_levels) {
    if (spec.L > kMaxEdSites) {
        throw ConfigError("exact diagonalization supports L <= " + std::to_string(kMaxEdSites) + ", got L=" +
                          std::to_string(spec.L));
    }
    std::vector<double> levels = ed_spectrum(spec);
    std::ostringstream os;
    os << "L,t,V,level,energy\n";
    for (size_t k = 0; k < std::min(max_levels, levels.size()); k++) {
        os << spec.L << ',' << format_double(spec.t) << ',' << format_double(spec.interaction()) << ',' << k << ','
           << format_double(levels[k]) << '\n';
    }
    return os.str();
}

void write_atomic(const std::string &path, const std::string &content) {
    if (path == "-") {
        std::cout << content << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + ": " + std::strerror(errno));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cagmps
