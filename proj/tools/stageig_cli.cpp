// Copyright 2026 The stageig Authors
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

// Command-line front end: validate, spectrum, eigenbasis, verify, evolve and
// kagome. Exit codes: 0 success, 1 verification mismatch, 2 schema or usage
// error, 3 validation failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stageig.hpp"
#include "stageig/io.hpp"

namespace {

using namespace stageig;
using nlohmann::json;

constexpr int kExitMismatch = 1;
constexpr int kExitSchema = 2;
constexpr int kExitInvalid = 3;
constexpr double kDefaultTolerance = 1e-9;

struct RunConfig {
  std::string command;
  std::string input_path;
  std::optional<double> theta;
  std::string output_path;
  std::string format = "auto";
  int steps = 10;
  int seed_vertex = 0;
  std::string initial_path;
  int grid = 16;
  std::vector<int> patch;
  int patch_size = kagome::kMinPatch;
  std::string dump_dir;
};

/// Thrown for malformed input; maps to exit code 2.
struct SchemaFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when input parses but violates a library precondition; exit 3.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double tolerance_from_env() {
  const char* raw = std::getenv("STAGEIG_TOL");
  if (raw == nullptr || *raw == '\0') return kDefaultTolerance;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(value > 0.0)) {
    throw SchemaFailure("STAGEIG_TOL must be a positive number, got \"" + std::string(raw) + "\"");
  }
  return value;
}

json read_json(const std::string& path) {
  if (path.empty()) throw SchemaFailure("--input is required");
  std::ifstream in(path);
  if (!in) throw SchemaFailure("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaFailure(path + ": " + e.what());
  }
}

TessellatedSystem load(const RunConfig& cfg) {
  const json doc = read_json(cfg.input_path);
  try {
    return io::load_system(doc, cfg.theta);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw SchemaFailure(e.what());
    throw ValidationFailure(e.what());
  } catch (const json::exception& e) {
    throw SchemaFailure(e.what());
  }
}

std::string resolved_format(const RunConfig& cfg) {
  if (cfg.format != "auto") return cfg.format;
  const auto ext = std::filesystem::path(cfg.output_path).extension().string();
  return ext == ".csv" ? "csv" : "json";
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw SchemaFailure("cannot write " + cfg.output_path);
  out << text;
}

std::string real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump_operators(const RunConfig& cfg, const WalkOperators& ops) {
  if (cfg.dump_dir.empty()) return;
  std::filesystem::create_directories(cfg.dump_dir);
  const std::pair<const char*, const CMatrix*> items[] = {
      {"A", &ops.A},   {"B", &ops.B}, {"H_A", &ops.H_A},       {"H_B", &ops.H_B},
      {"U", &ops.U},   {"T", &ops.T}, {"Lambda", &ops.Lambda}, {"L", &ops.L}};
  for (const auto& [name, M] : items) {
    std::ofstream out(std::filesystem::path(cfg.dump_dir) / (std::string(name) + ".json"));
    out << io::dump(io::matrix_to_json(*M));
  }
}

int run_validate(const RunConfig& cfg) {
  const auto s = load(cfg);
  const auto report = detect_reversibility(s);
  json out = {{"valid", true},
              {"nu", s.nu()},
              {"m", s.m()},
              {"n", s.n()},
              {"betti_number", s.graph().betti_number()},
              {"theta", s.theta()},
              {"reversibility", io::to_json(report)}};
  emit(cfg, io::dump(out));
  return 0;
}

int run_spectrum(const RunConfig& cfg) {
  const auto s = load(cfg);
  const auto ops = build_operators(s);
  dump_operators(cfg, ops);
  const auto report = detect_reversibility(s);
  const auto td = decompose_T(ops.T);
  const auto points = spectrum_from_T(s, td, report);
  if (resolved_format(cfg) == "csv") {
    std::string text = "mu,phi,angle,re,im\n";
    for (const auto& p : points) {
      text += real(p.mu) + "," + real(p.phi) + "," + real(unit_angle(p.lambda)) + "," +
              real(p.lambda.real()) + "," + real(p.lambda.imag()) + "\n";
    }
    emit(cfg, text);
    return 0;
  }
  json pts = json::array();
  for (const auto& p : points) {
    pts.push_back({{"mu", p.mu}, {"phi", p.phi}, {"lambda", io::to_json(p.lambda)}});
  }
  json out = {{"theta", s.theta()},
              {"discriminant_spectrum", io::to_json(RVector(td.mu))},
              {"points", pts},
              {"reversibility", io::to_json(report)}};
  emit(cfg, io::dump(out));
  return 0;
}

int run_eigenbasis(const RunConfig& cfg) {
  const auto s = load(cfg);
  const auto ops = build_operators(s);
  dump_operators(cfg, ops);
  const auto basis = full_eigenbasis(s);
  if (resolved_format(cfg) == "csv") {
    std::string text = "angle,defect,tag\n";
    for (const auto& p : basis.pairs) {
      const double defect = (ops.U * p.vector - p.eigenvalue * p.vector).norm();
      text += real(unit_angle(p.eigenvalue)) + "," + real(defect) + "," +
              std::string(to_string(p.tag)) + "\n";
    }
    emit(cfg, text);
    return 0;
  }
  json out = io::to_json(basis);
  out["max_residual"] = max_residual(ops.U, basis);
  emit(cfg, io::dump(out));
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const double tol = tolerance_from_env();
  const auto s = load(cfg);
  const auto ops = build_operators(s);
  dump_operators(cfg, ops);
  oracle::CompareOptions opt;
  opt.residual_tolerance = tol;
  oracle::CompareReport report;
  try {
    report = oracle::compare(full_eigenbasis(s), oracle::decompose(ops), opt);
  } catch (const Error& e) {
    report.pass = false;
    report.expected = s.nu();
    report.message = e.what();
  }
  json out = io::to_json(report);
  out["tolerance"] = tol;
  emit(cfg, io::dump(out));
  if (!report.pass) std::cerr << "verification failed: " << report.message << "\n";
  return report.pass ? 0 : kExitMismatch;
}

int run_evolve(const RunConfig& cfg) {
  const auto s = load(cfg);
  std::vector<RVector> dists;
  try {
    if (!cfg.initial_path.empty()) {
      CVector psi;
      try {
        psi = io::cvector_from_json(read_json(cfg.initial_path), "initial");
      } catch (const Error& e) {
        throw SchemaFailure(e.what());
      }
      dists = evolve(build_U(s), psi, cfg.steps);
    } else {
      dists = evolve(s, cfg.seed_vertex, cfg.steps);
    }
  } catch (const Error& e) {
    throw ValidationFailure(e.what());
  }
  if (resolved_format(cfg) == "csv") {
    std::string text = "t";
    for (int u = 0; u < s.nu(); ++u) text += ",p" + std::to_string(u);
    text += "\n";
    for (std::size_t t = 0; t < dists.size(); ++t) {
      text += std::to_string(t);
      for (Eigen::Index u = 0; u < dists[t].size(); ++u) text += "," + real(dists[t][u]);
      text += "\n";
    }
    emit(cfg, text);
    return 0;
  }
  json rows = json::array();
  for (const auto& d : dists) rows.push_back(io::to_json(d));
  emit(cfg, io::dump({{"steps", cfg.steps}, {"distributions", rows}}));
  return 0;
}

struct BandRow {
  double k, l, angle_plus, angle_minus, flat_angle, band_residual, flat_residual;
};

BandRow band_row(double theta, double k, double l) {
  const kagome::MomentumPoint p{k, l};
  const auto d = kagome::dispersion(theta, p);
  const CMatrix U = kagome::reduced_operator(theta, p);
  Eigen::ComplexEigenSolver<CMatrix> es(U, false);
  std::vector<Complex> numeric(es.eigenvalues().data(), es.eigenvalues().data() + 3);
  std::vector<Complex> analytic{d.band_plus, d.band_minus, d.flat};

  // Greedy matching on the circle.
  double band = 0.0;
  std::vector<bool> used(3, false);
  for (auto z : analytic) {
    int best = -1;
    double best_d = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (used[j]) continue;
      const double dist = circle_distance(unit_angle(z), unit_angle(numeric[j]));
      if (best < 0 || dist < best_d) {
        best = j;
        best_d = dist;
      }
    }
    used[best] = true;
    band = std::max(band, best_d);
  }

  CVector v = kagome::momentum_eigenvector_regular(p);
  if (v.norm() < 1e-12) v = (CVector(3) << 1.0, -1.0, 0.0).finished();  // (0,0): any vector ⊥ (1,1,1)
  const double flat = (U * v - d.flat * v).norm() / v.norm();
  return {k, l, unit_angle(d.band_plus), unit_angle(d.band_minus), unit_angle(d.flat), band, flat};
}

int run_kagome(const RunConfig& cfg) {
  const double tol = tolerance_from_env();
  const double theta = cfg.theta.value_or(kPi / 2);
  if (!(theta > 0.0 && theta < kPi)) throw ValidationFailure("theta must lie in (0, pi)");

  if (!cfg.patch.empty()) {
    double residual = 0.0;
    try {
      kagome::Patch patch(cfg.patch_size);
      residual = kagome::localized_residual(patch, theta, cfg.patch[0], cfg.patch[1]);
    } catch (const Error& e) {
      throw ValidationFailure(e.what());
    }
    const bool pass = residual < tol;
    json out = {{"theta", theta},
                {"center", {cfg.patch[0], cfg.patch[1]}},
                {"patch_size", cfg.patch_size},
                {"eigenvalue", io::to_json(-cis(-2.0 * theta))},
                {"residual", residual},
                {"tolerance", tol},
                {"pass", pass}};
    emit(cfg, io::dump(out));
    return pass ? 0 : kExitMismatch;
  }

  if (cfg.grid < 1) throw ValidationFailure("--grid must be positive");
  std::vector<BandRow> rows;
  for (int i = 0; i < cfg.grid; ++i) {
    for (int j = 0; j < cfg.grid; ++j) {
      rows.push_back(band_row(theta, 2.0 * kPi * i / cfg.grid, 2.0 * kPi * j / cfg.grid));
    }
  }
  if (resolved_format(cfg) == "csv") {
    std::string text = "k,l,angle_plus,angle_minus,flat_angle,band_residual,flat_residual\n";
    for (const auto& r : rows) {
      text += real(r.k) + "," + real(r.l) + "," + real(r.angle_plus) + "," + real(r.angle_minus) +
              "," + real(r.flat_angle) + "," + real(r.band_residual) + "," +
              real(r.flat_residual) + "\n";
    }
    emit(cfg, text);
    return 0;
  }
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"k", r.k},
                   {"l", r.l},
                   {"angle_plus", r.angle_plus},
                   {"angle_minus", r.angle_minus},
                   {"flat_angle", r.flat_angle},
                   {"band_residual", r.band_residual},
                   {"flat_residual", r.flat_residual}});
  }
  emit(cfg, io::dump({{"theta", theta}, {"grid", cfg.grid}, {"rows", out}}));
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "validate") return run_validate(cfg);
  if (cfg.command == "spectrum") return run_spectrum(cfg);
  if (cfg.command == "eigenbasis") return run_eigenbasis(cfg);
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "evolve") return run_evolve(cfg);
  return run_kagome(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staggered quantum walks: spectra, eigenbases and verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_io = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) {
      sub->add_option("--input,-i", cfg.input_path, "graph, system or cover JSON")
          ->required()
          ->check(CLI::ExistingFile);
    }
    sub->add_option("--theta", cfg.theta,
                    needs_input ? "coin angle in (0, pi); overrides the input file" : "coin angle in (0, pi)");
    sub->add_option("--out,-o", cfg.output_path, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv (default: from --out extension)")
        ->check(CLI::IsMember({"auto", "json", "csv"}));
  };

  auto* validate = app.add_subcommand("validate", "check the input and report reversibility");
  add_io(validate, true);
  auto* spectrum = app.add_subcommand("spectrum", "spectrum of U on A+B read off the discriminant");
  add_io(spectrum, true);
  spectrum->add_option("--dump-operators", cfg.dump_dir, "write operator matrices to this directory");
  auto* eigenbasis = app.add_subcommand("eigenbasis", "full eigenbasis of U");
  add_io(eigenbasis, true);
  eigenbasis->add_option("--dump-operators", cfg.dump_dir, "write operator matrices to this directory");
  auto* verify = app.add_subcommand("verify", "check the eigenbasis against a dense eigensolver");
  add_io(verify, true);
  verify->add_option("--dump-operators", cfg.dump_dir, "write operator matrices to this directory");
  auto* evolve_cmd = app.add_subcommand("evolve", "probability distributions under repeated U");
  add_io(evolve_cmd, true);
  evolve_cmd->add_option("--steps", cfg.steps, "number of steps")->check(CLI::NonNegativeNumber);
  auto* seed = evolve_cmd->add_option("--seed-vertex", cfg.seed_vertex, "start from this vertex");
  evolve_cmd->add_option("--initial", cfg.initial_path, "JSON array of [re, im] initial amplitudes")
      ->check(CLI::ExistingFile)
      ->excludes(seed);
  auto* kagome_cmd = app.add_subcommand("kagome", "kagome band structure and flat-band checks");
  add_io(kagome_cmd, false);
  kagome_cmd->add_option("--grid", cfg.grid, "momentum grid size N (N x N points)");
  kagome_cmd->add_option("--patch", cfg.patch, "verify the hexagon eigenvector centred at cell X Y")
      ->expected(2);
  kagome_cmd->add_option("--patch-size", cfg.patch_size, "periodic patch size in cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return dispatch(cfg);
  } catch (const SchemaFailure& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ValidationFailure& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
}
