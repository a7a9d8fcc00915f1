// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: analyze / frame / verify / sample.
// Exit codes: 0 success, 1 usage, 2 inadmissible instance,
// 3 verification failure, 4 I/O or parse error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddframe/document.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInadmissible = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_report(const ddframe::VerificationReport& report) {
  std::printf("%-22s %-14s %-14s %s\n", "check", "residual", "threshold", "status");
  for (const auto& c : report.checks) {
    std::printf("%-22s %-14.6g %-14.6g %s\n", c.name.c_str(), c.residual,
                c.threshold, c.pass ? "pass" : "FAIL");
  }
}

int inadmissible(const ddframe::MeshConfig& cfg, const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (cfg.n == 2) {
    std::cerr << "the n=2 scheme is admissible iff h_right/h_left lies in (2/7, 7/2)\n";
  }
  return kExitInadmissible;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

struct InstanceArgs {
  int n = 1;
  double h_left = 1.0;
  double h_right = 1.0;
  double tol = 0.0;  // 0 = defaults

  ddframe::MeshConfig config() const {
    ddframe::ToleranceSet t;
    if (tol > 0.0) t.verify = tol;
    return {n, h_left, h_right, t};
  }
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("-n", args.n, "scheme order (2n-point)")->required();
  cmd->add_option("--h-left", args.h_left, "left mesh step")->default_val(1.0);
  cmd->add_option("--h-right", args.h_right, "right mesh step")->default_val(1.0);
  cmd->add_option("--tol", args.tol, "verification tolerance override");
}

int run_analyze(const InstanceArgs& args, int levels) {
  ddframe::MeshConfig cfg = args.config();
  if (levels > 0) cfg.tol.cascade_depth = levels;
  const auto op = ddframe::build_subdivision_operator(cfg);
  const auto report = ddframe::analyze_convergence(op, cfg);

  std::cout << "finite section eigenvalues (descending modulus):\n";
  for (const auto& ev : report.eigenvalues) {
    std::cout << "  " << fmt(ev.real());
    if (ev.imag() != 0.0) std::cout << " + " << fmt(ev.imag()) << "i";
    std::cout << "\n";
  }
  std::cout << "one_is_simple: " << (report.one_is_simple ? "yes" : "no") << "\n";
  std::cout << "spectral_ok:   " << (report.spectral_ok ? "yes" : "no") << "\n";
  std::cout << "cascade first differences near 0:\n";
  std::cout << "  level  max|f(0)-f(+-1)|\n";
  for (size_t j = 0; j < report.cascade_diff.size(); ++j) {
    std::printf("  %5zu  %.6e\n", j + 1, report.cascade_diff[j]);
  }
  std::cout << "cascade_ok: " << (report.cascade_ok ? "yes" : "no") << "\n";
  return report.spectral_ok ? kExitOk : kExitVerification;
}

int run_frame(const InstanceArgs& args, const std::string& output) {
  const ddframe::MeshConfig cfg = args.config();
  ddframe::Pipeline pl;
  try {
    pl = ddframe::build_pipeline(cfg);
  } catch (const ddframe::AdmissibilityError& e) {
    return inadmissible(cfg, e);
  }
  const auto report = ddframe::verify_frame(pl);
  const auto doc = ddframe::make_document(pl, report);
  ddframe::write_document(doc, output);
  print_report(report);
  std::cout << "wrote " << output << "\n";
  return report.all_pass() ? kExitOk : kExitVerification;
}

int run_verify(const std::string& path) {
  ddframe::FilterBankDocument doc;
  try {
    doc = ddframe::read_document(path);
  } catch (const ddframe::DocumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  ddframe::VerificationReport report;
  try {
    report = ddframe::verify_document(doc);
  } catch (const ddframe::AdmissibilityError& e) {
    const ddframe::MeshConfig cfg(doc.n, doc.h_left, doc.h_right);
    return inadmissible(cfg, e);
  }
  print_report(report);
  return report.all_pass() ? kExitOk : kExitVerification;
}

int run_sample(const InstanceArgs& args, bool have_scaling, long scaling_k,
               const std::vector<long>& framelet_cols, int level,
               const std::string& output) {
  if (have_scaling == !framelet_cols.empty()) {
    std::cerr << "error: choose exactly one of --scaling and --columns\n";
    return kExitUsage;
  }
  const ddframe::MeshConfig cfg = args.config();
  ddframe::Pipeline pl;
  try {
    pl = ddframe::build_pipeline(cfg);
  } catch (const ddframe::AdmissibilityError& e) {
    return inadmissible(cfg, e);
  }
  if (level < 0 || level > cfg.tol.quad_level) {
    std::cerr << "error: level must be within 0.." << cfg.tol.quad_level << "\n";
    return kExitUsage;
  }

  std::vector<ddframe::SampledFunction> curves;
  std::vector<std::string> names;
  // emit the full support range, including the zero boundary samples
  long lo = 0, hi = 0;
  const long scale_idx = 1L << level;
  const int n = cfg.n;
  if (have_scaling) {
    ddframe::WindowedVector delta{{scaling_k, scaling_k}, Eigen::VectorXd::Ones(1)};
    delta.values[0] = 1.0 / std::sqrt(pl.moments.d_at(scaling_k));
    curves.push_back(ddframe::cascade_sample(pl.op, delta, level));
    names.push_back("phi_" + std::to_string(scaling_k));
    lo = (scaling_k + 1 - 2 * n) * scale_idx;
    hi = (scaling_k + 2 * n - 1) * scale_idx;
  } else {
    for (long c : framelet_cols) {
      if (c < 0 || c >= pl.frame.q_irr.cols()) {
        std::cerr << "error: framelet column " << c << " out of range (rank "
                  << pl.frame.q_irr.cols() << ")\n";
        return kExitUsage;
      }
      const ddframe::IndexWindow rows = pl.frame.irr_rows;
      ddframe::WindowedVector coeffs{rows, Eigen::VectorXd::Zero(rows.length())};
      for (long u = rows.lo; u <= rows.hi; ++u) {
        coeffs.values[rows.pos(u)] =
            pl.frame.q_irr(rows.pos(u), c) / std::sqrt(pl.moments.d_at(u));
      }
      curves.push_back(ddframe::cascade_sample(pl.op, coeffs, level));
      names.push_back("psi_" + std::to_string(c));
    }
    lo = (pl.frame.irr_rows.lo + 1 - 2 * n) * scale_idx;
    hi = (pl.frame.irr_rows.hi + 2 * n - 1) * scale_idx;
  }
  const double scale = std::pow(2.0, -level);
  std::ostringstream os;
  os << "x";
  for (const auto& name : names) os << "," << name;
  os << "\n";
  for (long m = lo; m <= hi; ++m) {
    os << fmt(scale * cfg.mesh_point(m));
    for (const auto& s : curves) {
      const double v =
          s.window.contains(m) ? s.values[s.window.pos(m)] : 0.0;
      os << "," << fmt(v);
    }
    os << "\n";
  }
  write_text_atomic(output, os.str());
  std::cout << "wrote " << output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-regular interpolatory subdivision wavelet tight frames"};
  app.require_subcommand(1);

  InstanceArgs analyze_args;
  int analyze_levels = 0;
  CLI::App* analyze = app.add_subcommand("analyze", "convergence analysis of the subdivision operator");
  add_instance_flags(analyze, analyze_args);
  analyze->add_option("--levels", analyze_levels, "cascade depth");

  InstanceArgs frame_args;
  std::string frame_output;
  CLI::App* frame = app.add_subcommand("frame", "build and verify the frame, write the filter bank");
  add_instance_flags(frame, frame_args);
  frame->add_option("-o,--output", frame_output, "output path")->required();

  std::string verify_path;
  CLI::App* verify = app.add_subcommand("verify", "re-verify a stored filter bank");
  verify->add_option("document", verify_path, "filter bank document")->required();

  InstanceArgs sample_args;
  long sample_scaling = 0;
  bool have_scaling = false;
  std::vector<long> sample_cols;
  int sample_level = 8;
  std::string sample_output;
  CLI::App* sample = app.add_subcommand("sample", "sample scaling functions or framelets to CSV");
  add_instance_flags(sample, sample_args);
  CLI::Option* scaling_opt =
      sample->add_option("--scaling", sample_scaling, "scaling function index k");
  sample->add_option("--columns", sample_cols, "irregular framelet column indices")
      ->delimiter(',');
  sample->add_option("--levels", sample_level, "dyadic sampling level");
  sample->add_option("-o,--output", sample_output, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) return run_analyze(analyze_args, analyze_levels);
    if (frame->parsed()) return run_frame(frame_args, frame_output);
    if (verify->parsed()) return run_verify(verify_path);
    if (sample->parsed()) {
      have_scaling = scaling_opt->count() > 0;
      return run_sample(sample_args, have_scaling, sample_scaling, sample_cols,
                        sample_level, sample_output);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ddframe::DocumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitUsage;
}
