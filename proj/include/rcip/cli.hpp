#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rcip/types.hpp"

namespace rcip::cli {

enum class Problem { LaplaceCircle, LaplaceCorner, Bgkw };
enum class Initializer { Plain, FixedPoint };

/// Flat key=value experiment configuration ('#' starts a comment). Unknown
/// keys are rejected; complex values are "re,im" pairs; nsub accepts a single
/// value, a comma list, or a start:step:end range; klist is a comma list.
struct ExperimentConfig {
  Problem problem = Problem::LaplaceCircle;
  Complex alpha{0.5, 0.0};
  Complex lambda{0.5, 0.0};
  double theta = kPi;
  int npan = 10;
  std::vector<int> nsub_sweep;
  Initializer initializer = Initializer::Plain;
  std::vector<double> k_list;
  std::string out_path;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct RunReport {
  int rows_total = 0;
  int rows_failed = 0;
  std::vector<std::string> errors;
};

/// Convergence sweep for the Laplace problems. CSV columns:
/// nsub, q_coa_re, q_coa_im, q_fin_re, q_fin_im, rel_err_vs_reference.
/// Reference: analytic q for the circle, the n_sub = 500 value otherwise.
RunReport run_convergence_sweep(const ExperimentConfig& cfg, std::ostream& out,
                                int threads = 1);

/// BGKW table. CSV columns: k, u_half, Q, P_xy (blank when not computed),
/// gmres_iters, cpu_seconds.
RunReport run_bgkw_table(const ExperimentConfig& cfg, std::ostream& out,
                         int threads = 1);

/// `rcip run <config> [--out path] [--threads N]`; returns the process exit
/// code (0 success, 1 config error, 2 partial per-row failure).
int run_main(int argc, char** argv);

/// 16-significant-digit decimal formatting used in all CSV output.
std::string format_number(double v);

} // namespace rcip::cli
