#include "rcip/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rcip/bgkw.hpp"
#include "rcip/solver.hpp"

namespace rcip::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
  if (pos != v.size())
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  return d;
}

Complex parse_complex(const std::string& v, const std::string& key) {
  const auto comma = v.find(',');
  if (comma == std::string::npos) return Complex(parse_double(v, key), 0.0);
  return Complex(parse_double(trim(v.substr(0, comma)), key),
                 parse_double(trim(v.substr(comma + 1)), key));
}

std::vector<int> parse_nsub(const std::string& v) {
  std::vector<int> out;
  if (v.find(':') != std::string::npos) {
    int a, s, b;
    char c1, c2;
    std::istringstream is(v);
    if (!(is >> a >> c1 >> s >> c2 >> b) || c1 != ':' || c2 != ':' || s <= 0)
      throw std::invalid_argument("config: bad nsub range: " + v);
    for (int x = a; x <= b; x += s) out.push_back(x);
  } else {
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ','))
      out.push_back(static_cast<int>(parse_double(trim(tok), "nsub")));
  }
  for (int x : out)
    if (x < 1) throw std::invalid_argument("config: nsub must be >= 1");
  return out;
}

std::vector<double> parse_klist(const std::string& v) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(parse_double(trim(tok), "k"));
  return out;
}

template <typename Fn>
void parallel_rows(int nrows, int threads, const Fn& body) {
  threads = std::max(1, std::min(threads, nrows));
  if (threads == 1) {
    for (int i = 0; i < nrows; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < nrows; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

} // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  bool have_nsub = false, have_k = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "problem") {
      if (val == "laplace-circle") cfg.problem = Problem::LaplaceCircle;
      else if (val == "laplace-corner") cfg.problem = Problem::LaplaceCorner;
      else if (val == "bgkw") cfg.problem = Problem::Bgkw;
      else throw std::invalid_argument("config: unknown problem '" + val + "'");
    } else if (key == "alpha") {
      cfg.alpha = parse_complex(val, key);
    } else if (key == "lambda") {
      cfg.lambda = parse_complex(val, key);
    } else if (key == "theta") {
      cfg.theta = parse_double(val, key);
    } else if (key == "npan") {
      cfg.npan = static_cast<int>(parse_double(val, key));
    } else if (key == "nsub") {
      cfg.nsub_sweep = parse_nsub(val);
      have_nsub = true;
    } else if (key == "initializer") {
      if (val == "plain") cfg.initializer = Initializer::Plain;
      else if (val == "fixed-point") cfg.initializer = Initializer::FixedPoint;
      else throw std::invalid_argument("config: unknown initializer '" + val + "'");
    } else if (key == "k") {
      cfg.k_list = parse_klist(val);
      have_k = true;
    } else if (key == "out") {
      cfg.out_path = val;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (cfg.problem == Problem::Bgkw) {
    if (!have_k || cfg.k_list.empty())
      throw std::invalid_argument("config: bgkw needs a nonempty k list");
  } else {
    if (!have_nsub || cfg.nsub_sweep.empty())
      throw std::invalid_argument("config: sweep needs a nonempty nsub list");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

struct SweepRow {
  bool ok = false;
  std::string error;
  Complex q_coa, q_fin;
  double rel_err = 0.0;
};

Complex sweep_reference(const ExperimentConfig& cfg,
                        const geom::OneCornerContour& contour,
                        const models::LaplaceDlpKernel& kernel,
                        const models::RhsModel& f) {
  if (cfg.problem == Problem::LaplaceCircle)
    return models::circle_exact_q(cfg.alpha, cfg.lambda);
  solver::LaplaceOptions opt;
  opt.npan = cfg.npan;
  opt.n_sub = 500;
  opt.fixed_point_init = false;
  opt.want_fine = false;
  return solver::run_laplace(contour, kernel, f, opt).q_coa;
}

} // namespace

RunReport run_convergence_sweep(const ExperimentConfig& cfg, std::ostream& out,
                                int threads) {
  RunReport rep;
  const double theta = cfg.problem == Problem::LaplaceCircle ? kPi : cfg.theta;
  geom::OneCornerContour contour(theta);
  models::LaplaceDlpKernel kernel(cfg.lambda);
  std::unique_ptr<models::RhsModel> f;
  if (cfg.problem == Problem::LaplaceCircle)
    f = std::make_unique<models::CircleRhs>(cfg.alpha);
  else
    f = std::make_unique<models::CornerRhs>(cfg.alpha, contour);

  const Complex qref = sweep_reference(cfg, contour, kernel, *f);

  const int n = static_cast<int>(cfg.nsub_sweep.size());
  std::vector<SweepRow> rows(n);
  parallel_rows(n, threads, [&](int i) {
    SweepRow& r = rows[i];
    try {
      solver::LaplaceOptions opt;
      opt.npan = cfg.npan;
      opt.n_sub = cfg.nsub_sweep[i];
      opt.fixed_point_init = (cfg.initializer == Initializer::FixedPoint);
      opt.want_fine = true;
      const auto run = solver::run_laplace(contour, kernel, *f, opt);
      r.q_coa = run.q_coa;
      r.q_fin = run.q_fin;
      r.rel_err = std::abs(run.q_coa - qref) / std::abs(qref);
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = "nsub=" + std::to_string(cfg.nsub_sweep[i]) + ": " + e.what();
    }
  });

  out << "nsub,q_coa_re,q_coa_im,q_fin_re,q_fin_im,rel_err_vs_reference\n";
  for (int i = 0; i < n; ++i) {
    rep.rows_total++;
    if (!rows[i].ok) {
      rep.rows_failed++;
      rep.errors.push_back(rows[i].error);
      continue;
    }
    out << cfg.nsub_sweep[i] << ',' << format_number(rows[i].q_coa.real())
        << ',' << format_number(rows[i].q_coa.imag()) << ','
        << format_number(rows[i].q_fin.real()) << ','
        << format_number(rows[i].q_fin.imag()) << ','
        << format_number(rows[i].rel_err) << '\n';
  }
  return rep;
}

RunReport run_bgkw_table(const ExperimentConfig& cfg, std::ostream& out,
                         int threads) {
  RunReport rep;
  const int n = static_cast<int>(cfg.k_list.size());
  struct Row {
    bool ok = false;
    std::string error;
    bgkw::BgkwResult r;
  };
  std::vector<Row> rows(n);
  parallel_rows(n, threads, [&](int i) {
    try {
      bgkw::BgkwProblem prob;
      prob.k = cfg.k_list[i];
      rows[i].r = bgkw::solve_couette(prob);
      rows[i].ok = true;
    } catch (const std::exception& e) {
      rows[i].error = "k=" + std::to_string(cfg.k_list[i]) + ": " + e.what();
    }
  });

  out << "k,u_half,Q,P_xy,gmres_iters,cpu_seconds\n";
  for (int i = 0; i < n; ++i) {
    rep.rows_total++;
    if (!rows[i].ok) {
      rep.rows_failed++;
      rep.errors.push_back(rows[i].error);
      continue;
    }
    const auto& r = rows[i].r;
    out << format_number(cfg.k_list[i]) << ',' << format_number(r.u_at_half)
        << ',' << format_number(r.Q) << ','
        << (r.P_xy ? format_number(*r.P_xy) : std::string()) << ','
        << r.gmres_iters << ',' << format_number(r.cpu_seconds) << '\n';
  }
  return rep;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() < 2 || args[0] != "run") {
    std::cerr << "usage: rcip run <config-file> [--out <path>] [--threads N]\n";
    return 1;
  }
  std::string config_path = args[1];
  std::string out_override;
  int threads = 0;
  for (size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      out_override = args[++i];
    } else if (args[i] == "--threads" && i + 1 < args.size()) {
      threads = std::atoi(args[++i].c_str());
    } else {
      std::cerr << "unknown argument: " << args[i] << "\n";
      return 1;
    }
  }
  if (threads <= 0) {
    if (const char* env = std::getenv("RCIP_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0) threads = 1;

  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (!out_override.empty()) cfg.out_path = out_override;

  std::ostringstream csv;
  RunReport rep;
  try {
    if (cfg.problem == Problem::Bgkw)
      rep = run_bgkw_table(cfg, csv, threads);
    else
      rep = run_convergence_sweep(cfg, csv, threads);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  if (cfg.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) {
      std::cerr << "cannot open output file " << cfg.out_path << "\n";
      return 1;
    }
    out << csv.str();
  }
  for (const auto& e : rep.errors) std::cerr << e << "\n";
  return rep.rows_failed == 0 ? 0 : 2;
}

} // namespace rcip::cli
