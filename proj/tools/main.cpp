// condembed: generator estimation for discrete-time transition matrices
// under the assumption that the observed chain jumped at most once per
// unit interval.
//
// Exit codes: 0 success, 1 input parse/validation error, 2 solver
// non-convergence, 3 matrix not J1-embeddable (zero diagonal entry).

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "condembed/condembed.hpp"

namespace {

using namespace condembed;

void print_matrix_4dp(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%9.4f", m(i, j));
      out << buf;
    }
    out << '\n';
  }
}

StochasticMatrix load_stochastic(const std::string& path) {
  return validate_stochastic(read_matrix_csv_file(path));
}

IntensityMatrix load_intensity(const std::string& path) {
  return IntensityMatrix(read_matrix_csv_file(path));
}

struct OutputOptions {
  std::string format = "pretty";  // pretty | csv | json
  std::string output_path;        // empty = stdout
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"pretty", "csv", "json"}));
  cmd->add_option("-o,--output", opts.output_path, "Write output to a file instead of stdout");
}

void emit(const OutputOptions& opts, const SolveReport& report) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!opts.output_path.empty()) {
    file.open(opts.output_path);
    if (!file) throw parse_error("cannot open '" + opts.output_path + "' for writing");
    out = &file;
  }
  if (opts.format == "json") {
    *out << solve_report_json(report).dump(2) << '\n';
  } else if (opts.format == "csv") {
    write_matrix_csv(*out, report.generator.matrix());
  } else {
    *out << "method:     "
         << (report.method == SolveMethod::closed_form ? "closed_form" : "fixed_point") << '\n'
         << "iterations: " << report.iterations << '\n'
         << "residual:   " << format_full(report.residual) << '\n'
         << "generator (4 decimals):\n";
    print_matrix_4dp(*out, report.generator.matrix());
  }
}

void emit_intensity(const OutputOptions& opts, const IntensityMatrix& Q,
                    const std::string& label) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!opts.output_path.empty()) {
    file.open(opts.output_path);
    if (!file) throw parse_error("cannot open '" + opts.output_path + "' for writing");
    out = &file;
  }
  if (opts.format == "json") {
    *out << nlohmann::json{{"generator", matrix_json(Q.matrix())}}.dump(2) << '\n';
  } else if (opts.format == "csv") {
    write_matrix_csv(*out, Q.matrix());
  } else {
    *out << label << " (4 decimals):\n";
    print_matrix_4dp(*out, Q.matrix());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Conditional embedding toolkit: estimate the intensity matrix of a "
               "continuous-time Markov chain whose one-step transitions, conditioned "
               "on at most one jump per unit interval, match an observed matrix"};
  app.require_subcommand(1);

  std::string input, input_p, input_q;
  SolverConfig solver_cfg;
  OutputOptions out_opts;

  auto* j1 = app.add_subcommand("j1", "Solve for the unique conditional generator");
  j1->add_option("--input", input, "CSV transition matrix")->required();
  j1->add_option("--tol", solver_cfg.tolerance, "Relative sup-norm stopping tolerance");
  j1->add_option("--max-iter", solver_cfg.max_iterations, "Iteration budget");
  j1->add_option("--damping", solver_cfg.damping, "Damping factor in (0,1]");
  add_output_flags(j1, out_opts);

  auto* jlt_cmd = app.add_subcommand("jlt", "Closed-form Jarrow-Lando-Turnbull generator");
  jlt_cmd->add_option("--input", input, "CSV transition matrix")->required();
  add_output_flags(jlt_cmd, out_opts);

  auto* verify = app.add_subcommand(
      "verify", "Reconstruct the conditional transition matrix of Q and compare against P");
  verify->add_option("--input-p", input_p, "CSV transition matrix")->required();
  verify->add_option("--input-q", input_q, "CSV intensity matrix")->required();

  auto* check = app.add_subcommand("check", "Embeddability screens and solver diagnostics");
  check->add_option("--input", input, "CSV transition matrix")->required();

  auto* compare = app.add_subcommand(
      "compare", "Compare both generators by how well exp(Q) reproduces P");
  compare->add_option("--input", input, "CSV transition matrix")->required();

  std::uint64_t paths = 1'000'000;
  std::uint64_t seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo check of the conditional kernel");
  simulate->add_option("--input-q", input_q, "CSV intensity matrix")->required();
  simulate->add_option("--paths", paths, "Paths per start state");
  simulate->add_option("--seed", seed, "RNG master seed");
  add_output_flags(simulate, out_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // every command-line problem is an input error
  }

  if (j1->parsed()) {
    const SolveReport report = j1_generator(load_stochastic(input), solver_cfg);
    emit(out_opts, report);
  } else if (jlt_cmd->parsed()) {
    emit_intensity(out_opts, jlt(load_stochastic(input)), "JLT generator");
  } else if (verify->parsed()) {
    const StochasticMatrix P = load_stochastic(input_p);
    const IntensityMatrix Q = load_intensity(input_q);
    const StochasticMatrix reconstructed = conditional_transition_matrix(Q);
    if (P.n() != reconstructed.n()) throw std::invalid_argument("verify: dimension mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < P.n(); ++i)
      for (std::size_t j = 0; j < P.n(); ++j)
        dev = std::max(dev, std::abs(P(i, j) - reconstructed(i, j)));
    std::cout << "max entrywise |P - P_cond(Q)|: " << format_full(dev) << '\n';
  } else if (check->parsed()) {
    const StochasticMatrix P = load_stochastic(input);
    const bool embeddable = j1_embeddable(P);
    const GoodmanCheck goodman = goodman_check(P);
    std::cout << "j1_embeddable:   " << (embeddable ? "true" : "false") << '\n'
              << "goodman_screen:  " << (goodman.passes ? "pass" : "fail")
              << "  (det = " << format_full(goodman.det)
              << ", diag product = " << format_full(goodman.diag_product) << ")\n";
    if (embeddable) {
      const auto [lo, hi] = qii_bounds(P);
      const ContractionEstimate c = contraction_estimate(P);
      std::cout << "qii bounds:      [" << format_full(lo) << ", " << format_full(hi) << "]\n"
                << "contraction:     alpha = " << format_full(c.alpha)
                << ", C(alpha) = " << format_full(c.C_alpha) << ", K = " << format_full(c.K)
                << (c.is_contraction ? "  (contraction)" : "  (no certificate)") << '\n';
    }
  } else if (compare->parsed()) {
    const StochasticMatrix P = load_stochastic(input);
    const SolveReport report = j1_generator(P);
    const IntensityMatrix Q_jlt = jlt(P);
    const double gap_j1 = norm_gap(P, report.generator);
    const double gap_jlt = norm_gap(P, Q_jlt);
    std::cout << "conditional generator (4 decimals):\n";
    print_matrix_4dp(std::cout, report.generator.matrix());
    std::cout << "JLT generator (4 decimals):\n";
    print_matrix_4dp(std::cout, Q_jlt.matrix());
    std::cout << "norm gap, conditional: " << format_full(gap_j1) << '\n'
              << "norm gap, JLT:         " << format_full(gap_jlt) << '\n'
              << "better approximation:  " << (gap_j1 < gap_jlt ? "conditional" : "JLT") << '\n';
  } else if (simulate->parsed()) {
    const IntensityMatrix Q = load_intensity(input_q);
    SimulationConfig cfg;
    cfg.paths_per_state = paths;
    cfg.seed = seed;
    const SimulationEstimate est = simulate_conditional(Q, cfg);
    if (out_opts.format == "json") {
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!out_opts.output_path.empty()) {
        file.open(out_opts.output_path);
        if (!file) throw parse_error("cannot open '" + out_opts.output_path + "' for writing");
        out = &file;
      }
      *out << simulation_json(est).dump(2) << '\n';
    } else {
      std::cout << "conditional frequencies (4 decimals):\n";
      print_matrix_4dp(std::cout, est.conditional_freq);
      std::cout << "retained fraction per start state:\n";
      for (double r : est.retained_fraction) std::cout << "  " << format_full(r) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const condembed::not_j1_embeddable& e) {
    std::cerr << "error: not J1-embeddable: " << e.what() << '\n';
    return 3;
  } catch (const condembed::non_convergence& e) {
    std::cerr << "error: " << e.what() << " (last update " << e.residual() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
