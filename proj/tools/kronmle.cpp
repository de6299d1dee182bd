// Command line front end: exact thresholds, two-sample statistics, rank
// certificates, pencil canonical forms, flip-flop fits, and Monte Carlo
// tallies over the Kronecker covariance model.
//
// Exit codes: 0 success (fit converged), 1 input error, 2 no maximum
// (diverged, unbounded, or non-generic data), 3 iteration budget exhausted.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kronmle/closedform.hpp"
#include "kronmle/core.hpp"
#include "kronmle/errors.hpp"
#include "kronmle/flipflop.hpp"
#include "kronmle/minrank.hpp"
#include "kronmle/montecarlo.hpp"
#include "kronmle/pencil.hpp"
#include "kronmle/rng.hpp"
#include "kronmle/sample_io.hpp"
#include "kronmle/thresholds.hpp"
#include "kronmle/types.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoMax = 2;
constexpr int kExitBudget = 3;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* status_name(kronmle::FitStatus status) {
  switch (status) {
    case kronmle::FitStatus::UniqueMax: return "unique-max";
    case kronmle::FitStatus::NonUniqueMax: return "non-unique-max";
    case kronmle::FitStatus::Diverged: return "diverged";
    case kronmle::FitStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

const char* verdict_name(kronmle::MleVerdict verdict) {
  switch (verdict) {
    case kronmle::MleVerdict::UniqueMLE: return "unique-mle";
    case kronmle::MleVerdict::NonUniqueMLE: return "non-unique-mle";
    case kronmle::MleVerdict::NoMLE: return "no-mle";
  }
  return "unknown";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("KRONMLE_SEED")) {
    std::string text(env);
    try {
      size_t used = 0;
      std::uint64_t value = std::stoull(text, &used);
      if (used == text.size()) return value;
    } catch (const std::exception&) {
    }
    throw kronmle::InvalidArgument("KRONMLE_SEED must be an unsigned integer");
  }
  return 0;
}

struct CommonOptions {
  int m1 = 0;
  int m2 = 0;
  int n = 0;
  int k = 0;
  std::optional<std::uint64_t> seed;
  long trials = 1000;
  int max_iter = 500;
  double tol = 1e-10;
  std::string trace_path;
  int table = 0;
  bool mean_unknown = false;
  int jobs = 1;
  std::string input_path;
  std::string format = "json";

  [[nodiscard]] std::uint64_t seed_value() const {
    return seed ? *seed : default_seed();
  }
  [[nodiscard]] bool csv() const { return format == "csv"; }
};

kronmle::DataSample load_or_draw(const CommonOptions& opt) {
  if (!opt.input_path.empty())
    return kronmle::read_sample_json(opt.input_path);
  if (opt.m1 < 1 || opt.m2 < 1 || opt.n < 1)
    throw kronmle::InvalidArgument(
        "need --input, or --m1/--m2/--n to draw a sample");
  kronmle::Xoshiro256pp rng(opt.seed_value());
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(opt.n);
  for (int i = 0; i < opt.n; ++i)
    mats.push_back(kronmle::standard_normal(opt.m1, opt.m2, rng));
  return kronmle::DataSample(opt.m1, opt.m2, std::move(mats));
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

int run_fit(const CommonOptions& opt) {
  kronmle::DataSample sample = load_or_draw(opt);
  kronmle::FlipFlopConfig config;
  config.max_iterations = opt.max_iter;
  config.rel_tol = opt.tol;
  config.init_seed = opt.seed_value();
  kronmle::FitReport report = kronmle::fit(sample, config);

  if (!opt.trace_path.empty()) {
    std::ofstream trace(opt.trace_path);
    if (!trace)
      throw kronmle::InvalidArgument("cannot open trace file: " +
                                     opt.trace_path);
    trace << "iteration,g,delta\n";
    for (size_t i = 0; i < report.g_trace.size(); ++i) {
      trace << i << "," << report.g_trace[i] << ",";
      if (i > 0) trace << report.delta_trace[i - 1];
      trace << "\n";
    }
  }

  if (opt.csv()) {
    std::cout << "m1,m2,n,status,iterations,g_initial,g_final\n"
              << sample.m1() << "," << sample.m2() << "," << sample.n() << ","
              << status_name(report.status) << "," << report.iterations << ","
              << report.g_trace.front() << "," << report.g_trace.back()
              << "\n";
  } else {
    json doc;
    doc["m1"] = sample.m1();
    doc["m2"] = sample.m2();
    doc["n"] = sample.n();
    doc["status"] = status_name(report.status);
    doc["iterations"] = report.iterations;
    doc["g_initial"] = report.g_trace.front();
    doc["g_final"] = report.g_trace.back();
    if (report.estimate) {
      doc["estimate"]["psi1"] = matrix_to_json(report.estimate->psi1.matrix());
      doc["estimate"]["psi2"] = matrix_to_json(report.estimate->psi2.matrix());
    }
    emit(doc);
  }
  switch (report.status) {
    case kronmle::FitStatus::Diverged: return kExitNoMax;
    case kronmle::FitStatus::MaxIterations: return kExitBudget;
    default: return kExitOk;
  }
}

int run_threshold(const CommonOptions& opt) {
  if (opt.table > 0) {
    std::cout << kronmle::threshold_table_csv(opt.table, opt.mean_unknown);
    return kExitOk;
  }
  if (opt.m1 < 1 || opt.m2 < 1)
    throw kronmle::InvalidArgument("need --m1 and --m2, or --table");
  kronmle::ThresholdReport rep =
      kronmle::thresholds(opt.m1, opt.m2, opt.mean_unknown);
  if (opt.csv()) {
    std::cout << "m1,m2,bounded,exists,unique,lower,upper,source\n"
              << rep.m1 << "," << rep.m2 << ",";
    if (rep.bounded) std::cout << *rep.bounded;
    std::cout << ",";
    if (rep.exists) std::cout << *rep.exists;
    std::cout << ",";
    if (rep.unique) std::cout << *rep.unique;
    std::cout << "," << rep.lower << "," << rep.upper << ","
              << kronmle::threshold_source_name(rep.source) << "\n";
  } else {
    json doc;
    doc["m1"] = rep.m1;
    doc["m2"] = rep.m2;
    doc["mean_unknown"] = rep.mean_unknown;
    doc["bounded"] = rep.bounded ? json(*rep.bounded) : json(nullptr);
    doc["exists"] = rep.exists ? json(*rep.exists) : json(nullptr);
    doc["unique"] = rep.unique ? json(*rep.unique) : json(nullptr);
    doc["lower"] = rep.lower;
    doc["upper"] = rep.upper;
    doc["source"] = kronmle::threshold_source_name(rep.source);
    emit(doc);
  }
  return kExitOk;
}

int run_s2(const CommonOptions& opt) {
  if (opt.table > 0) {
    std::cout << kronmle::s2_table_csv(opt.table);
    return kExitOk;
  }
  if (opt.m1 < 1 || opt.m2 < 1)
    throw kronmle::InvalidArgument("need --m1 and --m2, or --table");
  kronmle::SValueReport rep = kronmle::s2(opt.m1, opt.m2);
  if (opt.csv()) {
    std::cout << "m1,m2,value,minimizing_k\n" << rep.m1 << "," << rep.m2
              << ",";
    if (rep.conditional()) {
      const auto& cond = std::get<kronmle::ConditionalValue>(rep.value);
      std::cout << cond.real_case << "|" << cond.complex_case;
    } else {
      std::cout << std::get<int>(rep.value);
    }
    std::cout << ",";
    for (size_t i = 0; i < rep.minimizing_k.size(); ++i) {
      if (i > 0) std::cout << ";";
      std::cout << rep.minimizing_k[i];
    }
    std::cout << "\n";
  } else {
    json doc;
    doc["m1"] = rep.m1;
    doc["m2"] = rep.m2;
    doc["n"] = rep.n;
    if (rep.conditional()) {
      const auto& cond = std::get<kronmle::ConditionalValue>(rep.value);
      doc["value"]["real"] = cond.real_case;
      doc["value"]["complex"] = cond.complex_case;
      doc["verdict"] = "conditional";
    } else {
      int v = std::get<int>(rep.value);
      doc["value"] = v;
      doc["verdict"] = verdict_name(rep.verdict());
    }
    doc["minimizing_k"] = rep.minimizing_k;
    emit(doc);
  }
  return kExitOk;
}

int run_minrank(const CommonOptions& opt) {
  if (opt.k < 1) throw kronmle::InvalidArgument("need --k");
  if (!opt.input_path.empty()) {
    kronmle::DataSample sample = kronmle::read_sample_json(opt.input_path);
    int bound = kronmle::numeric_min_rank_search(sample, opt.k, 32,
                                                 opt.seed_value());
    json doc;
    doc["m1"] = sample.m1();
    doc["m2"] = sample.m2();
    doc["n"] = sample.n();
    doc["k"] = opt.k;
    doc["rank_upper_bound"] = bound;
    doc["restarts"] = 32;
    emit(doc);
    return kExitOk;
  }
  if (opt.m1 < 1 || opt.m2 < 1)
    throw kronmle::InvalidArgument("need --m1 and --m2 (or --input)");
  kronmle::MinRankCert cert = kronmle::r2(opt.m1, opt.m2, opt.k);
  if (opt.csv()) {
    std::cout << "m1,m2,k,r,a1,b1\n"
              << cert.m1 << "," << cert.m2 << "," << cert.k << "," << cert.r
              << "," << cert.a1 << "," << cert.b1 << "\n";
  } else {
    json doc;
    doc["m1"] = cert.m1;
    doc["m2"] = cert.m2;
    doc["k"] = cert.k;
    doc["r"] = cert.r;
    doc["a1"] = cert.a1;
    doc["b1"] = cert.b1;
    doc["witness"] = matrix_to_json(cert.witness);
    emit(doc);
  }
  return kExitOk;
}

int run_canonical(const CommonOptions& opt) {
  kronmle::DataSample sample = load_or_draw(opt);
  if (sample.n() < 2)
    throw kronmle::InvalidArgument("canonical forms need n >= 2");
  const Eigen::MatrixXd& y1 = sample.matrices()[0];
  const Eigen::MatrixXd& y2 = sample.matrices()[1];
  json doc;
  if (sample.m1() == sample.m2()) {
    kronmle::RealJordanPair pair = kronmle::real_jordan_pair(y1, y2);
    doc["form"] = "real-jordan";
    json blocks = json::array();
    for (const auto& b : pair.blocks) {
      json block;
      block["type"] = b.is_complex ? "complex" : "real";
      block["re"] = b.re;
      if (b.is_complex) block["im"] = b.im;
      blocks.push_back(std::move(block));
    }
    doc["blocks"] = std::move(blocks);
    doc["jordan"] = matrix_to_json(pair.jordan);
    doc["a"] = matrix_to_json(pair.a);
    doc["b"] = matrix_to_json(pair.b);
  } else {
    kronmle::PencilCanonicalization canon = kronmle::canonicalize_pair(y1, y2);
    doc["form"] = "stacked";
    doc["l"] = canon.l;
    doc["n_a"] = canon.n_a;
    doc["n_b"] = canon.n_b;
    doc["residual"] = canon.residual;
    doc["a"] = matrix_to_json(canon.a);
    doc["b"] = matrix_to_json(canon.b);
  }
  emit(doc);
  return kExitOk;
}

int run_classify2x2(const CommonOptions& opt) {
  kronmle::DataSample sample = load_or_draw(opt);
  if (sample.m1() != 2 || sample.m2() != 2 || sample.n() != 2)
    throw kronmle::InvalidArgument("classification needs two 2x2 matrices");
  kronmle::TwoByTwoReport rep = kronmle::classify_2x2(
      sample.matrices()[0], sample.matrices()[1]);
  json doc;
  switch (rep.kind) {
    case kronmle::TwoByTwoCase::UniqueMax: doc["kind"] = "unique-max"; break;
    case kronmle::TwoByTwoCase::NonUniqueMax:
      doc["kind"] = "non-unique-max";
      break;
    case kronmle::TwoByTwoCase::InfimumNotAttained:
      doc["kind"] = "infimum-not-attained";
      break;
  }
  doc["discriminant"] = rep.discriminant;
  if (rep.psi) doc["psi"] = matrix_to_json(rep.psi->matrix());
  if (rep.infimum) doc["infimum"] = *rep.infimum;
  emit(doc);
  return rep.kind == kronmle::TwoByTwoCase::InfimumNotAttained ? kExitNoMax
                                                               : kExitOk;
}

int run_montecarlo(const CommonOptions& opt, bool real_eigs) {
  if (real_eigs) {
    kronmle::RealEigsEstimate est =
        kronmle::prob_real_eigs_2x2(opt.trials, opt.seed_value());
    if (opt.csv()) {
      std::cout << "trials,real_count,redraws,estimate,std_error\n"
                << est.trials << "," << est.real_count << "," << est.redraws
                << "," << est.estimate << "," << est.std_error << "\n";
    } else {
      json doc;
      doc["trials"] = est.trials;
      doc["real_count"] = est.real_count;
      doc["redraws"] = est.redraws;
      doc["estimate"] = est.estimate;
      doc["std_error"] = est.std_error;
      emit(doc);
    }
    return kExitOk;
  }
  if (opt.m1 < 1 || opt.m2 < 1 || opt.n < 1)
    throw kronmle::InvalidArgument("need --m1, --m2 and --n");
  kronmle::FlipFlopConfig config;
  config.max_iterations = opt.max_iter;
  config.rel_tol = opt.tol;
  kronmle::SimulationReport rep = kronmle::empirical_threshold(
      opt.m1, opt.m2, opt.n, opt.trials, opt.seed_value(), config, opt.jobs);
  if (opt.csv()) {
    std::cout << "m1,m2,n,trials,unique_max,non_unique_max,diverged,"
                 "max_iterations,step_ill_defined,degenerate\n"
              << rep.m1 << "," << rep.m2 << "," << rep.n << "," << rep.trials
              << "," << rep.tally.unique_max << "," << rep.tally.non_unique_max
              << "," << rep.tally.diverged << "," << rep.tally.max_iterations
              << "," << rep.tally.step_ill_defined << ","
              << rep.tally.degenerate << "\n";
  } else {
    json doc;
    doc["m1"] = rep.m1;
    doc["m2"] = rep.m2;
    doc["n"] = rep.n;
    doc["trials"] = rep.trials;
    doc["seed"] = rep.seed;
    doc["tally"]["unique_max"] = rep.tally.unique_max;
    doc["tally"]["non_unique_max"] = rep.tally.non_unique_max;
    doc["tally"]["diverged"] = rep.tally.diverged;
    doc["tally"]["max_iterations"] = rep.tally.max_iterations;
    doc["tally"]["step_ill_defined"] = rep.tally.step_ill_defined;
    doc["tally"]["degenerate"] = rep.tally.degenerate;
    doc["frac_unique"] = rep.frac_unique();
    doc["frac_attained"] = rep.frac_attained();
    emit(doc);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kronecker covariance maximum likelihood toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kronmle 1.0.0");

  CommonOptions opt;
  bool real_eigs = false;

  auto add_dims = [&](CLI::App* sub) {
    sub->add_option("--m1", opt.m1, "rows per observation");
    sub->add_option("--m2", opt.m2, "columns per observation");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed,
                    "RNG seed (default: KRONMLE_SEED or 0)");
  };

  CLI::App* fit = app.add_subcommand("fit", "run the flip-flop iteration");
  add_dims(fit);
  fit->add_option("--n", opt.n, "number of observations");
  fit->add_option("--input", opt.input_path, "sample JSON file");
  fit->add_option("--max-iter", opt.max_iter, "iteration budget");
  fit->add_option("--tol", opt.tol, "relative stall tolerance");
  fit->add_option("--trace", opt.trace_path, "write per-iteration CSV here");
  add_seed(fit);
  add_format(fit);

  CLI::App* threshold =
      app.add_subcommand("threshold", "exact sample-size thresholds");
  add_dims(threshold);
  threshold->add_option("--table", opt.table, "emit CSV table up to m1");
  threshold->add_flag("--mean-unknown", opt.mean_unknown,
                      "estimate the mean too");
  add_format(threshold);

  CLI::App* s2cmd =
      app.add_subcommand("s2", "two-sample existence statistic");
  add_dims(s2cmd);
  s2cmd->add_option("--table", opt.table, "emit CSV table up to m1");
  add_format(s2cmd);

  CLI::App* minrank =
      app.add_subcommand("minrank", "minimal rank certificate");
  add_dims(minrank);
  minrank->add_option("--k", opt.k, "selector width");
  minrank->add_option("--input", opt.input_path,
                      "sample JSON file for a numeric search");
  add_seed(minrank);
  add_format(minrank);

  CLI::App* canonical =
      app.add_subcommand("canonical", "pencil canonical form");
  add_dims(canonical);
  canonical->add_option("--n", opt.n, "number of observations to draw");
  canonical->add_option("--input", opt.input_path, "sample JSON file");
  add_seed(canonical);

  CLI::App* classify =
      app.add_subcommand("classify2x2", "2x2 likelihood trichotomy");
  classify->add_option("--input", opt.input_path, "sample JSON file");
  add_seed(classify);

  CLI::App* montecarlo =
      app.add_subcommand("montecarlo", "repeated-fit tallies");
  add_dims(montecarlo);
  montecarlo->add_option("--n", opt.n, "number of observations");
  montecarlo->add_option("--trials", opt.trials, "number of trials");
  montecarlo->add_option("--jobs", opt.jobs, "worker threads");
  montecarlo->add_option("--max-iter", opt.max_iter, "iteration budget");
  montecarlo->add_option("--tol", opt.tol, "relative stall tolerance");
  montecarlo->add_flag("--real-eigs-2x2", real_eigs,
                       "estimate P(real eigenvalues) for random 2x2 pencils");
  add_seed(montecarlo);
  add_format(montecarlo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (fit->parsed()) return run_fit(opt);
    if (threshold->parsed()) return run_threshold(opt);
    if (s2cmd->parsed()) return run_s2(opt);
    if (minrank->parsed()) return run_minrank(opt);
    if (canonical->parsed()) return run_canonical(opt);
    if (classify->parsed()) {
      if (opt.input_path.empty()) {
        opt.m1 = 2;
        opt.m2 = 2;
        opt.n = 2;
      }
      return run_classify2x2(opt);
    }
    if (montecarlo->parsed()) return run_montecarlo(opt, real_eigs);
  } catch (const kronmle::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const kronmle::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const kronmle::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoMax;
  }
  return kExitInput;
}
