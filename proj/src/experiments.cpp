#include "mvsolve/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "mvsolve/instance_io.hpp"
#include "mvsolve/linalg.hpp"

namespace mvsolve {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
  // splitmix64 finalizer over a simple combination
  std::uint64_t z = base;
  for (std::uint64_t v : {a, b, c}) {
    z += 0x9e3779b97f4a7c15ull + v;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
  }
  return z;
}

ProblemInstance make_planted(Index n, std::uint64_t seed, double condition,
                             double angle) {
  const SpdMatrix j = random_spd(n, mix_seed(seed, 1, n), condition);
  Matrix s = random_skew(n, mix_seed(seed, 2, n)).matrix();
  const double sn = s.norm();
  if (sn > 0.0) s *= angle / sn;  // n = 1 has only the zero tangent
  const RotationMatrix xs = expm_skew(SkewMatrix(s));
  const Matrix& x = xs.matrix();
  const SkewMatrix m(x * j.matrix() - j.matrix() * x.transpose());
  return ProblemInstance(j, m, xs,
                         "planted-n" + std::to_string(n) + "-s" +
                             std::to_string(seed));
}

ProblemInstance make_raw(Index n, std::uint64_t seed, double condition,
                         double m_scale) {
  const SpdMatrix j = random_spd(n, mix_seed(seed, 3, n), condition);
  SkewMatrix m = random_skew(n, mix_seed(seed, 4, n));
  const double mn = m.matrix().norm();
  Matrix scaled = m.matrix();
  if (mn > 0.0) scaled *= m_scale * j.matrix().norm() / mn;
  return ProblemInstance(j, SkewMatrix(scaled), {},
                         "raw-n" + std::to_string(n) + "-s" +
                             std::to_string(seed));
}

ProblemInstance make_imaginary_spectrum(std::uint64_t seed) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    GaussianStream g(mix_seed(seed, 5, attempt));
    const double d1 = 1.0 + 0.5 * std::abs(g.next());
    const double d2 = d1 * (1.5 + 0.5 * std::abs(g.next()));
    const double m1 = 2.0 * d1;  // boundary: m = trace of the 2x2 block
    const double theta = 0.3 + 0.4 * std::abs(std::tanh(g.next()));
    const double m2 = theta * 2.0 * d2;  // strictly inside: off-axis spectrum

    Matrix jb = Matrix::Zero(4, 4);
    jb.diagonal() << d1, d1, d2, d2;
    Matrix mb = Matrix::Zero(4, 4);
    mb(0, 1) = m1;
    mb(1, 0) = -m1;
    mb(2, 3) = m2;
    mb(3, 2) = -m2;
    // per-block closed form: sin = -m/(2d), cos = sqrt(1 - sin^2)
    Matrix xb = Matrix::Zero(4, 4);
    xb(0, 1) = 1.0;
    xb(1, 0) = -1.0;  // boundary block: sin = -1, cos = 0
    const double s2 = -m2 / (2.0 * d2);
    const double c2 = std::sqrt(1.0 - s2 * s2);
    xb(2, 2) = c2;
    xb(2, 3) = -s2;
    xb(3, 2) = s2;
    xb(3, 3) = c2;

    const Matrix q = random_rotation(4, mix_seed(seed, 6, attempt)).matrix();
    SpdMatrix j(q * jb * q.transpose());
    SkewMatrix m(q * mb * q.transpose());
    RotationMatrix x_true(q * xb * q.transpose());
    ProblemInstance inst(j, m, x_true,
                         "imag-n4-s" + std::to_string(seed));

    // accept only when the computed spectrum confirms the construction:
    // exactly four eigenvalues on the axis (the defective +-i d1 pairs split
    // by about sqrt(u) under rounding, hence the wide tolerance) and four
    // clearly off it
    const double hnorm = spectral_norm(hamiltonian_matrix(inst));
    const HamiltonianDiagnosis diag =
        hamiltonian_diagnose(inst, 1e-6 * hnorm);
    Index on_axis = 0, off_axis = 0;
    for (Index i = 0; i < diag.eigenvalues.size(); ++i) {
      const double re = std::abs(diag.eigenvalues(i).real());
      if (re <= diag.imag_tolerance) ++on_axis;
      if (re > 1e-3 * hnorm) ++off_axis;
    }
    if (on_axis == 4 && off_axis == 4 &&
        diag.classification == SpectrumClass::PureImaginaryPresent)
      return inst;
  }
  throw ConvergenceError(
      "make_imaginary_spectrum: no verified instance after 100 attempts");
}

namespace {

struct SolveSetup {
  Algorithm algo;
  std::string x0_name;  // "identity" or "random"
};

void push_metric_rows(BenchResult& out, const std::string& experiment,
                      Index size, const std::string& algo,
                      const std::string& x0_name,
                      const std::map<std::string, std::vector<double>>& data) {
  for (const auto& [metric, values] : data) {
    BenchRow row;
    row.experiment = experiment;
    row.size = size;
    row.algorithm = algo;
    row.x0 = x0_name;
    row.metric = metric;
    row.stats = summarize(values);
    out.rows.push_back(std::move(row));
  }
}

BenchDetail detail_from(const std::string& experiment,
                        const ProblemInstance& inst, const std::string& algo,
                        const std::string& x0_name, const SolverReport& rep) {
  BenchDetail d;
  d.experiment = experiment;
  d.label = inst.label();
  d.size = inst.order();
  d.algorithm = algo;
  d.x0 = x0_name;
  d.iterations = rep.iterations;
  d.converged = rep.converged;
  const Matrix& x = rep.solution.matrix();
  d.rel_res = residual(inst, x).rel_res;
  d.objective = objective_restricted(inst, x);
  d.grad_norm =
      riemannian_gradient(inst, x, GradientKind::Restricted).matrix().norm();
  return d;
}

BenchResult run_planted_experiment(const std::string& name,
                                   const std::vector<Index>& sizes,
                                   int samples, std::uint64_t seed,
                                   const std::vector<SolveSetup>& setups,
                                   double tol) {
  BenchResult out;
  for (Index n : sizes) {
    std::map<std::string, std::map<std::string, std::vector<double>>> metrics;
    for (int i = 0; i < samples; ++i) {
      const ProblemInstance inst =
          make_planted(n, mix_seed(seed, static_cast<std::uint64_t>(n), i));
      for (const SolveSetup& setup : setups) {
        SolverConfig cfg;
        cfg.tol = tol;
        if (setup.x0_name == "random")
          cfg.x0 = StartPoint::random(
              mix_seed(seed, static_cast<std::uint64_t>(n), i, 7));
        const SolverReport rep = solve(inst, setup.algo, cfg);
        const BenchDetail d =
            detail_from(name, inst, to_string(setup.algo), setup.x0_name, rep);
        auto& slot =
            metrics[std::string(to_string(setup.algo)) + "|" + setup.x0_name];
        slot["iter"].push_back(static_cast<double>(d.iterations));
        slot["rel_res"].push_back(d.rel_res);
        slot["objective"].push_back(d.objective);
        slot["grad_norm"].push_back(d.grad_norm);
        out.details.push_back(d);
      }
    }
    for (const SolveSetup& setup : setups) {
      const auto key = std::string(to_string(setup.algo)) + "|" + setup.x0_name;
      push_metric_rows(out, name, n, to_string(setup.algo), setup.x0_name,
                       metrics[key]);
    }
  }
  return out;
}

}  // namespace

BenchResult run_experiment1(const std::vector<Index>& sizes, int samples,
                            std::uint64_t seed) {
  return run_planted_experiment(
      "exp1", sizes, samples, seed,
      {{Algorithm::Bregman, "identity"}, {Algorithm::CayleyBB, "identity"}},
      1e-10);
}

BenchResult run_experiment2(const std::vector<Index>& sizes, int samples,
                            std::uint64_t seed) {
  return run_planted_experiment("exp2", sizes, samples, seed,
                                {{Algorithm::Bregman, "identity"},
                                 {Algorithm::Bregman, "random"},
                                 {Algorithm::CayleyBB, "identity"},
                                 {Algorithm::CayleyBB, "random"}},
                                1e-10);
}

BenchResult run_experiment3(const std::vector<Index>& sizes, int samples,
                            std::uint64_t seed) {
  return run_planted_experiment("exp3", sizes, samples, seed,
                                {{Algorithm::Bregman, "identity"},
                                 {Algorithm::CayleyBB, "identity"},
                                 {Algorithm::GeodesicArmijo, "identity"}},
                                1e-5);
}

BenchResult run_experiment4(const std::filesystem::path& instance_dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(instance_dir))
    for (const auto& entry : std::filesystem::directory_iterator(instance_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".mvi")
        files.push_back(entry.path());
  if (files.empty())
    throw ParseError("experiment 4 needs curated instances; none found in " +
                     instance_dir.string());
  std::sort(files.begin(), files.end());

  BenchResult out;
  std::map<std::string, std::map<std::string, std::vector<double>>> metrics;
  for (const auto& file : files) {
    const ProblemInstance inst = read_instance(file);
    for (Algorithm algo :
         {Algorithm::Bregman, Algorithm::CayleyBB, Algorithm::GeodesicArmijo}) {
      SolverConfig cfg;
      cfg.tol = 1e-5;
      const SolverReport rep = solve(inst, algo, cfg);
      const BenchDetail d =
          detail_from("exp4", inst, to_string(algo), "identity", rep);
      auto& slot = metrics[to_string(algo)];
      slot["iter"].push_back(static_cast<double>(d.iterations));
      slot["rel_res"].push_back(d.rel_res);
      out.details.push_back(d);
    }
  }
  for (const auto& [algo, data] : metrics)
    push_metric_rows(out, "exp4", 4, algo, "identity", data);
  return out;
}

namespace {

std::string csv_escape_outliers(const std::vector<double>& outliers) {
  std::string s;
  for (double v : outliers) {
    if (!s.empty()) s += ';';
    s += format_double(v);
  }
  return s;
}

}  // namespace

void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path.string());
  out << "experiment,size,algorithm,x0,metric,count,min,q1,median,q3,max,"
         "whisker_lo,whisker_hi,outliers\n";
  for (const BenchRow& r : rows) {
    out << r.experiment << ',' << r.size << ',' << r.algorithm << ',' << r.x0
        << ',' << r.metric << ',' << r.stats.count << ',';
    if (r.stats.count == 0) {
      out << ",,,,,,,\n";
      continue;
    }
    out << format_double(r.stats.min) << ',' << format_double(r.stats.q1)
        << ',' << format_double(r.stats.median) << ','
        << format_double(r.stats.q3) << ',' << format_double(r.stats.max)
        << ',' << format_double(r.stats.whisker_lo) << ','
        << format_double(r.stats.whisker_hi) << ','
        << csv_escape_outliers(r.stats.outliers) << "\n";
  }
}

void write_bench_details_csv(const std::filesystem::path& path,
                             const std::vector<BenchDetail>& details) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path.string());
  out << "experiment,label,size,algorithm,x0,iterations,converged,rel_res,"
         "objective,grad_norm\n";
  for (const BenchDetail& d : details) {
    out << d.experiment << ',' << d.label << ',' << d.size << ','
        << d.algorithm << ',' << d.x0 << ',' << d.iterations << ','
        << (d.converged ? "true" : "false") << ',' << format_double(d.rel_res)
        << ',' << format_double(d.objective) << ','
        << format_double(d.grad_norm) << "\n";
  }
}

}  // namespace mvsolve
