#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvsolve/problem.hpp"
#include "mvsolve/solvers.hpp"
#include "mvsolve/stats.hpp"

namespace mvsolve {

// Stable seed mixing so that suites are reproducible and every (size, index,
// role) triple draws from an independent stream.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c = 0);

// Solvable-by-construction instance: J random SPD, X* a random rotation of
// bounded geodesic radius (X* = expm(S) with ||S||_F = angle), and
// M := X* J - J X*^T (skew by construction). X* is recorded as the known
// solution. The radius keeps the solution inside the basin that the X0 = I
// start reliably reaches; Haar-distributed solutions routinely strand all
// descent methods in flat regions far from any root.
ProblemInstance make_planted(Index n, std::uint64_t seed,
                             double condition = 10.0, double angle = 1.0);

// Independent random J and M with ||M||_F = m_scale * ||J||_F. Solvability is
// not guaranteed; pair with hamiltonian_diagnose. The default scale keeps the
// Hamiltonian spectrum off the imaginary axis most of the time; near
// m_scale = 1 nearly every draw becomes unsolvable.
ProblemInstance make_raw(Index n, std::uint64_t seed, double condition = 10.0,
                         double m_scale = 0.3);

// Order-4 instance whose Hamiltonian block matrix has a conjugate pair of
// defective double eigenvalues exactly on the imaginary axis (even Jordan
// blocks), while the remaining four eigenvalues stay clearly off-axis. Built
// from a 2x2 boundary block (|m| = trace of its inertia block) plus a regular
// block, conjugated by a random rotation; the construction is verified
// through the eigenvalue classification before being accepted, and the
// solution of the boundary case is recorded as X_true.
ProblemInstance make_imaginary_spectrum(std::uint64_t seed);

struct BenchRow {
  std::string experiment;
  Index size = 0;
  std::string algorithm;
  std::string x0;      // "identity" or "random"
  std::string metric;  // iter | rel_res | objective | grad_norm
  StatSummary stats;
};

// One raw solve outcome, kept for the per-instance detail files.
struct BenchDetail {
  std::string experiment;
  std::string label;
  Index size = 0;
  std::string algorithm;
  std::string x0;
  int iterations = 0;
  bool converged = false;
  double rel_res = 0.0;
  double objective = 0.0;
  double grad_norm = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchDetail> details;
};

// Planted suites, tol = 1e-10, X0 = I: Bregman splitting vs Cayley/BB over
// iteration counts, relative residuals, objective values and gradient norms.
BenchResult run_experiment1(const std::vector<Index>& sizes, int samples,
                            std::uint64_t seed);

// Same two algorithms, X0 = I vs a randomized rotation.
BenchResult run_experiment2(const std::vector<Index>& sizes, int samples,
                            std::uint64_t seed);

// All three algorithms at the loose tolerance 1e-5.
BenchResult run_experiment3(const std::vector<Index>& sizes, int samples,
                            std::uint64_t seed);

// The curated imaginary-spectrum instances from a directory, all three
// algorithms, tol = 1e-5.
BenchResult run_experiment4(const std::filesystem::path& instance_dir);

void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows);
void write_bench_details_csv(const std::filesystem::path& path,
                             const std::vector<BenchDetail>& details);

}  // namespace mvsolve
