#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mvsolve/problem.hpp"
#include "mvsolve/solvers.hpp"

namespace mvsolve {

// Decimal text with 17 significant digits: round-trips IEEE doubles exactly.
std::string format_double(double v);

// Instance files are line-oriented "key: value" text; matrices are one line
// of row-major values. X_true is optional.
//
//   format_version: 1
//   label: <text>
//   n: <order>
//   J: <n*n values>
//   M: <n*n values>
//   X_true: <n*n values>
inline constexpr int kInstanceFormatVersion = 1;

void write_instance(const std::filesystem::path& path,
                    const ProblemInstance& inst);
std::string instance_to_string(const ProblemInstance& inst);

// Parses and validates (J must pass the SPD check, M the skew check, X_true
// the rotation check). Throws ParseError on malformed input.
ProblemInstance read_instance(const std::filesystem::path& path);
ProblemInstance instance_from_string(const std::string& text,
                                     const std::string& origin = "<string>");

// Plain n x n row-major matrix file (one line of values, first line "n: ...").
Matrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const Matrix& m);

// Solve report as structured text mirroring SolverReport.
void write_report(const std::filesystem::path& path, const SolverReport& rep,
                  const ProblemInstance& inst, Algorithm algo);
std::string report_to_string(const SolverReport& rep,
                             const ProblemInstance& inst, Algorithm algo);

// Per-iteration history as CSV: k,objective,grad_norm,step_norm,rel_res.
void write_history_csv(const std::filesystem::path& path,
                       const SolverReport& rep);

}  // namespace mvsolve
