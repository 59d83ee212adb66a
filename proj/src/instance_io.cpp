#include "mvsolve/instance_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mvsolve {

namespace {

std::string matrix_to_line(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 25);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (!out.empty()) out += ' ';
      out += format_double(m(i, j));
    }
  return out;
}

Matrix line_to_matrix(const std::string& line, Index n,
                      const std::string& origin, const std::string& key) {
  Matrix m(n, n);
  const char* s = line.c_str();
  char* end = nullptr;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double v = std::strtod(s, &end);
      if (end == s)
        throw ParseError(origin + ": too few values for " + key);
      m(i, j) = v;
      s = end;
    }
  while (*s == ' ' || *s == '\t' || *s == '\r') ++s;
  if (*s != '\0')
    throw ParseError(origin + ": trailing garbage after " + key);
  return m;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);  // binary: no CRLF surprises
  if (!out) throw ParseError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw ParseError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string instance_to_string(const ProblemInstance& inst) {
  std::string out;
  out += "format_version: 1\n";
  out += "label: " + inst.label() + "\n";
  out += "n: " + std::to_string(inst.order()) + "\n";
  out += "J: " + matrix_to_line(inst.J()) + "\n";
  out += "M: " + matrix_to_line(inst.M()) + "\n";
  if (inst.known_solution())
    out += "X_true: " + matrix_to_line(inst.known_solution()->matrix()) + "\n";
  return out;
}

void write_instance(const std::filesystem::path& path,
                    const ProblemInstance& inst) {
  write_text_file(path, instance_to_string(inst));
}

ProblemInstance instance_from_string(const std::string& text,
                                     const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(origin + ": expected 'key: value', got '" + line + "'");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.erase(0, 1);
    if (kv.count(key)) throw ParseError(origin + ": duplicate key " + key);
    kv[key] = value;
  }
  for (const char* required : {"format_version", "n", "J", "M"})
    if (!kv.count(required))
      throw ParseError(origin + ": missing key " + required);
  if (kv["format_version"] != "1")
    throw ParseError(origin + ": unsupported format_version " +
                     kv["format_version"]);
  Index n = 0;
  try {
    n = std::stol(kv["n"]);
  } catch (const std::exception&) {
    throw ParseError(origin + ": bad n");
  }
  if (n < 1) throw ParseError(origin + ": n must be >= 1");

  try {
    SpdMatrix j(line_to_matrix(kv["J"], n, origin, "J"));
    const Matrix m_raw = line_to_matrix(kv["M"], n, origin, "M");
    // the SkewMatrix constructor would silently symmetrize, which breaks the
    // lossless round-trip contract for foreign files; reject instead
    if ((m_raw + m_raw.transpose()).norm() >
        1e-12 * std::max(m_raw.norm(), 1e-300))
      throw ParseError(origin + ": M is not skew-symmetric");
    SkewMatrix m(m_raw);
    std::optional<RotationMatrix> x_true;
    if (kv.count("X_true"))
      x_true = RotationMatrix(line_to_matrix(kv["X_true"], n, origin, "X_true"));
    return ProblemInstance(j, m, std::move(x_true),
                           kv.count("label") ? kv["label"] : "");
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  return instance_from_string(read_text_file(path), path.string());
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  Index n = 0;
  std::string values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("n:", 0) == 0) {
      n = std::stol(line.substr(2));
    } else if (line.rfind("X:", 0) == 0) {
      values = line.substr(2);
    }
  }
  if (n < 1 || values.empty())
    throw ParseError(path.string() + ": expected 'n:' and 'X:' lines");
  return line_to_matrix(values, n, path.string(), "X");
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("write_matrix_file: matrix must be square");
  std::string out = "n: " + std::to_string(m.rows()) + "\n";
  out += "X: " + matrix_to_line(m) + "\n";
  write_text_file(path, out);
}

std::string report_to_string(const SolverReport& rep,
                             const ProblemInstance& inst, Algorithm algo) {
  const Matrix& x = rep.solution.matrix();
  const ResidualReport res = residual(inst, x);
  const double gnorm =
      riemannian_gradient(inst, x, GradientKind::Restricted).matrix().norm();
  std::string out;
  out += "algorithm: " + std::string(to_string(algo)) + "\n";
  out += "label: " + inst.label() + "\n";
  out += "n: " + std::to_string(inst.order()) + "\n";
  out += "converged: " + std::string(rep.converged ? "true" : "false") + "\n";
  out += "stop_reason: " + std::string(to_string(rep.stop_reason)) + "\n";
  out += "iterations: " + std::to_string(rep.iterations) + "\n";
  out += "rel_res: " + format_double(res.rel_res) + "\n";
  out += "objective: " + format_double(objective_restricted(inst, x)) + "\n";
  out += "grad_norm: " + format_double(gnorm) + "\n";
  out += "orthogonality_defect: " +
         format_double(rep.solution.orthogonality_defect()) + "\n";
  out += "determinant: " + format_double(rep.solution.determinant()) + "\n";
  out += "wall_time_s: " + format_double(rep.wall_time) + "\n";
  if (!rep.message.empty()) out += "message: " + rep.message + "\n";
  out += "solution: " + matrix_to_line(x) + "\n";
  return out;
}

void write_report(const std::filesystem::path& path, const SolverReport& rep,
                  const ProblemInstance& inst, Algorithm algo) {
  write_text_file(path, report_to_string(rep, inst, algo));
}

void write_history_csv(const std::filesystem::path& path,
                       const SolverReport& rep) {
  std::string out = "k,objective,grad_norm,step_norm,rel_res\n";
  for (std::size_t i = 0; i < rep.history.size(); ++i) {
    const IterationRecord& r = rep.history[i];
    out += std::to_string(i + 1) + ',' + format_double(r.objective) + ',' +
           format_double(r.grad_norm) + ',' + format_double(r.step_norm) +
           ',' + format_double(r.rel_res) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace mvsolve
