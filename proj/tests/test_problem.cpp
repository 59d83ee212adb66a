#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "doctest.h"
#include "mvsolve/experiments.hpp"
#include "mvsolve/problem.hpp"
#include "oracles.hpp"

using namespace mvsolve;

namespace {

double direct_objective(const ProblemInstance& inst, const Matrix& x) {
  return (x * inst.J() - inst.J() * x.transpose() - inst.M()).squaredNorm();
}

ProblemInstance zero_momentum_instance(Index n, std::uint64_t seed) {
  return ProblemInstance(random_spd(n, seed, 10.0), SkewMatrix::zero(n));
}

}  // namespace

TEST_CASE("objective_full: zero cases and the direct-norm oracle") {
  const ProblemInstance rest = zero_momentum_instance(4, 1);
  // identity commutes with J; only trace-accumulation noise remains
  CHECK(std::abs(objective_full(rest, Matrix::Identity(4, 4))) <=
        1e-12 * rest.J().squaredNorm());

  const ProblemInstance inst = make_planted(4, 2);
  const Matrix& xs = inst.known_solution()->matrix();
  CHECK(std::abs(objective_full(inst, xs)) <
        1e-12 * inst.M().squaredNorm());

  GaussianStream g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = g.matrix(4, 4);
    const double f = objective_full(inst, x);
    const double oracle = direct_objective(inst, x);
    CHECK(std::abs(f - oracle) <= 1e-10 * (1.0 + std::abs(f)));
  }
}

TEST_CASE("objective_restricted: agrees with the full objective on O(n)") {
  const ProblemInstance inst = make_planted(5, 4);
  for (int s = 0; s < 20; ++s) {
    const Matrix x = random_rotation(5, 200 + s).matrix();
    const double f = objective_full(inst, x);
    const double ft = objective_restricted(inst, x);
    CHECK(std::abs(f - ft) <= 1e-9 * (1.0 + std::abs(f)));
  }
  const ProblemInstance rest = zero_momentum_instance(5, 5);
  CHECK(objective_restricted(rest, Matrix::Identity(5, 5)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gradient_full: finite differences, residual identity, zeros") {
  const ProblemInstance inst = make_planted(3, 6);
  GaussianStream g(7);
  const Matrix x = g.matrix(3, 3);

  const Matrix analytic = gradient_full(inst, x);
  const Matrix fd = oracles::finite_difference_gradient(
      [&](const Matrix& y) { return objective_full(inst, y); }, x);
  const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
  CHECK((analytic - fd).cwiseAbs().maxCoeff() < 1e-5 * scale);

  // grad F = 4 R(X) J
  const Matrix r = x * inst.J() - inst.J() * x.transpose() - inst.M();
  CHECK((analytic - 4.0 * r * inst.J()).norm() <=
        1e-12 * (1.0 + analytic.norm()));

  const Matrix& xs = inst.known_solution()->matrix();
  CHECK(gradient_full(inst, xs).norm() < 1e-10 * inst.J().norm());

  const ProblemInstance rest = zero_momentum_instance(3, 8);
  CHECK(gradient_full(rest, Matrix::Identity(3, 3)).norm() <
        1e-12 * rest.J().norm());
}

TEST_CASE("gradient_restricted: finite differences of the restricted form") {
  const ProblemInstance inst = make_planted(4, 9);
  GaussianStream g(10);
  const Matrix x = g.matrix(4, 4);
  const Matrix analytic = gradient_restricted(inst, x);
  const Matrix fd = oracles::finite_difference_gradient(
      [&](const Matrix& y) { return objective_restricted(inst, y); }, x);
  const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
  CHECK((analytic - fd).cwiseAbs().maxCoeff() < 1e-5 * scale);

  // J = I, M = 0, X = I: the derivative reduces to -4I
  const ProblemInstance idc(SpdMatrix(Matrix::Identity(3, 3)),
                            SkewMatrix::zero(3));
  CHECK((gradient_restricted(idc, Matrix::Identity(3, 3)) +
         4.0 * Matrix::Identity(3, 3))
            .norm() < 1e-14);
}

TEST_CASE("riemannian_gradient: skewness, zero at solution, kind agreement") {
  const ProblemInstance inst = make_planted(5, 11);
  const Matrix& xs = inst.known_solution()->matrix();
  CHECK(riemannian_gradient(inst, xs, GradientKind::Full).matrix().norm() <
        1e-8 * inst.J().norm());

  for (int s = 0; s < 10; ++s) {
    const Matrix x = random_rotation(5, 300 + s).matrix();
    const Matrix w = riemannian_gradient(inst, x, GradientKind::Full).matrix();
    CHECK((w + w.transpose()).norm() == 0.0);  // exact by construction
    const Matrix wr =
        riemannian_gradient(inst, x, GradientKind::Restricted).matrix();
    const double gn = gradient_full(inst, x).norm();
    CHECK((w - wr).norm() <= 1e-10 * (1.0 + gn));
  }
}

TEST_CASE("residual: solution, perturbation bound, degenerate order one") {
  const ProblemInstance inst = make_planted(4, 12);
  const Matrix& xs = inst.known_solution()->matrix();
  CHECK(residual(inst, xs).rel_res < 1e-12);

  // ||R(X* + D)||_F <= ||C||_2 ||D||_F turns into rel_res <= eps
  GaussianStream g(13);
  for (double eps : {1e-2, 1e-6, 1e-10}) {
    Matrix d = g.matrix(4, 4);
    d *= eps * 2.0 / d.norm();
    const ResidualReport rep = residual(inst, xs + d);
    CHECK(rep.rel_res <= eps * (1.0 + 1e-6));
  }

  const ProblemInstance one(SpdMatrix(Matrix::Constant(1, 1, 3.0)),
                            SkewMatrix::zero(1));
  CHECK(one.c_norm() == 0.0);
  CHECK(residual(one, Matrix::Identity(1, 1)).rel_res == 0.0);
  // xj - jx^T vanishes identically at order one, so rho degenerates to 0
  // for every candidate, never to infinity
  CHECK(residual(one, Matrix::Constant(1, 1, 2.0)).frob == 0.0);
  CHECK(residual(one, Matrix::Constant(1, 1, 2.0)).rel_res == 0.0);
}

TEST_CASE("residual: c_norm equals the eigenvalue closed form") {
  // the operator D -> DJ - JD^T decouples in J's eigenbasis into 2x2 blocks
  // with top singular value sqrt(2(lambda_i^2 + lambda_j^2))
  for (Index n : {2, 5, 12}) {
    const SpdMatrix j = random_spd(n, 500 + n, 30.0);
    const ProblemInstance inst(j, SkewMatrix::zero(n));
    Eigen::SelfAdjointEigenSolver<Matrix> es(j.matrix());
    const auto& ev = es.eigenvalues();  // ascending
    const double expected =
        std::sqrt(2.0 * (ev(n - 1) * ev(n - 1) + ev(n - 2) * ev(n - 2)));
    CHECK(inst.c_norm() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("hamiltonian_diagnose: hand cases and classification") {
  const ProblemInstance one(SpdMatrix(Matrix::Identity(1, 1)),
                            SkewMatrix::zero(1));
  const HamiltonianDiagnosis d1 = hamiltonian_diagnose(one);
  Matrix h1(2, 2);
  h1 << 0, 1, 1, 0;
  CHECK((d1.H - h1).norm() == 0.0);
  std::vector<double> re;
  for (Index i = 0; i < 2; ++i) re.push_back(d1.eigenvalues(i).real());
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0));
  CHECK(re[1] == doctest::Approx(1.0));
  CHECK(d1.classification == SpectrumClass::NoPureImaginary);

  const ProblemInstance id2(SpdMatrix(Matrix::Identity(2, 2)),
                            SkewMatrix::zero(2));
  const HamiltonianDiagnosis d2 = hamiltonian_diagnose(id2);
  for (Index i = 0; i < 4; ++i)
    CHECK(std::abs(std::abs(d2.eigenvalues(i).real()) - 1.0) < 1e-12);
  CHECK(d2.classification == SpectrumClass::NoPureImaginary);

  // J = I, strong momentum: lambda = +- i (m/2 +- sqrt(m^2/4 - 1))
  Matrix mm = Matrix::Zero(2, 2);
  mm(0, 1) = 10.0;
  mm(1, 0) = -10.0;
  const ProblemInstance strong(SpdMatrix(Matrix::Identity(2, 2)),
                               SkewMatrix(mm));
  CHECK(hamiltonian_diagnose(strong).classification ==
        SpectrumClass::AllPureImaginary);
}

TEST_CASE("hamiltonian_diagnose: spectrum is symmetric about zero") {
  const ProblemInstance inst = make_planted(4, 14);
  const HamiltonianDiagnosis d = hamiltonian_diagnose(inst);
  std::vector<std::complex<double>> ev(d.eigenvalues.data(),
                                       d.eigenvalues.data() + 8);
  const double scale = spectral_norm(d.H);
  for (const auto& lambda : ev) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mu : ev) best = std::min(best, std::abs(mu + lambda));
    CHECK(best < 1e-8 * scale);
  }
}

TEST_CASE("direct_method_condition: sign cases") {
  CHECK(direct_method_condition(zero_momentum_instance(3, 15)));
  Matrix mm = Matrix::Zero(2, 2);
  mm(0, 1) = 10.0;
  mm(1, 0) = -10.0;
  const ProblemInstance strong(SpdMatrix(Matrix::Identity(2, 2)),
                               SkewMatrix(mm));
  CHECK_FALSE(direct_method_condition(strong));
}

TEST_CASE("solve_so2_closed_form: zero momentum gives I and the half turn") {
  Matrix j(2, 2);
  j << 2.0, 0.3, 0.3, 1.0;
  const ProblemInstance inst(SpdMatrix{j}, SkewMatrix::zero(2));
  const auto sols = solve_so2_closed_form(inst);
  REQUIRE(sols.size() == 2);
  bool has_identity = false, has_half_turn = false;
  for (const auto& s : sols) {
    if ((s.matrix() - Matrix::Identity(2, 2)).norm() < 1e-14)
      has_identity = true;
    if ((s.matrix() + Matrix::Identity(2, 2)).norm() < 1e-14)
      has_half_turn = true;
    CHECK(residual(inst, s.matrix()).rel_res < 1e-12);
  }
  CHECK(has_identity);
  CHECK(has_half_turn);
}

TEST_CASE("solve_so2_closed_form: recovers a planted rotation") {
  Matrix j(2, 2);
  j << 2.0, 0.0, 0.0, 2.0;
  const double theta = 0.3;
  Matrix xs(2, 2);
  xs << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const SkewMatrix m(xs * j - j * xs.transpose());
  const ProblemInstance inst(SpdMatrix{j}, m);
  const auto sols = solve_so2_closed_form(inst);
  REQUIRE(sols.size() == 2);
  bool found = false;
  for (const auto& s : sols) {
    CHECK(residual(inst, s.matrix()).rel_res < 1e-12);
    CHECK(s.matrix()(1, 0) == doctest::Approx(std::sin(theta)).epsilon(1e-12));
    if ((s.matrix() - xs).norm() < 1e-12) found = true;
  }
  CHECK(found);
}

TEST_CASE("solve_so2_closed_form: infeasible momentum yields no solution") {
  Matrix j = Matrix::Identity(2, 2);
  Matrix mm = Matrix::Zero(2, 2);
  mm(0, 1) = 3.0;  // |m1| = 3 > j1 + j3 = 2
  mm(1, 0) = -3.0;
  const ProblemInstance inst(SpdMatrix{j}, SkewMatrix{mm});
  CHECK(solve_so2_closed_form(inst).empty());
  CHECK(oracles::so2_grid_min_objective(j, mm) > 0.5);
}

TEST_CASE("convexity_probe: trivial and random segments") {
  const ProblemInstance inst = make_planted(6, 16);
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9, 1.0};
  GaussianStream g(17);
  const Matrix x = g.matrix(6, 6);
  CHECK(convexity_probe(inst, x, x, grid));
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x1 = g.matrix(6, 6);
    const Matrix x2 = g.matrix(6, 6);
    CHECK(convexity_probe(inst, x1, x2, grid));
  }
}

TEST_CASE("ProblemInstance: invariants and validation") {
  const ProblemInstance inst = make_planted(4, 18);
  CHECK(inst.alpha() ==
        doctest::Approx(2.0 * (inst.J() * inst.J()).trace() -
                        (inst.M() * inst.M()).trace())
            .epsilon(1e-14));
  CHECK((inst.JM() - inst.J() * inst.M()).norm() == 0.0);

  // a wrong known solution must be rejected
  const SpdMatrix j = random_spd(3, 19, 5.0);
  const SkewMatrix m = random_skew(3, 20);
  CHECK_THROWS_AS(
      ProblemInstance(j, m, RotationMatrix::identity(3)),
      ValidationError);
}
