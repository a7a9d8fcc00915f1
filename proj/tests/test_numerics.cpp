#include <doctest.h>

#include <complex>
#include <cstring>

#include "ddframe/numerics.hpp"
#include "oracles.hpp"

using namespace ddframe;
using numerics::Matrix;
using numerics::Vector;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("qr of the identity") {
  const auto qr = numerics::qr_factor(Matrix::Identity(4, 4));
  CHECK((qr.O - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((qr.U - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("qr of a column vector gives its norm") {
  Matrix a(2, 1);
  a << 3.0, 4.0;
  const auto qr = numerics::qr_factor(a);
  CHECK(qr.U(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("qr reconstruction and orthogonality") {
  oracles::Rng rng(9001);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = static_cast<int>(rng.integer(3, 12));
    const int cols = static_cast<int>(rng.integer(1, rows));
    Matrix a(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) a(i, j) = rng.uniform(-2.0, 2.0);
    }
    const auto qr = numerics::qr_factor(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    CHECK((qr.O * qr.U - a).cwiseAbs().maxCoeff() < 1e-13 * scale);
    CHECK((qr.O.transpose() * qr.O - Matrix::Identity(rows, rows))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    for (int j = 0; j < cols; ++j) CHECK(qr.U(j, j) >= 0.0);
    for (int i = 1; i < rows; ++i) {
      for (int j = 0; j < std::min(i, cols); ++j) CHECK(qr.U(i, j) == 0.0);
    }
  }
}

TEST_CASE("sym_eig on a diagonal matrix") {
  Matrix a(2, 2);
  a << 3.0, 0.0, 0.0, 1.0;
  const auto eig = numerics::sym_eig(a);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eig of the n=1 uniform-mesh residual block") {
  // Oracle: explicit eigenvectors of [[3/8,-1/4,-1/8],[-1/4,1/2,-1/4],
  // [-1/8,-1/4,3/8]]: (1,-2,1) -> 3/4, (1,0,-1) -> 1/2, (1,1,1) -> 0.
  Matrix a(3, 3);
  a << 0.375, -0.25, -0.125, -0.25, 0.5, -0.25, -0.125, -0.25, 0.375;
  const auto eig = numerics::sym_eig(a);
  CHECK(eig.eigenvalues[0] == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(eig.eigenvalues[2] == doctest::Approx(0.0).epsilon(1e-13));
  Vector v(3);
  v << 1.0, -2.0, 1.0;
  CHECK((a * v - 0.75 * v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sym_eig of a rank-1 outer product") {
  oracles::Rng rng(9002);
  Vector v(5);
  for (int i = 0; i < 5; ++i) v[i] = rng.uniform(-1.0, 1.0);
  const auto eig = numerics::sym_eig(Matrix(v * v.transpose()));
  CHECK(eig.eigenvalues[0] == doctest::Approx(v.squaredNorm()).epsilon(1e-12));
  for (int i = 1; i < 5; ++i) CHECK(std::abs(eig.eigenvalues[i]) < 1e-12);
}

TEST_CASE("sym_eig reconstruction on random symmetric matrices") {
  oracles::Rng rng(9003);
  for (int trial = 0; trial < 15; ++trial) {
    const int m = static_cast<int>(rng.integer(2, 15));
    Matrix a(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j <= i; ++j) {
        a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
      }
    }
    const auto eig = numerics::sym_eig(a);
    const Matrix recon = eig.eigenvectors * eig.eigenvalues.asDiagonal() *
                         eig.eigenvectors.transpose();
    CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    CHECK((eig.eigenvectors.transpose() * eig.eigenvectors - Matrix::Identity(m, m))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    for (int i = 0; i + 1 < m; ++i) CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i + 1]);
  }
}

TEST_CASE("sym_eig rejects asymmetric input") {
  Matrix a(2, 2);
  a << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(numerics::sym_eig(a), std::invalid_argument);
}

TEST_CASE("solve_linear basics") {
  CHECK((numerics::solve_linear(Matrix::Identity(3, 3), Vector::Ones(3)) -
         Vector::Ones(3))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  Matrix a(2, 2);
  a << 2.0, 0.0, 0.0, 4.0;
  Vector b(2);
  b << 2.0, 4.0;
  const Vector x = numerics::solve_linear(a, b);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("solve_linear rejects singular systems") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_WITH_AS(numerics::solve_linear(a, Vector::Ones(2)),
                       "singular system", std::runtime_error);
}

TEST_CASE("kernels are bit-deterministic") {
  oracles::Rng rng(9005);
  Matrix a(9, 9);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
  }
  const auto first = numerics::sym_eig(a);
  const auto second = numerics::sym_eig(a);
  CHECK(std::memcmp(first.eigenvalues.data(), second.eigenvalues.data(),
                    sizeof(double) * 9) == 0);
  CHECK(std::memcmp(first.eigenvectors.data(), second.eigenvectors.data(),
                    sizeof(double) * 81) == 0);

  const std::vector<double> coeffs = {0.3, -1.2, 0.0, 2.0, 1.0};
  const auto r1 = numerics::poly_roots(coeffs);
  const auto r2 = numerics::poly_roots(coeffs);
  CHECK(std::memcmp(r1.data(), r2.data(), sizeof(r1[0]) * r1.size()) == 0);
}

TEST_CASE("poly_roots on simple quadratics") {
  const auto real_pair = numerics::poly_roots({-1.0, 0.0, 1.0});  // z^2 - 1
  REQUIRE(real_pair.size() == 2);
  CHECK(real_pair[0].real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(real_pair[1].real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(real_pair[0].imag() == 0.0);

  const auto conj_pair = numerics::poly_roots({1.0, 0.0, 1.0});  // z^2 + 1
  REQUIRE(conj_pair.size() == 2);
  CHECK(conj_pair[0] == std::conj(conj_pair[1]));
  CHECK(std::abs(conj_pair[0].imag()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("poly_roots polishes to small residuals and conjugate closure") {
  oracles::Rng rng(9004);
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = static_cast<int>(rng.integer(1, 9));
    std::vector<double> coeffs(static_cast<size_t>(deg) + 1);
    for (auto& c : coeffs) c = rng.uniform(-2.0, 2.0);
    if (coeffs.back() == 0.0) coeffs.back() = 1.0;
    double norm = 0.0;
    for (double c : coeffs) norm = std::max(norm, std::abs(c));
    const auto roots = numerics::poly_roots(coeffs);
    REQUIRE(static_cast<int>(roots.size()) == deg);
    for (const auto& z : roots) {
      std::complex<double> value(0.0, 0.0);
      for (size_t i = coeffs.size(); i-- > 0;) value = value * z + coeffs[i];
      const double zmag = std::max(1.0, std::pow(std::abs(z), deg));
      CHECK(std::abs(value) < 1e-10 * norm * zmag);
      // conjugate present
      bool found = false;
      for (const auto& w : roots) {
        if (std::abs(w - std::conj(z)) < 1e-9 * std::max(1.0, std::abs(z))) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_SUITE_END();
