#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nordvlas/errors.hpp"
#include "nordvlas/identities.hpp"
#include "nordvlas/quadrature.hpp"

using namespace nordvlas;

namespace {

constexpr double kPi = std::numbers::pi;
const Vec3 e3{0, 0, 1};

Vec3 rotate(const Vec3& v, double angle) {
  // about (1, 1, 1) / sqrt(3)
  const Vec3 k = Vec3{1, 1, 1} / std::sqrt(3.0);
  return std::cos(angle) * v + std::sin(angle) * cross(k, v) + (1 - std::cos(angle)) * dot(k, v) * k;
}

}  // namespace

TEST_CASE("kernel identities") {
  const Vec3 omega = Vec3{2, -1, 2} / 3.0;
  CHECK(kernel_identity_1(omega, {}) == 0.0);
  CHECK(kernel_identity_2(omega, {}) == 0.0);
  CHECK(std::abs(kernel_identity_1(omega, 3.0 * omega)) < 1e-15);
  CHECK(std::abs(kernel_identity_2(omega, -1e6 * omega)) < 1e-12);
  CHECK_THROWS_AS(kernel_identity_1({1, 1, 0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(kernel_identity_2({0, 0, 0}, {}), std::invalid_argument);
}

TEST_CASE("gradient decomposition") {
  const GradDecomposition d = grad_decomposition(e3, {1, 0, 2});
  CHECK(d.parallel == Vec3{0, 0, 2});
  CHECK(d.transverse == Vec3{1, 0, 0});
  CHECK(d.residual == Vec3{0, 0, 0});
  const GradDecomposition par = grad_decomposition(e3, {0, 0, -4});
  CHECK(norm(par.transverse) == 0.0);
  CHECK_THROWS_AS(grad_decomposition({2, 0, 0}, {}), std::invalid_argument);
}

TEST_CASE("S phi decomposition") {
  const Vec3 omega = Vec3{0.6, 0.0, 0.8};
  const SphiResiduals zero_p = sphi_decomposition(1.3, {0.2, -0.5, 0.1}, omega, {});
  CHECK(std::abs(zero_p.transport) < 1e-15);
  const SphiResiduals zero_g = sphi_decomposition(1.3, {}, omega, {0.4, 0.2, -0.9});
  CHECK(std::abs(zero_g.transport) < 1e-15);
  CHECK(zero_g.flux == 0.0);
}

TEST_CASE("Z decomposition") {
  const Vec3 omega = Vec3{0.0, 0.6, -0.8};
  const ZResiduals none = z_decomposition_residual(omega, {1, 2, 3}, 0.5, {1, 0, 0}, 0.0);
  CHECK(none.first == 0.0);
  CHECK(none.second == 0.0);
  const ZResiduals rest = z_decomposition_residual(omega, {}, 0.0, {}, 1.0);
  CHECK(rest.first == 0.0);
  CHECK(rest.second == 0.0);
  const ZResiduals gen = z_decomposition_residual(omega, {3.1, -7.2, 0.4}, -0.7, {0.3, 2.2, -1.1}, 0.9);
  CHECK(std::abs(gen.first) <= 1e-11 * gen.first_scale);
  CHECK(std::abs(gen.second) <= 1e-11 * gen.second_scale);
}

TEST_CASE("identity sweeps") {
  const auto sweeps = run_identity_sweeps(1000, 20261016);
  CHECK(sweeps.size() == 7);
  for (const auto& s : sweeps) {
    INFO(s.name);
    CHECK(s.trials == 1000);
    CHECK(s.max_rel_residual <= 1e-11);
  }
}

TEST_CASE("B_ab closed forms") {
  const Vec3 omega = Vec3{1, 2, 2} / 3.0;
  CHECK(b_ab(2.0, 0, 0, omega) == doctest::Approx(32 * kPi / 3).epsilon(1e-8));

  // a = 1, b = 0, R = 1: 4 pi int_0^1 r asinh r dr
  const double closed = 4 * kPi * (0.75 * std::log(1 + std::sqrt(2.0)) - std::sqrt(2.0) / 4);
  const QuadratureRule gl = gauss_legendre(40, 0.0, 1.0);
  double oracle = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) oracle += gl.weights[i] * gl.nodes[i] * std::asinh(gl.nodes[i]);
  oracle *= 4 * kPi;
  CHECK(closed == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(closed == doctest::Approx(3.86).epsilon(1e-3));
  CHECK(b_ab(1.0, 1, 0, omega) == doctest::Approx(closed).epsilon(1e-8));

  for (double R : {1.5, 10.0, 300.0}) {
    INFO(R);
    const double half = 2 * kPi * (R * std::sqrt(1 + R * R) - std::asinh(R));
    CHECK(b_ab(R, 0, 0.5, omega) == doctest::Approx(half).epsilon(1e-8));
    // the angular mean of (gamma + w.p)^{-2} is exactly 1
    CHECK(b_ab(R, 2, 0, omega) == doctest::Approx(4 * kPi * R * R * R / 3).epsilon(1e-8));
  }
  CHECK_THROWS(b_ab(0.0, 0, 0, omega));
}

TEST_CASE("B_ab symmetry and monotonicity") {
  const Vec3 omega = Vec3{1, 2, 2} / 3.0;
  for (double angle : {0.3, 1.9}) {
    const Vec3 w = rotate(omega, angle);
    CHECK(b_ab(7.0, 1, 0.5, w) == doctest::Approx(b_ab(7.0, 1, 0.5, omega)).epsilon(1e-8));
  }
  double last = 0.0;
  for (double R : {1.5, 3.0, 10.0, 100.0}) {
    const double v = b_ab(R, 1, 0.25, omega);
    CHECK(v > last);
    last = v;
  }
  CHECK(b_ab(10.0, 1, 0.5, omega) < b_ab(10.0, 1, 0.25, omega));
  CHECK(b_ab(10.0, 1, 0.25, omega) < b_ab(10.0, 1, 0.0, omega));
  // not monotone in a: B_10 < B_00 = B_20
  CHECK(b_ab(10.0, 1, 0, omega) < b_ab(10.0, 0, 0, omega));
  CHECK(b_ab(10.0, 2, 0, omega) == doctest::Approx(b_ab(10.0, 0, 0, omega)).epsilon(1e-8));
  CHECK_THROWS_AS(b_ab(2.0, 0, 0, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("B_ab ladders") {
  const std::array<double, 4> radii{10, 100, 1000, 10000};
  const std::array<std::array<double, 2>, 5> pairs{{{1, 0}, {1, 0.5}, {0.5, 0}, {2, 0.5}, {2, 0}}};
  for (const auto& ab : pairs) {
    INFO(ab[0], " ", ab[1]);
    const BabLadder l = b_ab_bound_check(ab[0], ab[1], radii);
    CHECK(l.ratios.size() == 4);
    CHECK(l.bounded);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(l.ratios[i] == doctest::Approx(l.values[i] / bab_envelope(ab[0], ab[1], radii[i])));
  }
  CHECK(bab_regime(1, 0) == BabRegime::log_a1);
  CHECK(bab_regime(0.5, 0) == BabRegime::a_below_1);
  CHECK(bab_regime(2, 0.5) == BabRegime::a_above_1);
  CHECK(bab_envelope(1, 0, 10) == doctest::Approx(100 * std::log(10.0)));
  CHECK(bab_envelope(0.5, 0, 100) == doctest::Approx(std::pow(100.0, 2.5)));
  CHECK(bab_envelope(2, 0.5, 10) == doctest::Approx(100.0));
  CHECK_THROWS_WITH_AS(bab_regime(1, 1), doctest::Contains("lemma inapplicable"), ConfigError);
  CHECK_THROWS_WITH_AS(bab_regime(0.5, 1.25), doctest::Contains("lemma inapplicable"), ConfigError);
  CHECK_THROWS_WITH_AS(bab_regime(2, 1.5), doctest::Contains("lemma inapplicable"), ConfigError);
}

TEST_CASE("angular kernel") {
  const AngularKernel zero = angular_kernel(0.0);
  CHECK(zero.closed_form == doctest::Approx(4 * kPi));
  CHECK(zero.quadrature == doctest::Approx(4 * kPi));
  const AngularKernel half = angular_kernel(0.5);
  CHECK(half.closed_form == doctest::Approx(4 * kPi * std::log(3.0)));
  CHECK(half.closed_form == doctest::Approx(13.81).epsilon(1e-3));
  for (int i = 0; i <= 10; ++i) {
    const double v = i == 10 ? 0.99 : 0.1 * i;
    const AngularKernel k = angular_kernel(v);
    CHECK(std::abs(k.residual) <= 1e-10 * k.closed_form);
    CHECK(k.bound_holds);
  }
  CHECK(angular_kernel(0.999).bound_holds);
  CHECK_THROWS_AS(angular_kernel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(angular_kernel(-0.1), std::invalid_argument);
}
