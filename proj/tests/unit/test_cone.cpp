#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nordvlas/cone.hpp"
#include "nordvlas/identities.hpp"
#include "nordvlas/simulation.hpp"

using namespace nordvlas;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseParticle particle(const Vec3& x, const Vec3& p, double f) {
  PhaseParticle q;
  q.x = q.x_birth = x;
  q.p = q.p_birth = p;
  q.f_birth = f;
  q.vol_birth = 1.0;
  return q;
}

}  // namespace

TEST_CASE("cone shells integrate the ball exactly") {
  const double t = 0.83;
  const ConeQuadrature cone(t, {0.1, 0.2, 0.3}, 0.1);
  CHECK(cone.shells().size() == 9);
  double volume = 0.0;
  double inv_r = 0.0;
  double inv_r2 = 0.0;
  for (const ConeShell& s : cone.shells()) {
    double w = 0.0;
    for (double v : s.sphere.weights) w += v;
    CHECK(w == doctest::Approx(4 * kPi));
    volume += s.weight_volume * w;
    inv_r += s.weight_inv_r * w;
    inv_r2 += s.weight_inv_r2 * w;
    CHECK(s.retarded_time == doctest::Approx(t - s.r_mid));
  }
  CHECK(cone.shells().back().r_outer == doctest::Approx(t));
  CHECK(volume == doctest::Approx(4 * kPi * t * t * t / 3).epsilon(1e-13));
  CHECK(inv_r == doctest::Approx(2 * kPi * t * t).epsilon(1e-13));
  CHECK(inv_r2 == doctest::Approx(4 * kPi * t).epsilon(1e-13));

  CHECK(ConeQuadrature(0.0, {}, 0.1).shells().empty());
  CHECK_THROWS_AS(ConeQuadrature(-0.1, {}, 0.1), ConfigError);
  CHECK_THROWS_AS(ConeQuadrature(1.0, {}, 0.0), ConfigError);
}

TEST_CASE("gathered moments of one particle") {
  const GridSpec g{{}, 1.0, 16};
  const Vec3 p{0.3, -0.2, 0.6};
  const Vec3 omega = Vec3{2, -1, 2} / 3.0;
  Ensemble e;
  e.particles.push_back(particle(g.node_position(8, 8, 8), p, 2.0));
  const std::vector<double> phi{0.0};
  const RetardedMoments m = gather_moments(e, phi, g, g.node_position(8, 8, 8), omega);
  const double gamma = lorentz(p);
  const Vec3 v = p / gamma;
  const double d = 1 + dot(omega, v);
  const double w = 2.0 / std::pow(g.dx(), 3);
  CHECK(m.inv_d == doctest::Approx(w / (gamma * d)));
  CHECK(m.inv_d2 == doctest::Approx(w / (gamma * gamma * gamma * d * d)));
  CHECK(m.a_over_d == doctest::Approx(w * dot(omega, v) / (gamma * d)));
  CHECK(norm(m.cross_over_d - w / (gamma * d) * cross(omega, v)) < 1e-12);

  // one cell away the hat weight vanishes
  const RetardedMoments far = gather_moments(e, phi, g, g.node_position(9, 8, 8), omega);
  CHECK(far.inv_d == 0.0);
  // halfway the weight halves
  const RetardedMoments half =
      gather_moments(e, phi, g, g.node_position(8, 8, 8) + Vec3{0.5 * g.dx(), 0, 0}, omega);
  CHECK(half.inv_d == doctest::Approx(0.5 * m.inv_d));
}

TEST_CASE("recorder agrees with direct gathering") {
  const GridSpec g{{}, 1.0, 16};
  Ensemble e;
  for (int i = 0; i < 40; ++i) {
    const double s = 0.05 * i;
    e.particles.push_back(particle({0.3 * std::sin(3 * s), 0.25 * std::cos(2 * s), 0.2 * s - 0.4},
                                   {std::sin(s), 0.5 - s, 0.3 * std::cos(5 * s)}, 1.0 + s));
  }
  const std::vector<double> phi(e.size(), 0.1);
  const double spacing = 0.1;
  ConeMomentRecorder rec(0.45, {0.05, 0.0, -0.05}, g, spacing);
  CHECK_FALSE(rec.complete());
  CHECK_THROWS_AS(rec.moments(0, 0), HistoryError);
  for (std::size_t k = 0; k < 6; ++k) rec.record(k, e, phi);
  CHECK(rec.complete());
  const auto& shells = rec.quadrature().shells();
  for (std::size_t j = 0; j < shells.size(); ++j)
    for (std::size_t q = 0; q < shells[j].sphere.size(); q += 7) {
      const Vec3& omega = shells[j].sphere.directions[q];
      const Vec3 y = rec.vertex() + shells[j].r_mid * omega;
      const RetardedMoments a = rec.moments(j, q);
      const RetardedMoments b = gather_moments(e, phi, g, y, omega);
      CHECK(a.inv_d == doctest::Approx(b.inv_d).epsilon(1e-12));
      CHECK(a.inv_d2 == doctest::Approx(b.inv_d2).epsilon(1e-12));
      CHECK(a.a_over_d == doctest::Approx(b.a_over_d).epsilon(1e-12));
      CHECK(norm(a.cross_over_d - b.cross_over_d) <= 1e-12 * (1 + norm(b.cross_over_d)));
    }
}

TEST_CASE("data surface term against the angular kernel") {
  DataParams d;
  d.A_f = 1.3;
  d.R_p = 0.9;
  const SphereRule rule = SphereRule::product(24);
  for (double t : {0.2, 0.6}) {
    // J = int_0^{R_p} r^2 q(r^2 / R_p^2) / gamma * K(v) dr, K(v) = 2 pi int du / (1 - v u)
    const double J = integrate_adaptive(
                         [&](double r) {
                           const double gamma = std::sqrt(1 + r * r);
                           const double q = std::pow(1 - r * r / (d.R_p * d.R_p), 4);
                           return r * r * q / gamma * angular_kernel(r / gamma).closed_form;
                         },
                         0.0, d.R_p, 1e-12)
                         .value;
    const double qx = std::pow(1 - t * t, 4);
    CHECK(data_surface_term(d, t, {}, rule, 48) == doctest::Approx(-t * d.A_f * J * qx).epsilon(1e-10));
  }
  CHECK(data_surface_term(d, 0.0, {}, rule, 48) == 0.0);
  d.A_f = 0.0;
  CHECK(data_surface_term(d, 0.5, {}, rule, 48) == 0.0);
}

TEST_CASE("representation reduces to the Kirchhoff term in vacuum") {
  RunConfig c;
  c.grid = {{}, 2.0, 48};
  c.t_end = 0.5;
  c.data.A_f = 0.0;
  c.data.A_phi = 0.05;
  c.data.A_pi = 0.05;
  c.history_stride = 1;
  c.sampling = {4, 4};
  SimulationOptions o;
  o.representation_probes = {{0.5, {0, 0, 0}}};
  const SimulationResult r = run_simulation(c, o);
  REQUIRE(r.representation.size() == 1);
  const RepresentationResult& rep = r.representation[0];
  for (double z : rep.Z) CHECK(std::abs(z) <= 1e-10);
  CHECK(rep.data_surface == 0.0);
  CHECK(rep.value_repr == doctest::Approx(rep.dtphi_hom));
  CHECK(rep.rel_error < 0.05);
}

TEST_CASE("null-cone check needs history") {
  const FieldHistory empty;
  CHECK(null_cone_check(0.0, {}, empty).rel_residual == 0.0);
  CHECK_THROWS_AS(null_cone_check(0.5, {}, empty), HistoryError);
}

TEST_CASE("null-cone identity in vacuum") {
  RunConfig c;
  c.grid = {{}, 2.0, 32};
  c.t_end = 0.5;
  c.data.A_f = 0.0;
  c.data.A_phi = 0.05;
  c.data.A_pi = 0.05;
  c.history_stride = 1;
  c.sampling = {4, 4};
  SimulationOptions o;
  o.null_cone_probes = {{0.5, {0, 0, 0}}};
  const SimulationResult r = run_simulation(c, o);
  REQUIRE(r.null_cone.size() == 1);
  CHECK(r.null_cone[0].rhs_volume > 0.0);
  CHECK(r.null_cone[0].rel_residual < 0.05);
}

TEST_CASE("probes past the last history slice are rejected up front") {
  RunConfig c;
  c.grid = {{}, 2.0, 16};
  c.t_end = 0.5;
  c.data.A_f = 0.0;
  c.history_stride = 3;
  SimulationOptions o;
  // 9 steps: stride 3 ends on step 9, stride 4 stops at step 8
  o.representation_probes = {{0.5, {0, 0, 0}}};
  CHECK_NOTHROW(run_simulation(c, o));
  c.history_stride = 4;
  CHECK_THROWS_WITH_AS(run_simulation(c, o), doctest::Contains("past the last history slice"), ConfigError);
}
