#include <doctest.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "nordvlas/characteristics.hpp"
#include "nordvlas/pusher.hpp"

using namespace nordvlas;

namespace {

// phi(t, x) = a . x + c t + b sin(k x_1 - w t)
struct AnalyticField {
  Vec3 a{0.3, -0.2, 0.1};
  double c = -0.15;
  double b = 0.2;
  double k = 1.7;
  double w = 0.9;
  FieldSample operator()(double t, const Vec3& x) const {
    FieldSample s;
    const double arg = k * x.x - w * t;
    s.phi = dot(a, x) + c * t + b * std::sin(arg);
    s.dphi_dt = c - b * w * std::cos(arg);
    s.grad = a + Vec3{b * k * std::cos(arg), 0, 0};
    return s;
  }
};

struct LinearField {
  Vec3 g{0.4, -0.1, 0.25};
  FieldSample operator()(double, const Vec3& x) const { return {dot(g, x), 0.0, g}; }
};

using State = std::array<double, 6>;

template <class Field>
State reference(const Field& field, const Vec3& x, const Vec3& p, double t_end) {
  namespace ode = boost::numeric::odeint;
  State y{x.x, x.y, x.z, p.x, p.y, p.z};
  auto system = [&](const State& s, State& dy, double t) {
    const PhaseDerivative d = rhs({s[3], s[4], s[5]}, field(t, {s[0], s[1], s[2]}));
    dy = {d.dx.x, d.dx.y, d.dx.z, d.dp.x, d.dp.y, d.dp.z};
  };
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<State>()), system, y, 0.0,
                          t_end, 1e-4);
  return y;
}

PhaseParticle particle(const Vec3& x, const Vec3& p) {
  PhaseParticle q;
  q.x = q.x_birth = x;
  q.p = q.p_birth = p;
  q.f_birth = 1.0;
  q.vol_birth = 1.0;
  return q;
}

}  // namespace

TEST_CASE("right-hand side") {
  const Vec3 p{0.3, -0.4, 1.2};
  const PhaseDerivative free = rhs(p, {});
  CHECK(norm(free.dx - velocity(p)) < 1e-16);
  CHECK(norm(free.dp) == 0.0);

  const FieldSample f{0.1, 0.5, {0.2, -0.3, 0.4}};
  const PhaseDerivative rest = rhs({}, f);
  CHECK(norm(rest.dp + f.grad) < 1e-16);

  const double q = 1.7;
  const double g = 0.6;
  const PhaseDerivative aligned = rhs({q, 0, 0}, {0.0, 0.0, {g, 0, 0}});
  CHECK(aligned.dp.x == doctest::Approx(-g * std::sqrt(1 + q * q)));
}

TEST_CASE("free streaming is exact") {
  Ensemble e;
  e.particles.push_back(particle({0.1, 0.2, -0.3}, {0.5, -1.5, 2.0}));
  const LinearField zero{{0, 0, 0}};
  push_step(e, zero, 0.01);
  const Vec3 expected = Vec3{0.1, 0.2, -0.3} + 0.01 * velocity({0.5, -1.5, 2.0});
  CHECK(norm(e.particles[0].x - expected) < 1e-16);
  CHECK(e.particles[0].p == Vec3{0.5, -1.5, 2.0});
  CHECK(e.time == doctest::Approx(0.01));
  CHECK_THROWS_AS(push_step(e, zero, 0.0), ConfigError);
}

TEST_CASE("momentum magnitude is constant in vacuum") {
  Ensemble e;
  for (int i = 0; i < 5; ++i) e.particles.push_back(particle({0.1 * i, 0, 0}, {0.2 * i, 0.1, -0.3}));
  const LinearField zero{{0, 0, 0}};
  for (int n = 0; n < 100; ++n) push_step(e, zero, 0.01);
  for (int i = 0; i < 5; ++i) CHECK(e.particles[static_cast<std::size_t>(i)].p == Vec3{0.2 * i, 0.1, -0.3});
}

TEST_CASE("RK4 tracks an adaptive reference in a linear field") {
  const LinearField field;
  const Vec3 x0{0.2, -0.1, 0.3};
  const Vec3 p0{0.7, 0.4, -0.9};
  const State ref = reference(field, x0, p0, 1.0);
  const PhaseParticle q = integrate_characteristic(particle(x0, p0), field, 0.0, 1e-3, 1000);
  const double scale = std::sqrt(ref[0] * ref[0] + ref[1] * ref[1] + ref[2] * ref[2] + ref[3] * ref[3] +
                                 ref[4] * ref[4] + ref[5] * ref[5]);
  double err = 0.0;
  for (int i = 0; i < 3; ++i) {
    err = std::max(err, std::abs(q.x[i] - ref[static_cast<std::size_t>(i)]));
    err = std::max(err, std::abs(q.p[i] - ref[static_cast<std::size_t>(i + 3)]));
  }
  CHECK(err / scale <= 1e-8);
}

TEST_CASE("RK4 tracks an adaptive reference in a time-dependent field") {
  const AnalyticField field;
  const Vec3 x0{-0.2, 0.3, 0.1};
  const Vec3 p0{1.1, -0.3, 0.5};
  const State ref = reference(field, x0, p0, 1.0);
  const PhaseParticle q = integrate_characteristic(particle(x0, p0), field, 0.0, 1e-3, 1000);
  for (int i = 0; i < 3; ++i) {
    CHECK(q.x[i] == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-8));
    CHECK(q.p[i] == doctest::Approx(ref[static_cast<std::size_t>(i + 3)]).epsilon(1e-8));
  }
}

TEST_CASE("along-characteristic energy identity") {
  const AnalyticField field;
  PhaseParticle q = particle({0.1, 0.0, -0.2}, {0.6, 0.2, -0.4});
  q.phi_birth = field(0.0, q.x).phi;
  const PhaseParticle end = integrate_characteristic(q, field, 0.0, 1e-2, 100);
  CHECK(char_invariant_residual(end, field(1.0, end.x).phi) < 1e-9);
}

TEST_CASE("flow Jacobian matches the volume law") {
  const AnalyticField field;
  PhaseParticle q = particle({0.1, 0.2, -0.1}, {0.5, -0.3, 0.8});
  const PhaseParticle end = integrate_characteristic(q, field, 0.0, 1e-3, 1000);
  const double det = flow_jacobian_determinant(q, field, 0.0, 1e-3, 1000);
  const double law = std::exp(-3.0 * (field(1.0, end.x).phi - field(0.0, q.x).phi));
  CHECK(det == doctest::Approx(law).epsilon(1e-3));
}

TEST_CASE("lattice sampler drives the pusher") {
  const GridSpec g{{}, 1.0, 16};
  ScalarFieldState s(g);
  const int n = g.nodes_per_axis();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s.phi(i, j, k) = 0.3 * g.node_position(i, j, k).x;
  const LatticeSampler sampler(s);
  Ensemble e;
  e.particles.push_back(particle({0, 0, 0}, {0, 0, 0}));
  push_step(e, sampler, 0.01);
  CHECK(e.particles[0].p.x < 0.0);
  e.particles[0].x = {0.95, 0, 0};
  CHECK_THROWS_AS(push_step(e, sampler, 0.01), DomainError);
}
