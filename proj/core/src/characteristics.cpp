#include "nordvlas/characteristics.hpp"

#include <Eigen/Dense>

#include "nordvlas/pusher.hpp"

namespace nordvlas {

PhaseParticle integrate_characteristic(PhaseParticle particle, const FieldFunction& field, double t0, double dt,
                                       int steps) {
  for (int n = 0; n < steps; ++n) push_particle(particle, field, t0 + n * dt, dt);
  return particle;
}

double flow_jacobian_determinant(const PhaseParticle& start, const FieldFunction& field, double t0, double dt,
                                 int steps, double eps) {
  auto phase = [](const PhaseParticle& q) {
    Eigen::Matrix<double, 6, 1> y;
    y << q.x.x, q.x.y, q.x.z, q.p.x, q.p.y, q.p.z;
    return y;
  };
  const Eigen::Matrix<double, 6, 1> base = phase(integrate_characteristic(start, field, t0, dt, steps));
  Eigen::Matrix<double, 6, 6> jac;
  for (int axis = 0; axis < 6; ++axis) {
    PhaseParticle moved = start;
    if (axis < 3)
      moved.x[axis] += eps;
    else
      moved.p[axis - 3] += eps;
    jac.col(axis) = (phase(integrate_characteristic(moved, field, t0, dt, steps)) - base) / eps;
  }
  return jac.determinant();
}

}  // namespace nordvlas
