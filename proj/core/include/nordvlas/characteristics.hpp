#pragma once

#include <functional>

#include "nordvlas/field_solver.hpp"
#include "nordvlas/state.hpp"

namespace nordvlas {

/// Field given as a function of (t, x); used for analytic test fields.
using FieldFunction = std::function<FieldSample(double, const Vec3&)>;

/// RK4 trajectory of one particle over `steps` steps of size dt from t0.
PhaseParticle integrate_characteristic(PhaseParticle particle, const FieldFunction& field, double t0, double dt,
                                       int steps);

/// det d(X, P)(t0 + steps dt) / d(X, P)(t0), by forward differences over six
/// companion trajectories displaced by eps along each phase-space axis.
double flow_jacobian_determinant(const PhaseParticle& start, const FieldFunction& field, double t0, double dt,
                                 int steps, double eps = 1e-6);

}  // namespace nordvlas
