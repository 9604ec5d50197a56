#include "nordvlas/state.hpp"

#include <cmath>
#include <string>

#include "nordvlas/errors.hpp"

namespace nordvlas {

void GridSpec::validate() const {
  if (cells_per_axis < 8 || cells_per_axis % 2 != 0)
    throw ConfigError("grid.cells_per_axis must be even and >= 8 (got " +
                      std::to_string(cells_per_axis) + ")");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid.half_width must be positive and finite");
}

namespace {

bool finite_lattice(const ScalarLattice& lattice) {
  for (double v : lattice.values())
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

bool ScalarFieldState::all_finite() const {
  return finite_lattice(phi) && finite_lattice(dphi_dt) && finite_lattice(phi_prev);
}

Vec3 grad_phi(const GridSpec& grid, const ScalarLattice& phi, int i, int j, int k) {
  const int last = grid.cells_per_axis;
  if (i < 1 || j < 1 || k < 1 || i >= last || j >= last || k >= last)
    throw DomainError("gradient undefined at boundary");
  const double inv = 0.5 / grid.dx();
  return {(phi(i + 1, j, k) - phi(i - 1, j, k)) * inv, (phi(i, j + 1, k) - phi(i, j - 1, k)) * inv,
          (phi(i, j, k + 1) - phi(i, j, k - 1)) * inv};
}

Vec3 grad_phi(const ScalarFieldState& field, int i, int j, int k) {
  return grad_phi(field.grid, field.phi, i, j, k);
}

double reconstruct_f(const PhaseParticle& particle, double phi_here) {
  return particle.f_birth * std::exp(4.0 * (phi_here - particle.phi_birth));
}

double current_volume(const PhaseParticle& particle, double phi_here) {
  return particle.vol_birth * std::exp(-3.0 * (phi_here - particle.phi_birth));
}

double particle_weight(const PhaseParticle& particle, double phi_here) {
  return particle.f_birth * particle.vol_birth * std::exp(phi_here - particle.phi_birth);
}

FieldHistory::FieldHistory(const GridSpec& grid, int stride, double dt)
    : grid_(grid), stride_(stride), dt_(dt) {
  if (stride < 1) throw ConfigError("history stride must be a positive integer");
  if (!(dt > 0.0)) throw ConfigError("history dt must be positive");
}

void FieldHistory::push(HistorySlice slice) {
  const double expected = static_cast<double>(slices_.size()) * spacing();
  if (std::abs(slice.time - expected) > 1e-9 * std::max(1.0, expected))
    throw HistoryError("history slice at t=" + std::to_string(slice.time) + " but expected t=" +
                       std::to_string(expected));
  slices_.push_back(std::move(slice));
}

bool FieldHistory::covers(double t) const {
  if (slices_.empty() || t < 0.0) return false;
  return t <= slices_.back().time * (1.0 + 1e-12) + 1e-14;
}

FieldHistory::Bracket FieldHistory::bracket(double t) const {
  if (!covers(t))
    throw HistoryError("insufficient history: t=" + std::to_string(t) + " not covered");
  const double h = spacing();
  const std::size_t last = slices_.size() - 1;
  if (last == 0) return {0, 0.0};
  double s = t / h;
  auto k = static_cast<std::size_t>(std::floor(s));
  if (k >= last) return {last - 1, 1.0};
  return {k, std::clamp(s - static_cast<double>(k), 0.0, 1.0)};
}

}  // namespace nordvlas
