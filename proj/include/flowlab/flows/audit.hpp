#pragma once

// Evolution identities audited on a flow trajectory. Grid snapshots are
// turned into local Taylor polynomials by trigonometric interpolation, so the
// tensor calculus sees smooth fields; the time derivative is a central
// difference over three consecutive snapshots.

#include <array>
#include <vector>

#include "flowlab/flows/trajectory.hpp"
#include "flowlab/geometry2d/spectral.hpp"
#include "flowlab/tensorlab/identities.hpp"

namespace flowlab::flows {

using tensorlab::EvolutionResiduals;
using tensorlab::HarnackMode;
using tensorlab::HEvolutionResult;

inline constexpr int kProbeDegree = 4;
inline constexpr int kProbeFilter = 8;  // order of the spectral filter on probe jets

struct ProbeResidual {
  std::size_t snapshot = 0;  // index of the middle snapshot
  Point point{};
  EvolutionResiduals flow;
  HEvolutionResult h;
};

namespace detail {

inline void require_three(const FlowTrajectory& traj, std::size_t mid) {
  if (traj.size() < 3) throw Error(ErrorKind::InsufficientSnapshots, "need at least three snapshots");
  if (mid == 0 || mid + 1 >= traj.size())
    throw Error(ErrorKind::InsufficientSnapshots, "probe snapshot needs a neighbour on each side");
}

inline GridValues log_values(const GridValues& u) {
  GridValues out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!(u[k] > 0.0)) throw Error(ErrorKind::NonpositiveU, "u must be positive to take log u");
    out[k] = std::log(u[k]);
  }
  return out;
}

inline HarnackMode harnack_mode(QMode q) {
  if (q == QMode::Static) throw Error(ErrorKind::Validation, "the H identities need a Ricci or backward Ricci flow");
  return q == QMode::Ricci ? HarnackMode::Ricci : HarnackMode::BackwardRicci;
}

struct ConstantPotential {
  double v = 0.0;
  template <class S, class T>
  S operator()(const Vec<S, 2>&, const T&) const {
    return S(v);
  }
};

}  // namespace detail

/// Ricci, scalar-curvature and Christoffel evolution residuals at each probe
/// point around each listed middle snapshot.
inline std::vector<ProbeResidual> audit_flow_evolutions(const FlowTrajectory& traj, const std::vector<Point>& points,
                                                        const std::vector<std::size_t>& mids,
                                                        int degree = kProbeDegree) {
  traj.validate();
  std::vector<ProbeResidual> out;
  const auto dir = traj.config.q_mode;
  for (std::size_t mid : mids) {
    detail::require_three(traj, mid);
    const std::array<double, 3> t{traj.snapshots[mid - 1].t, traj.snapshots[mid].t, traj.snapshots[mid + 1].t};
    if (traj.family) {
      const auto g = traj.family->metric_field();
      for (const auto& p : points) {
        ProbeResidual r{mid, p, {}, {}};
        r.flow = tensorlab::check_flow_evolutions_snapshots<2>(g, g, g, p, t[0], t[1], t[2], dir);
        out.push_back(r);
      }
      continue;
    }
    std::array<geometry2d::TrigInterpolant, 3> phi;
    for (int k = 0; k < 3; ++k) {
      const auto& m = traj.snapshots[mid - 1 + k].metric;
      phi[k] = geometry2d::TrigInterpolant(m.shape, m.phi, kProbeFilter);
    }
    for (const auto& p : points) {
      const auto g0 = tensorlab::conformal_metric(phi[0].taylor(p, degree));
      const auto g1 = tensorlab::conformal_metric(phi[1].taylor(p, degree));
      const auto g2 = tensorlab::conformal_metric(phi[2].taylor(p, degree));
      ProbeResidual r{mid, p, {}, {}};
      r.flow = tensorlab::check_flow_evolutions_snapshots<2>(g0, g1, g2, p, t[0], t[1], t[2], dir);
      out.push_back(r);
    }
  }
  return out;
}

/// Residual of the H evolution identity with f = log u, where u solves the
/// conjugate heat equation with K = tr Q along the trajectory.
inline std::vector<ProbeResidual> audit_H_evolution(const FlowTrajectory& traj, const std::vector<Point>& points,
                                                    const std::vector<std::size_t>& mids, double T,
                                                    int degree = kProbeDegree) {
  traj.validate();
  if (!traj.has_u()) throw Error(ErrorKind::Validation, "trajectory carries no u");
  const HarnackMode mode = detail::harnack_mode(traj.config.q_mode);
  std::vector<ProbeResidual> out;
  for (std::size_t mid : mids) {
    detail::require_three(traj, mid);
    const std::array<double, 3> t{traj.snapshots[mid - 1].t, traj.snapshots[mid].t, traj.snapshots[mid + 1].t};
    if (!(T > t[2])) throw Error(ErrorKind::NonpositiveTau, "T must lie after every probed snapshot");
    if (traj.family) {
      const auto g = traj.family->metric_field();
      std::array<decltype(g), 3> gs{g, g, g};
      std::array<decltype(tensorlab::scalar_field<2>(detail::ConstantPotential{})), 3> fs{
          tensorlab::scalar_field<2>(detail::ConstantPotential{std::log(traj.snapshots[mid - 1].u.front())}),
          tensorlab::scalar_field<2>(detail::ConstantPotential{std::log(traj.snapshots[mid].u.front())}),
          tensorlab::scalar_field<2>(detail::ConstantPotential{std::log(traj.snapshots[mid + 1].u.front())})};
      for (const auto& p : points) {
        ProbeResidual r{mid, p, {}, {}};
        r.h = tensorlab::check_H_evolution_snapshots<2>(gs, fs, t, p, T, mode);
        out.push_back(r);
      }
      continue;
    }
    std::array<geometry2d::TrigInterpolant, 3> phi, logu;
    for (int k = 0; k < 3; ++k) {
      const auto& s = traj.snapshots[mid - 1 + k];
      phi[k] = geometry2d::TrigInterpolant(s.metric.shape, s.metric.phi, kProbeFilter);
      logu[k] = geometry2d::TrigInterpolant(s.metric.shape, detail::log_values(s.u), kProbeFilter);
    }
    for (const auto& p : points) {
      using G = decltype(tensorlab::conformal_metric(phi[0].taylor(p, degree)));
      using F = decltype(tensorlab::scalar_field<2>(logu[0].taylor(p, degree)));
      std::array<G, 3> gs{tensorlab::conformal_metric(phi[0].taylor(p, degree)),
                          tensorlab::conformal_metric(phi[1].taylor(p, degree)),
                          tensorlab::conformal_metric(phi[2].taylor(p, degree))};
      std::array<F, 3> fs{tensorlab::scalar_field<2>(logu[0].taylor(p, degree)),
                          tensorlab::scalar_field<2>(logu[1].taylor(p, degree)),
                          tensorlab::scalar_field<2>(logu[2].taylor(p, degree))};
      ProbeResidual r{mid, p, {}, {}};
      r.h = tensorlab::check_H_evolution_snapshots<2>(gs, fs, t, p, T, mode);
      out.push_back(r);
    }
  }
  return out;
}

inline double max_flow_residual(const std::vector<ProbeResidual>& rs) {
  double m = 0.0;
  for (const auto& r : rs) m = std::max(m, r.flow.max());
  return m;
}

inline double max_h_residual(const std::vector<ProbeResidual>& rs) {
  double m = 0.0;
  for (const auto& r : rs) m = std::max(m, r.h.relative);
  return m;
}

}  // namespace flowlab::flows
