#pragma once

// Time-stamped metric snapshots with an optional conjugate-heat solution u.
// Grid trajectories carry a ConformalTorus per snapshot; exact-family
// trajectories carry only times and evaluate the background in closed form,
// with u stored as a single spatially constant value.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "flowlab/flows/config.hpp"
#include "flowlab/geometry2d/background.hpp"
#include "flowlab/geometry2d/sampler.hpp"
#include "flowlab/geometry2d/torus.hpp"

namespace flowlab::flows {

using geometry2d::AnalyticBackground;
using geometry2d::ConformalTorus;
using geometry2d::GridShape;
using geometry2d::GridValues;
using geometry2d::Jet2;
using geometry2d::Point;

enum class Provenance { Numeric, TimeReversed, ExactFamily };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Numeric: return "numeric";
    case Provenance::TimeReversed: return "time_reversed";
    case Provenance::ExactFamily: return "exact_family";
  }
  return "unknown";
}

struct Snapshot {
  double t = 0.0;
  ConformalTorus metric;  // empty for exact families
  GridValues u;           // empty when absent; one value when spatially constant
};

struct FlowTrajectory {
  AmbientFlowConfig config;
  Provenance provenance = Provenance::Numeric;
  std::optional<AnalyticBackground> family;
  std::vector<Snapshot> snapshots;

  bool is_grid() const { return !family.has_value(); }
  bool has_u() const { return !snapshots.empty() && !snapshots.front().u.empty(); }
  std::size_t size() const { return snapshots.size(); }
  double t_begin() const { return snapshots.front().t; }
  double t_end() const { return snapshots.back().t; }
  const GridShape& shape() const { return snapshots.front().metric.shape; }

  void validate() const {
    if (snapshots.empty()) throw Error(ErrorKind::InsufficientSnapshots, "trajectory has no snapshots");
    for (std::size_t i = 1; i < snapshots.size(); ++i)
      if (!(snapshots[i].t > snapshots[i - 1].t))
        throw Error(ErrorKind::Validation, "snapshot times must be strictly increasing");
    for (const auto& s : snapshots)
      for (double v : s.u)
        if (!(v > 0.0)) throw Error(ErrorKind::NonpositiveU, "u must be positive");
  }

  /// Index of the snapshot at time t (within 1e-12 relative), if any.
  std::optional<std::size_t> find(double t) const {
    for (std::size_t i = 0; i < snapshots.size(); ++i)
      if (std::abs(snapshots[i].t - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    return std::nullopt;
  }

  /// Bracketing snapshot pair and weight for linear interpolation at t.
  std::pair<std::size_t, double> bracket(double t) const {
    const double eps = 1e-12 * std::max(1.0, std::abs(t));
    if (t < t_begin() - eps || t > t_end() + eps)
      throw Error(ErrorKind::TimeOutOfRange, "time " + std::to_string(t) + " is outside the trajectory");
    if (snapshots.size() == 1) return {0, 0.0};
    std::size_t i = 0;
    while (i + 2 < snapshots.size() && snapshots[i + 1].t <= t) ++i;
    const double w = (t - snapshots[i].t) / (snapshots[i + 1].t - snapshots[i].t);
    return {i, std::clamp(w, 0.0, 1.0)};
  }
};

/// Reverses a trajectory in time: snapshot at t moves to t0 + t1 - t. A Ricci
/// flow becomes a backward Ricci flow and vice versa; u is dropped.
inline FlowTrajectory reverse_in_time(const FlowTrajectory& traj) {
  traj.validate();
  FlowTrajectory out;
  out.config = traj.config;
  out.provenance = Provenance::TimeReversed;
  out.family = traj.family;
  const double a = traj.t_begin();
  const double b = traj.t_end();
  if (traj.config.q_mode == QMode::Ricci) out.config.q_mode = QMode::BackwardRicci;
  else if (traj.config.q_mode == QMode::BackwardRicci) out.config.q_mode = QMode::Ricci;
  for (auto it = traj.snapshots.rbegin(); it != traj.snapshots.rend(); ++it) {
    Snapshot s;
    s.t = a + b - it->t;
    s.metric = it->metric;
    s.metric.t = s.t;
    out.snapshots.push_back(std::move(s));
  }
  out.config.t0 = a;
  out.config.t1 = b;
  return out;
}

/// Off-grid jets of phi and u along a trajectory, linear in time between
/// snapshots. Samplers are built on demand and a few are kept.
class TrajectoryJets {
 public:
  explicit TrajectoryJets(std::shared_ptr<const FlowTrajectory> traj) : traj_(std::move(traj)) { traj_->validate(); }

  const FlowTrajectory& trajectory() const { return *traj_; }

  Jet2 phi(const Point& p, double t) const {
    if (traj_->family) return traj_->family->phi_jet(p, t);
    return blend(p, t, false);
  }

  Jet2 u(const Point& p, double t) const {
    if (!traj_->has_u()) throw Error(ErrorKind::Validation, "trajectory carries no u");
    if (traj_->family) {
      const auto [i, w] = traj_->bracket(t);
      const double a = traj_->snapshots[i].u.front();
      const double b = traj_->snapshots[std::min(i + 1, traj_->size() - 1)].u.front();
      Jet2 j;
      j.v = (1.0 - w) * a + w * b;
      return j;
    }
    return blend(p, t, true);
  }

 private:
  Jet2 blend(const Point& p, double t, bool u_field) const {
    const auto [i, w] = traj_->bracket(t);
    const Jet2 a = sampler(i, u_field).jet(p);
    if (w == 0.0 || i + 1 >= traj_->size()) return a;
    const Jet2 b = sampler(i + 1, u_field).jet(p);
    const double v = 1.0 - w;
    return {v * a.v + w * b.v, v * a.dx + w * b.dx, v * a.dy + w * b.dy,
            v * a.dxx + w * b.dxx, v * a.dxy + w * b.dxy, v * a.dyy + w * b.dyy};
  }

  const geometry2d::GridSampler& sampler(std::size_t i, bool u_field) const {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(i, u_field);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    if (cache_.size() >= 6) cache_.erase(cache_.begin());
    const auto& s = traj_->snapshots[i];
    auto sp = std::make_shared<geometry2d::GridSampler>(s.metric.shape, u_field ? s.u : s.metric.phi);
    return *cache_.emplace(key, std::move(sp)).first->second;
  }

  std::shared_ptr<const FlowTrajectory> traj_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::size_t, bool>, std::shared_ptr<geometry2d::GridSampler>> cache_;
};

}  // namespace flowlab::flows
