#pragma once

// Flow configuration: g_t = -2Q with Q = Ric, -Ric or 0, and the potential
// coefficient K of the conjugate heat equation u_t = -Laplacian u + K u.

#include <cmath>
#include <string>

#include "flowlab/error.hpp"
#include "flowlab/tensorlab/identities.hpp"

namespace flowlab::flows {

using QMode = tensorlab::FlowDirection;

enum class KMode { ScalarCurvature, TraceQ, Zero };

inline const char* to_string(QMode q) {
  switch (q) {
    case QMode::Ricci: return "ricci";
    case QMode::BackwardRicci: return "backward_ricci";
    case QMode::Static: return "static";
  }
  return "unknown";
}

inline const char* to_string(KMode k) {
  switch (k) {
    case KMode::ScalarCurvature: return "scalar_curvature";
    case KMode::TraceQ: return "trace_Q";
    case KMode::Zero: return "zero";
  }
  return "unknown";
}

/// tr Q in two dimensions: R for Ricci flow, -R for backward Ricci flow.
inline double trace_q(QMode q, double R) {
  switch (q) {
    case QMode::Ricci: return R;
    case QMode::BackwardRicci: return -R;
    case QMode::Static: return 0.0;
  }
  return 0.0;
}

inline double k_value(KMode k, QMode q, double R) {
  switch (k) {
    case KMode::ScalarCurvature: return R;
    case KMode::TraceQ: return trace_q(q, R);
    case KMode::Zero: return 0.0;
  }
  return 0.0;
}

struct AmbientFlowConfig {
  QMode q_mode = QMode::Ricci;
  KMode k_mode = KMode::TraceQ;
  double T = 1.0;  // reference time, tau = T - t
  double t0 = 0.0;
  double t1 = 0.5;
  double dt = 1e-4;
  int snapshot_stride = 10;
  double tau_min = 1e-3;

  /// Number of steps of at most dt covering [t0, t1].
  int steps() const { return static_cast<int>(std::ceil((t1 - t0) / dt - 1e-9)); }

  void validate() const {
    if (!(t1 > t0)) throw Error(ErrorKind::Validation, "t_range must satisfy t0 < t1");
    if (!(t1 < T)) throw Error(ErrorKind::Validation, "t1 must be strictly before T so that tau > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Validation, "dt must be positive");
    if (snapshot_stride < 1) throw Error(ErrorKind::Validation, "snapshot_stride must be at least 1");
    if (!(tau_min > 0.0)) throw Error(ErrorKind::Validation, "tau_min must be positive");
  }

  /// End of the run after the tau floor: min(t1, T - tau_min).
  double effective_t1() const { return std::min(t1, T - tau_min); }
};

}  // namespace flowlab::flows
