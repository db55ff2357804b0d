#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "snsim/dipole_coupling.hpp"
#include "snsim/geometry.hpp"

namespace snsim {

struct SimConfig {
  DriveParams drive{2 * pi * 150e6, 2 * pi * 300e6, 2 * pi * 9e6};
  double gamma0 = 2 * pi * 6.07e6;  // excited-state decay (rad/s)
  double gamma_t = 2 * pi * 250e3;  // transit / atom-replacement rate (rad/s)
  GeometrySchedule geometry;
  AngleMode angle_mode = AngleMode::sphere;
  double k0 = 2 * pi / 780e-9;      // probe wavenumber (rad/m)
  double duration = 20e-6;          // s
  double dt = 1e-10;                // base integrator step (s)
  double dt_samp = 5e-9;            // observable sampling interval (s)
  int trajectories = 64;
  uint64_t seed = 1;
  double burn_in = -1.0;            // s; negative selects the default 3/gamma_t
  bool ddi = true;
  bool collective = true;
  bool excited_zeeman = false;
  bool store_checkpoints = false;   // keep ~100 density-matrix snapshots per trajectory

  double burn_in_or_default() const;
};

void validate(const SimConfig& cfg);  // throws ConfigError

// Base step after start-up halving: dt is halved until
// dt * max(|delta|, omega, gamma0, larmor) <= 0.05.  Geometry-dependent
// couplings are handled per segment inside the integrator.
struct PreparedTimestep {
  double dt = 0.0;
  int halvings = 0;
};
PreparedTimestep prepare_timestep(const SimConfig& cfg, bool log = false);

enum class EventType { geometry_resample, replace_atom_1, replace_atom_2 };
struct TrajectoryEvent {
  double t;
  EventType type;
};

struct TrajectoryRecord {
  std::vector<double> times;  // uniform grid k * dt_samp
  std::vector<double> sz;     // <S_z> samples
  std::vector<TrajectoryEvent> events;
  std::vector<Mat> checkpoints;  // filled when cfg.store_checkpoints
  double max_trace_dev = 0.0;
  long refined_segments = 0;  // geometry segments that needed local dt halving
  int max_refine_depth = 0;
};

// Dense reference right-hand side: -i[H, rho] + dissipator.  The optimized
// integrator is property-tested against this.
Mat lindblad_rhs(const Mat& rho, const Mat& h, const DecayTable& decay,
                 const SingleAtomOps& ops);

// Classic RK4 step followed by re-hermitization; throws NumericalError on NaN.
Mat step_rk4(const Mat& rho, const std::function<Mat(const Mat&)>& rhs, double dt);

// rho -> fresh (x) Tr_which(rho), with the fresh pure ground spin drawn
// uniformly on the Bloch sphere and inserted at slot `which`.
Mat replace_atom(const Mat& rho, int which, RngStream& rng);
Mat random_ground_spin(RngStream& rng);  // 4x4 pure state |n><n|

TrajectoryRecord simulate_trajectory(const SimConfig& cfg, long traj_index);

// Runs trajectories [0, cfg.trajectories) across `threads` workers (0 = auto).
// Records end up in trajectory order regardless of the thread layout.
std::vector<TrajectoryRecord> simulate_ensemble(const SimConfig& cfg, int threads);

}  // namespace snsim
