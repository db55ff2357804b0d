#include "snsim/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "snsim/detail/pair_engine.hpp"
#include "snsim/errors.hpp"

namespace snsim {

namespace {

constexpr double kStability = 0.05;  // dt * fastest rate must stay below this

double drive_rate_scale(const SimConfig& cfg) {
  return std::max({std::abs(cfg.drive.delta), std::abs(cfg.drive.omega),
                   std::abs(cfg.drive.larmor), cfg.gamma0});
}

// Geometry-independent operator patterns, built once from the lifted
// single-atom operators and reused by every engine instance.
struct Patterns {
  std::vector<detail::PairEngine::SandEntry> jump_same[2][3];
  std::vector<detail::PairEngine::SandEntry> cross12[3][3];
  std::vector<detail::PairEngine::SandEntry> cross21[3][3];
  detail::Mat16 vdd[3][3];     // D+^a (x) D-^b + D-^b (x) D+^a
  detail::Mat16 kcross[3][3];  // D-^a (x) D+^b + D+^b (x) D-^a
  detail::Mat16 excited_diag;  // Pe (x) 1 + 1 (x) Pe
  double sz_diag[16];
};

std::vector<detail::PairEngine::SandEntry> make_sandwich(const Mat& l,
                                                         const Mat& m) {
  std::vector<detail::PairEngine::SandEntry> out;
  for (int r = 0; r < 16; ++r)
    for (int k = 0; k < 16; ++k) {
      const cd lv = l(r, k);
      if (std::abs(lv) < 1e-15) continue;
      for (int c = 0; c < 16; ++c)
        for (int ll = 0; ll < 16; ++ll) {
          const cd mv = m(c, ll);
          if (std::abs(mv) < 1e-15) continue;
          out.push_back({16 * r + c, 16 * k + ll, lv * std::conj(mv)});
        }
    }
  return out;
}

Patterns build_patterns() {
  Patterns p;
  const SingleAtomOps& ops = single_atom_ops();

  Mat dm[2][3], dp[2][3];
  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 3; ++l) {
      dm[i][l] = lift_to_pair(ops.dminus[l], i + 1);
      dp[i][l] = lift_to_pair(ops.dplus[l], i + 1);
    }

  p.excited_diag = lift_to_pair(ops.excited_proj, 1) + lift_to_pair(ops.excited_proj, 2);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      p.vdd[a][b] = dp[0][a] * dm[1][b] + dp[1][a] * dm[0][b];
      // anticommutator pattern for the cross dissipator block:
      // L^{b,2 dag} L^{a,1} + L^{b,1 dag} L^{a,2}
      p.kcross[a][b] = dp[1][b] * dm[0][a] + dp[0][b] * dm[1][a];
      p.cross12[a][b] = make_sandwich(dm[0][a], dm[1][b]);
      p.cross21[a][b] = make_sandwich(dm[1][a], dm[0][b]);
    }

  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 3; ++l)
      p.jump_same[i][l] = make_sandwich(dm[i][l], dm[i][l]);

  const double szv[4] = {-0.5, 0.5, 0.0, 0.0};
  for (int b = 0; b < 16; ++b) p.sz_diag[b] = szv[b / 4] + szv[b % 4];
  return p;
}

const Patterns& patterns() {
  static const Patterns p = build_patterns();
  return p;
}

}  // namespace

namespace detail {

void PairEngine::set_run(const Mat& h0_pair, double gamma0, bool ddi,
                         bool collective, double base_dt, double drive_scale) {
  if (h0_pair.rows() != 16 || h0_pair.cols() != 16)
    throw ConfigError("pair Hamiltonian must be 16x16");
  h0_pair_ = h0_pair;
  gamma0_ = gamma0;
  ddi_ = ddi;
  collective_ = collective;
  base_dt_ = base_dt;
  drive_scale_ = drive_scale;
  dt_local_ = base_dt;
  refine_depth_ = 0;
}

void PairEngine::set_geometry(const CouplingTensors& ct) {
  const Patterns& p = patterns();

  Mat16 heff = h0_pair_;
  double coupling_scale = 0.0;

  if (ddi_) {
    Mat16 vdd = Mat16::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const cd z = ct.zeta(a, b);
        if (std::abs(z) == 0.0) continue;
        vdd += z * p.vdd[a][b];
        coupling_scale = std::max(coupling_scale, std::abs(z));
      }
    const double vmax = vdd.cwiseAbs().maxCoeff();
    if ((vdd - vdd.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, vmax))
      throw NumericalError("coherent pair coupling lost Hermiticity");
    heff += vdd;
  }

  Mat16 decay = gamma0_ * p.excited_diag;
  if (collective_) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const cd g = ct.gamma_cross(a, b);
        if (std::abs(g) == 0.0) continue;
        decay += g * p.kcross[a][b];
        coupling_scale = std::max(coupling_scale, std::abs(g));
      }
  }
  heff -= cd(0, 0.5) * decay;

  heff_.clear();
  for (int r = 0; r < 16; ++r)
    for (int k = 0; k < 16; ++k) {
      const cd v = heff(r, k);
      if (std::abs(v) == 0.0) continue;
      heff_.push_back({r, k, cd(0, -1) * v});
    }

  sand_.clear();
  auto append = [this](const std::vector<SandEntry>& src, cd coef) {
    for (const SandEntry& e : src) sand_.push_back({e.rc, e.kl, coef * e.v});
  };
  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 3; ++l) append(p.jump_same[i][l], gamma0_);
  if (collective_) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const cd g = ct.gamma_cross(a, b);
        if (std::abs(g) == 0.0) continue;
        append(p.cross12[a][b], g);
        append(p.cross21[a][b], g);
      }
  }

  // Local refinement: close pairs raise the coherent coupling far above the
  // drive rates the base step was sized for.
  dt_local_ = base_dt_;
  refine_depth_ = 0;
  while (dt_local_ * coupling_scale > kStability) {
    dt_local_ *= 0.5;
    if (++refine_depth_ > kMaxRefineDepth)
      throw NumericalError("local step refinement exceeded the depth cap");
  }
}

void PairEngine::rhs(const Mat16& rho, Mat16& out) const {
  out.setZero();
  const cd* rp = rho.data();
  cd* op = out.data();
  for (const SandEntry& e : sand_) op[e.rc] += e.v * rp[e.kl];

  a_.setZero();
  for (const HeffEntry& e : heff_) a_.row(e.r) += e.v * rho.row(e.k);
  out += a_;
  out += a_.adjoint();
}

void PairEngine::step(Mat16& rho, double dt) {
  rhs(rho, k1_);
  tmp_ = rho + (0.5 * dt) * k1_;
  rhs(tmp_, k2_);
  tmp_ = rho + (0.5 * dt) * k2_;
  rhs(tmp_, k3_);
  tmp_ = rho + dt * k3_;
  rhs(tmp_, k4_);
  rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  tmp_ = rho.adjoint();
  rho = 0.5 * (rho + tmp_);
}

}  // namespace detail

double SimConfig::burn_in_or_default() const {
  if (burn_in >= 0.0) return burn_in;
  if (gamma_t <= 0.0)
    throw ConfigError("default burn-in needs gamma_t > 0", "burn_in_s");
  return 3.0 / gamma_t;
}

void validate(const SimConfig& cfg) {
  if (cfg.drive.omega < 0) throw ConfigError("omega must be >= 0", "omega_rad_s");
  if (cfg.gamma0 <= 0) throw ConfigError("gamma0 must be > 0", "gamma0_rad_s");
  if (cfg.gamma_t < 0) throw ConfigError("gamma_t must be >= 0", "gamma_t_rad_s");
  if (cfg.geometry.density <= 0) throw ConfigError("density must be > 0", "density_m3");
  if (cfg.geometry.tau_c <= 0) throw ConfigError("tau_c must be > 0", "tau_c_s");
  if (cfg.geometry.r_min <= 0) throw ConfigError("rmin must be > 0", "rmin_m");
  if (cfg.k0 <= 0) throw ConfigError("k0 must be > 0", "k0_rad_m");
  if (cfg.duration <= 0) throw ConfigError("duration must be > 0", "duration_s");
  if (cfg.dt <= 0) throw ConfigError("dt must be > 0", "dt_s");
  if (cfg.dt_samp <= 0) throw ConfigError("dt_samp must be > 0", "dt_samp_s");
  if (cfg.dt > cfg.dt_samp)
    throw ConfigError("dt must not exceed dt_samp", "dt_s");
  if (cfg.dt_samp > cfg.geometry.tau_c)
    throw ConfigError("dt_samp must not exceed tau_c", "dt_samp_s");
  if (cfg.duration < cfg.dt_samp)
    throw ConfigError("duration shorter than one sampling interval", "duration_s");
  if (cfg.trajectories < 1)
    throw ConfigError("need at least one trajectory", "trajectories");
  if (cfg.burn_in_or_default() >= cfg.duration)
    throw ConfigError("burn-in consumes the whole record", "burn_in_s");
}

PreparedTimestep prepare_timestep(const SimConfig& cfg, bool log) {
  const double scale = drive_rate_scale(cfg);
  PreparedTimestep out{cfg.dt, 0};
  while (out.dt * scale > kStability) {
    out.dt *= 0.5;
    if (++out.halvings > 30)
      throw ConfigError("base step needs more than 30 halvings; drive rates are too stiff",
                        "dt_s");
  }
  if (log && out.halvings > 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "[snsim] base step halved %d times: %.3e s -> %.3e s",
                  out.halvings, cfg.dt, out.dt);
    std::cerr << buf << '\n';
  }
  return out;
}

Mat lindblad_rhs(const Mat& rho, const Mat& h, const DecayTable& decay,
                 const SingleAtomOps& ops) {
  if (rho.rows() != 16 || rho.cols() != 16 || h.rows() != 16 || h.cols() != 16)
    throw ConfigError("lindblad_rhs expects 16x16 operators");

  Mat out = cd(0, -1) * (h * rho - rho * h);

  for (int which = 1; which <= 2; ++which)
    for (int l = 0; l < 3; ++l) {
      const Mat lop = lift_to_pair(ops.dminus[l], which);
      const Mat ldl = lop.adjoint() * lop;
      out += decay.gamma_self *
             (lop * rho * lop.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const cd g = decay.gamma_cross(a, b);
      if (std::abs(g) == 0.0) continue;
      const Mat l1 = lift_to_pair(ops.dminus[a], 1);
      const Mat m2 = lift_to_pair(ops.dminus[b], 2);
      const Mat md_l = m2.adjoint() * l1;
      out += g * (l1 * rho * m2.adjoint() - 0.5 * (md_l * rho + rho * md_l));

      const Mat l2 = lift_to_pair(ops.dminus[a], 2);
      const Mat m1 = lift_to_pair(ops.dminus[b], 1);
      const Mat md_l2 = m1.adjoint() * l2;
      out += g * (l2 * rho * m1.adjoint() - 0.5 * (md_l2 * rho + rho * md_l2));
    }

  return out;
}

Mat step_rk4(const Mat& rho, const std::function<Mat(const Mat&)>& rhs, double dt) {
  const Mat k1 = rhs(rho);
  const Mat k2 = rhs(rho + (0.5 * dt) * k1);
  const Mat k3 = rhs(rho + (0.5 * dt) * k2);
  const Mat k4 = rhs(rho + dt * k3);
  Mat next = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  hermitize(next);
  if (next.hasNaN()) throw NumericalError("integration step produced NaN");
  return next;
}

Mat random_ground_spin(RngStream& rng) {
  const double nz = 2.0 * rng.uniform() - 1.0;
  const double ph = 2.0 * pi * rng.uniform();
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(g_plus) = std::sqrt(0.5 * (1.0 + nz));
  psi(g_minus) = std::polar(std::sqrt(0.5 * (1.0 - nz)), ph);
  return psi * psi.adjoint();
}

Mat replace_atom(const Mat& rho, int which, RngStream& rng) {
  if (rho.rows() != 16 || rho.cols() != 16)
    throw ConfigError("replace_atom expects a 16x16 pair state");
  const Mat fresh = random_ground_spin(rng);
  if (which == 1) return kron(fresh, partial_trace(rho, 1, 4, 4));
  if (which == 2) return kron(partial_trace(rho, 2, 4, 4), fresh);
  throw ConfigError("atom slot must be 1 or 2");
}

TrajectoryRecord simulate_trajectory(const SimConfig& cfg, long traj_index) {
  validate(cfg);
  const PreparedTimestep prep = prepare_timestep(cfg, traj_index == 0);
  const Patterns& pat = patterns();

  const Mat h0 = build_h0(cfg.drive, cfg.excited_zeeman);
  const Mat h0_pair = lift_to_pair(h0, 1) + lift_to_pair(h0, 2);

  detail::PairEngine eng;
  eng.set_run(h0_pair, cfg.gamma0, cfg.ddi, cfg.collective, prep.dt,
              drive_rate_scale(cfg));

  RngStream rng(cfg.seed, static_cast<uint64_t>(traj_index), 0);

  TrajectoryRecord rec;

  detail::Mat16 rho;
  {
    const Mat s1 = random_ground_spin(rng);
    const Mat s2 = random_ground_spin(rng);
    rho = kron(s1, s2);
  }

  const bool fixed_schedule = cfg.geometry.mode == ResampleMode::fixed_period;
  auto new_geometry = [&]() {
    PairGeometry g;
    g.r = sample_nn_distance(cfg.geometry.density, cfg.geometry.r_min, rng);
    sample_orientation(rng, cfg.angle_mode, g.cos_theta, g.phi);
    eng.set_geometry(coupling_coeffs(g, cfg.k0, cfg.gamma0));
    if (eng.refine_depth() > 0) ++rec.refined_segments;
    rec.max_refine_depth = std::max(rec.max_refine_depth, eng.refine_depth());
  };
  new_geometry();

  const long n_total = std::llround(cfg.duration / cfg.dt_samp) + 1;
  const long checkpoint_stride =
      cfg.store_checkpoints ? std::max<long>(1, n_total / 100) : 0;
  rec.times.reserve(n_total);
  rec.sz.reserve(n_total);

  const double inf = std::numeric_limits<double>::infinity();
  long ksamp = 0;
  long kgeom = 1;
  double next_geom = fixed_schedule ? cfg.geometry.tau_c
                                    : rng.exponential(cfg.geometry.tau_c);
  double next_rep1 = cfg.gamma_t > 0 ? rng.exponential(1.0 / cfg.gamma_t) : inf;
  double next_rep2 = cfg.gamma_t > 0 ? rng.exponential(1.0 / cfg.gamma_t) : inf;

  double t = 0.0;
  auto take_sample = [&]() {
    if (rho.hasNaN())
      throw NumericalError("state contains non-finite entries", traj_index);
    double val = 0.0;
    cd tr = 0.0;
    for (int b = 0; b < 16; ++b) {
      val += pat.sz_diag[b] * rho(b, b).real();
      tr += rho(b, b);
    }
    rec.times.push_back(t);
    rec.sz.push_back(val);
    rec.max_trace_dev = std::max(rec.max_trace_dev, std::abs(tr - cd(1.0)));
    if (checkpoint_stride > 0 && ksamp % checkpoint_stride == 0)
      rec.checkpoints.emplace_back(rho);
    ++ksamp;
  };
  take_sample();

  while (ksamp < n_total) {
    const double next_samp = static_cast<double>(ksamp) * cfg.dt_samp;
    double t_next = next_samp;
    t_next = std::min(t_next, next_geom);
    t_next = std::min(t_next, next_rep1);
    t_next = std::min(t_next, next_rep2);

    const double span = t_next - t;
    if (span > 0) {
      const double dtl = eng.dt_local();
      const long n_full = static_cast<long>(std::floor(span / dtl + 1e-12));
      for (long s = 0; s < n_full; ++s) eng.step(rho, dtl);
      const double rem = span - static_cast<double>(n_full) * dtl;
      if (rem > 1e-9 * dtl) eng.step(rho, rem);
    }
    t = t_next;

    // event priority at coincident times: sample, geometry, replacement 1,
    // replacement 2
    if (t == next_samp) take_sample();
    if (t == next_geom) {
      new_geometry();
      rec.events.push_back({t, EventType::geometry_resample});
      ++kgeom;
      next_geom = fixed_schedule
                      ? static_cast<double>(kgeom) * cfg.geometry.tau_c
                      : t + rng.exponential(cfg.geometry.tau_c);
    }
    if (t == next_rep1) {
      Mat full = rho;
      rho = replace_atom(full, 1, rng);
      rec.events.push_back({t, EventType::replace_atom_1});
      next_rep1 = t + rng.exponential(1.0 / cfg.gamma_t);
    }
    if (t == next_rep2) {
      Mat full = rho;
      rho = replace_atom(full, 2, rng);
      rec.events.push_back({t, EventType::replace_atom_2});
      next_rep2 = t + rng.exponential(1.0 / cfg.gamma_t);
    }
  }

  return rec;
}

std::vector<TrajectoryRecord> simulate_ensemble(const SimConfig& cfg, int threads) {
  validate(cfg);
  const long m = cfg.trajectories;
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? static_cast<int>(hw) : 1;
  }
  threads = static_cast<int>(std::min<long>(threads, m));
  threads = std::max(threads, 1);

  std::vector<TrajectoryRecord> records(m);
  if (threads == 1) {
    for (long i = 0; i < m; ++i) records[i] = simulate_trajectory(cfg, i);
    return records;
  }

  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::atomic<bool> aborted{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (long i = w; i < m; i += threads) {
        if (aborted.load(std::memory_order_relaxed)) return;
        try {
          records[i] = simulate_trajectory(cfg, i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          aborted.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

}  // namespace snsim
