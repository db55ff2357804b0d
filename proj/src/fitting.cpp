#include "snsim/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "snsim/errors.hpp"
#include "snsim/operators.hpp"

namespace snsim {

double lorentzian_folded(double f, double center_hz, double hwhm_hz, double area) {
  const double g = hwhm_hz;
  const double d1 = (f - center_hz) * (f - center_hz) + g * g;
  const double d2 = (f + center_hz) * (f + center_hz) + g * g;
  return (area / pi) * g * (1.0 / d1 + 1.0 / d2);
}

Eigen::Vector3d lorentzian_gradient(double f, double center_hz, double hwhm_hz, double area) {
  const double g = hwhm_hz;
  const double u1 = f - center_hz, u2 = f + center_hz;
  const double d1 = u1 * u1 + g * g, d2 = u2 * u2 + g * g;
  Eigen::Vector3d grad;
  // d/dc
  grad(0) = (area / pi) * g * (2.0 * u1 / (d1 * d1) - 2.0 * u2 / (d2 * d2));
  // d/d(log g) = g * d/dg,  dL/dg = (A/pi)(u^2 - g^2)/d^2
  grad(1) = (area / pi) * g * ((u1 * u1 - g * g) / (d1 * d1) + (u2 * u2 - g * g) / (d2 * d2));
  // d/d(log A) = model value of this component
  grad(2) = (area / pi) * g * (1.0 / d1 + 1.0 / d2);
  return grad;
}

namespace {

struct Packed {
  // per component: [center (if free), log hwhm, log area]; baseline last
  std::vector<int> center_idx;  // -1 when fixed
  std::vector<int> lg_idx, la_idx;
  int baseline_idx = -1;
  int n_params = 0;
};

Packed pack_layout(const FitModel& m) {
  Packed p;
  int idx = 0;
  for (const auto& c : m.components) {
    p.center_idx.push_back(c.center_fixed ? -1 : idx++);
    p.lg_idx.push_back(idx++);
    p.la_idx.push_back(idx++);
  }
  p.baseline_idx = idx++;
  p.n_params = idx;
  return p;
}

Eigen::VectorXd pack(const FitModel& m, const Packed& p) {
  Eigen::VectorXd th(p.n_params);
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    if (p.center_idx[i] >= 0) th(p.center_idx[i]) = m.components[i].center_hz;
    th(p.lg_idx[i]) = std::log(m.components[i].hwhm_hz);
    th(p.la_idx[i]) = std::log(m.components[i].area);
  }
  th(p.baseline_idx) = m.baseline;
  return th;
}

FitModel unpack(const Eigen::VectorXd& th, const FitModel& init, const Packed& p) {
  FitModel m = init;
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    if (p.center_idx[i] >= 0) m.components[i].center_hz = th(p.center_idx[i]);
    m.components[i].hwhm_hz = std::exp(std::clamp(th(p.lg_idx[i]), -700.0, 700.0));
    m.components[i].area = std::exp(std::clamp(th(p.la_idx[i]), -700.0, 700.0));
  }
  m.baseline = th(p.baseline_idx);
  return m;
}

double model_eval(const FitModel& m, double f) {
  double y = m.baseline;
  for (const auto& c : m.components) y += lorentzian_folded(f, c.center_hz, c.hwhm_hz, c.area);
  return y;
}

}  // namespace

FitModel default_init(const SpectrumRecord& spec, int n_components) {
  if (n_components < 1 || n_components > 3)
    throw ConfigError("component presets cover 1, 2 or 3 lines", "components");
  const auto& f = spec.freq_hz;
  const auto& p = spec.psd;
  if (f.size() < 16) throw ConfigError("spectrum too short to seed a fit", "default_init");
  const double rbw = spec.rbw_hz > 0 ? spec.rbw_hz : f[1] - f[0];

  // largest maximum away from the removed-mean DC region
  std::size_t k0 = 3;
  for (std::size_t k = 3; k < f.size(); ++k)
    if (p[k] > p[k0]) k0 = k;
  double total = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) total += p[k] * rbw;
  if (!(total > 0.0)) throw ConfigError("spectrum carries no power", "default_init");

  auto width_guess = [&](std::size_t kp) {
    const double win = std::max(5.0 * rbw, 0.25 * f[kp]);
    const auto r = hwhm(spec, f[kp], win);
    return r.ok ? std::max(r.hz, rbw) : std::max(4.0 * rbw, 0.02 * f.back());
  };

  FitModel m;
  if (n_components == 1) {
    FitComponent c;
    c.center_hz = f[k0];
    c.hwhm_hz = width_guess(k0);
    c.area = total;
    m.components = {c};
    return m;
  }

  FitComponent larmor;
  larmor.center_hz = f[k0];
  larmor.hwhm_hz = width_guess(k0);
  larmor.area = pi * larmor.hwhm_hz * p[k0];

  // residual mass below half the peak frequency seeds the zero-centered line
  double low_mass = 0.0;
  for (std::size_t k = 1; k < f.size() && f[k] < 0.5 * f[k0]; ++k)
    low_mass += std::max(0.0, p[k] - lorentzian_folded(f[k], larmor.center_hz, larmor.hwhm_hz,
                                                       larmor.area)) *
                rbw;
  FitComponent zero;
  zero.center_hz = 0.0;
  zero.center_fixed = true;
  zero.hwhm_hz = std::max(0.25 * f[k0], 4.0 * rbw);
  zero.area = std::max(low_mass, 1e-3 * total);

  if (n_components == 2) {
    m.components = {zero, larmor};
    return m;
  }

  // three lines: second propagating peak = largest local maximum away from
  // the first, plus the zero-centered component
  std::size_t k1 = 0;
  double best = -1.0;
  for (std::size_t k = 4; k + 1 < f.size(); ++k) {
    if (std::abs(double(k) - double(k0)) < 6) continue;
    if (p[k] >= p[k - 1] && p[k] >= p[k + 1] && p[k] > best) {
      best = p[k];
      k1 = k;
    }
  }
  if (k1 == 0) k1 = (k0 > f.size() / 2) ? k0 / 2 : std::min(2 * k0, f.size() - 2);
  FitComponent second;
  second.center_hz = f[k1];
  second.hwhm_hz = width_guess(k1);
  second.area = pi * second.hwhm_hz * p[k1];
  m.components = {zero, larmor, second};
  return m;
}

FitResult fit_spectrum(const SpectrumRecord& spec, const FitModel& init) {
  if (init.components.empty()) throw ConfigError("fit needs at least one component", "fit");
  for (const auto& c : init.components)
    if (!(c.hwhm_hz > 0.0) || !(c.area > 0.0))
      throw ConfigError("initial widths and areas must be positive", "fit");
  const Packed layout = pack_layout(init);

  // assemble data, skipping the mean-removed DC bin
  std::vector<double> fs, ys, ws;
  bool have_err = false;
  for (double s : spec.stderr_psd)
    if (s > 0.0) have_err = true;
  for (std::size_t k = 0; k < spec.freq_hz.size(); ++k) {
    if (spec.freq_hz[k] == 0.0) continue;
    fs.push_back(spec.freq_hz[k]);
    ys.push_back(spec.psd[k]);
    ws.push_back(1.0);
  }
  if (have_err) {
    double floor = 0.0;
    for (double s : spec.stderr_psd) floor = std::max(floor, s);
    floor *= 1e-9;
    std::size_t j = 0;
    for (std::size_t k = 0; k < spec.freq_hz.size(); ++k) {
      if (spec.freq_hz[k] == 0.0) continue;
      ws[j++] = 1.0 / std::max(spec.stderr_psd[k], floor);
    }
  }
  const long n = long(fs.size());
  if (n < 10 * layout.n_params)
    throw ConfigError("fewer than 10 points per free parameter", "fit");
  for (const auto& c : init.components)
    if (std::abs(c.center_hz) > fs.back())
      throw ConfigError("initial center outside the frequency grid", "fit");

  // normalize the data scale so the convergence thresholds (and the whole
  // iteration path) are invariant under psd -> c * psd
  double yscale = 0.0;
  for (double y : ys) yscale = std::max(yscale, std::abs(y));
  if (!(yscale > 0.0)) throw ConfigError("spectrum carries no power", "fit");
  for (double& y : ys) y /= yscale;
  if (have_err)
    for (double& w : ws) w *= yscale;
  FitModel init_n = init;
  for (auto& c : init_n.components) c.area /= yscale;
  init_n.baseline /= yscale;

  auto residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r) {
    const FitModel m = unpack(th, init_n, layout);
    for (long k = 0; k < n; ++k) r(k) = ws[k] * (model_eval(m, fs[k]) - ys[k]);
    return 0.5 * r.squaredNorm();
  };
  auto jacobian = [&](const Eigen::VectorXd& th, Eigen::MatrixXd& jac) {
    const FitModel m = unpack(th, init_n, layout);
    jac.setZero();
    for (long k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < m.components.size(); ++i) {
        const auto& c = m.components[i];
        const Eigen::Vector3d g = lorentzian_gradient(fs[k], c.center_hz, c.hwhm_hz, c.area);
        if (layout.center_idx[i] >= 0) jac(k, layout.center_idx[i]) = ws[k] * g(0);
        jac(k, layout.lg_idx[i]) = ws[k] * g(1);
        jac(k, layout.la_idx[i]) = ws[k] * g(2);
      }
      jac(k, layout.baseline_idx) = ws[k];
    }
  };

  Eigen::VectorXd th = pack(init_n, layout);
  Eigen::VectorXd r(n), r_try(n);
  Eigen::MatrixXd jac(n, layout.n_params);
  double cost = residuals(th, r);

  double lambda = 1e-3;
  int stall = 0, iters = 0;
  bool converged = false;
  for (; iters < 500; ++iters) {
    jacobian(th, jac);
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.norm() < 1e-12) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::MatrixXd damped = jtj;
    for (int i = 0; i < layout.n_params; ++i)
      damped(i, i) += lambda * std::max(jtj(i, i), 1e-300);
    const Eigen::VectorXd step = damped.ldlt().solve(-grad);
    if (!step.allFinite()) {
      lambda *= 2.0;
      if (lambda > 1e14) break;
      continue;
    }
    const Eigen::VectorXd th_try = th + step;
    const double cost_try = residuals(th_try, r_try);
    if (std::isfinite(cost_try) && cost_try < cost) {
      const double rel = (cost - cost_try) / std::max(cost, 1e-300);
      th = th_try;
      r = r_try;
      cost = cost_try;
      lambda = std::max(lambda / 3.0, 1e-12);
      if (rel < 1e-10) {
        if (++stall >= 3) {
          converged = true;
          ++iters;
          break;
        }
      } else {
        stall = 0;
      }
    } else {
      lambda *= 2.0;
      if (lambda > 1e14) break;  // stuck; report best so far, unconverged
    }
  }

  // covariance from the weighted normal matrix, scaled by chi^2 / dof
  const FitModel fitted = unpack(th, init_n, layout);
  jacobian(th, jac);
  residuals(th, r);
  const double chi2 = r.squaredNorm();
  const long dof = std::max(1L, n - layout.n_params);
  Eigen::MatrixXd cov =
      (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse() * (chi2 / dof);

  FitResult out;
  out.baseline = fitted.baseline * yscale;
  out.residual_norm = std::sqrt(chi2);
  out.converged = converged;
  out.iterations = iters;
  for (std::size_t i = 0; i < fitted.components.size(); ++i) {
    FitComponentResult c;
    c.center_hz = fitted.components[i].center_hz;
    c.hwhm_hz = fitted.components[i].hwhm_hz;
    c.area = fitted.components[i].area * yscale;
    const int ic = layout.center_idx[i];
    c.center_err_hz = ic >= 0 ? std::sqrt(std::max(0.0, cov(ic, ic))) : 0.0;
    c.hwhm_err_hz = c.hwhm_hz * std::sqrt(std::max(0.0, cov(layout.lg_idx[i], layout.lg_idx[i])));
    c.area_err = c.area * std::sqrt(std::max(0.0, cov(layout.la_idx[i], layout.la_idx[i])));
    out.components.push_back(c);
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const FitComponentResult& a, const FitComponentResult& b) {
              return a.center_hz < b.center_hz;
            });
  return out;
}

double power_fraction(const FitResult& fr, std::size_t component_index) {
  if (component_index >= fr.components.size())
    throw ConfigError("component index out of range", "power_fraction");
  double total = 0.0;
  for (const auto& c : fr.components) total += c.area;
  if (!(total > 0.0)) throw ConfigError("total fitted power is zero", "power_fraction");
  return fr.components[component_index].area / total;
}

double power_fraction_err(const FitResult& fr, std::size_t component_index) {
  if (component_index >= fr.components.size())
    throw ConfigError("component index out of range", "power_fraction");
  double total = 0.0;
  for (const auto& c : fr.components) total += c.area;
  if (!(total > 0.0)) throw ConfigError("total fitted power is zero", "power_fraction");
  const double ai = fr.components[component_index].area;
  double var = 0.0;
  for (std::size_t j = 0; j < fr.components.size(); ++j) {
    const double d = (j == component_index) ? (total - ai) / (total * total)
                                            : -ai / (total * total);
    var += d * d * fr.components[j].area_err * fr.components[j].area_err;
  }
  return std::sqrt(var);
}

double correlation_time_from_hwhm(double gamma_hz) {
  if (!(gamma_hz > 0.0)) throw ConfigError("width must be positive", "correlation_time");
  return 1.0 / (2.0 * pi * gamma_hz);
}

double interaction_range(double tau_c, double vbar) { return tau_c * vbar; }

}  // namespace snsim
