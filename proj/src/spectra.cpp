#include "snsim/spectra.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

#include "snsim/errors.hpp"
#include "snsim/operators.hpp"

namespace snsim {

namespace {

// FFTW planning is not thread-safe; execution of a private plan is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> fft_r2c(std::vector<double> in) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

SpectrumRecord periodogram(const std::vector<double>& values, double dt_samp, Window w) {
  const std::size_t n = values.size();
  if (n < 8) throw ConfigError("periodogram needs at least 8 samples", "periodogram");
  if (!(dt_samp > 0.0)) throw ConfigError("sampling interval must be positive", "dt_samp_s");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= double(n);

  std::vector<double> x(n);
  double wpow = 0.0;  // mean(w^2)
  for (std::size_t j = 0; j < n; ++j) {
    const double wj =
        (w == Window::hann) ? 0.5 * (1.0 - std::cos(2.0 * pi * double(j) / double(n))) : 1.0;
    x[j] = (values[j] - mean) * wj;
    wpow += wj * wj;
  }
  wpow /= double(n);

  const auto y = fft_r2c(std::move(x));

  SpectrumRecord rec;
  const std::size_t nbins = n / 2 + 1;
  rec.freq_hz.resize(nbins);
  rec.psd.resize(nbins);
  rec.stderr_psd.assign(nbins, 0.0);
  rec.rbw_hz = 1.0 / (double(n) * dt_samp);
  rec.n_avg = 1;
  const double norm = dt_samp / (double(n) * wpow);
  for (std::size_t k = 0; k < nbins; ++k) {
    rec.freq_hz[k] = double(k) * rec.rbw_hz;
    double p = std::norm(y[k]) * norm;
    const bool interior = (k != 0) && !(n % 2 == 0 && k == n / 2);
    if (interior) p *= 2.0;  // one-sided folding, DC and Nyquist excepted
    rec.psd[k] = p;
  }
  return rec;
}

SpectrumRecord average_psd(const std::vector<SpectrumRecord>& records) {
  if (records.empty()) throw ConfigError("no spectra to average", "average_psd");
  const auto& first = records.front();
  const std::size_t nbins = first.freq_hz.size();
  for (const auto& r : records) {
    if (r.freq_hz.size() != nbins || r.rbw_hz != first.rbw_hz)
      throw ConfigError("spectra do not share one frequency grid", "average_psd");
    for (std::size_t k = 0; k < nbins; ++k)
      if (std::abs(r.freq_hz[k] - first.freq_hz[k]) > 1e-9 * first.rbw_hz)
        throw ConfigError("spectra do not share one frequency grid", "average_psd");
  }

  SpectrumRecord out;
  out.freq_hz = first.freq_hz;
  out.rbw_hz = first.rbw_hz;
  out.psd.assign(nbins, 0.0);
  out.stderr_psd.assign(nbins, 0.0);
  out.n_avg = 0;
  for (const auto& r : records) out.n_avg += r.n_avg;

  const double nrec = double(records.size());
  for (std::size_t k = 0; k < nbins; ++k) {
    double m = 0.0;
    for (const auto& r : records) m += r.psd[k];
    m /= nrec;
    out.psd[k] = m;
    if (records.size() > 1) {
      double ss = 0.0;
      for (const auto& r : records) ss += (r.psd[k] - m) * (r.psd[k] - m);
      out.stderr_psd[k] = std::sqrt(ss / (nrec * (nrec - 1.0)));
    }
  }
  return out;
}

HwhmResult hwhm(const SpectrumRecord& spec, double center_hz, double search_window_hz) {
  HwhmResult res;
  const auto& f = spec.freq_hz;
  const auto& p = spec.psd;
  if (f.size() < 3) return res;

  std::size_t lo = 0, hi = f.size() - 1;
  while (lo < hi && f[lo] < center_hz - search_window_hz) ++lo;
  while (hi > lo && f[hi] > center_hz + search_window_hz) --hi;
  if (hi <= lo + 1) return res;

  std::size_t kpk = lo;
  for (std::size_t k = lo; k <= hi; ++k)
    if (p[k] > p[kpk]) kpk = k;
  const double half = 0.5 * p[kpk];
  if (!(half > 0.0)) return res;

  // walk outward to the first bin below half maximum, interpolate linearly
  double left = -1.0, right = -1.0;
  for (std::size_t k = kpk; k > lo; --k) {
    if (p[k - 1] < half) {
      const double frac = (p[k] - half) / (p[k] - p[k - 1]);
      left = f[kpk] - (f[k] - frac * (f[k] - f[k - 1]));
      break;
    }
  }
  for (std::size_t k = kpk; k < hi; ++k) {
    if (p[k + 1] < half) {
      const double frac = (p[k] - half) / (p[k] - p[k + 1]);
      right = (f[k] + frac * (f[k + 1] - f[k])) - f[kpk];
      break;
    }
  }
  if (left < 0.0 || right < 0.0) return res;  // no crossing inside the window

  res.hz = 0.5 * (left + right);
  res.err_hz = 0.5 * spec.rbw_hz;
  res.ok = true;
  return res;
}

}  // namespace snsim
