#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "aggsent/error.hpp"

namespace aggsent {

/// x_i - mean(x).
inline std::vector<double> center(std::span<const double> x) {
  if (x.empty()) throw InputError("center: empty series");
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - m;
  return out;
}

namespace detail {

// Local weighted linear fit at xs over x[nleft..nright] (Cleveland's lowest).
inline bool lowess_local(std::span<const double> x, std::span<const double> y, double xs, double& ys,
                         std::size_t nleft, std::size_t nright, std::vector<double>& w, bool userw,
                         const std::vector<double>& rw) {
  const std::size_t n = x.size();
  const double range = x[n - 1] - x[0];
  const double h = std::max(xs - x[nleft], x[nright] - xs);
  const double h9 = 0.999 * h, h1 = 0.001 * h;
  double a = 0.0;
  std::size_t j = nleft;
  for (; j < n; ++j) {
    w[j] = 0.0;
    const double r = std::abs(x[j] - xs);
    if (r <= h9) {
      if (r <= h1) {
        w[j] = 1.0;
      } else {
        const double q = r / h;
        const double t = 1.0 - q * q * q;
        w[j] = t * t * t;
      }
      if (userw) w[j] *= rw[j];
      a += w[j];
    } else if (x[j] > xs) {
      break;
    }
  }
  const std::size_t nrt = j - 1;
  if (a <= 0.0) return false;
  for (j = nleft; j <= nrt; ++j) w[j] /= a;
  if (h > 0.0) {
    a = 0.0;
    for (j = nleft; j <= nrt; ++j) a += w[j] * x[j];
    double b = xs - a, c = 0.0;
    for (j = nleft; j <= nrt; ++j) c += w[j] * (x[j] - a) * (x[j] - a);
    if (std::sqrt(c) > 0.001 * range) {
      b /= c;
      for (j = nleft; j <= nrt; ++j) w[j] *= b * (x[j] - a) + 1.0;
    }
  }
  ys = 0.0;
  for (j = nleft; j <= nrt; ++j) ys += w[j] * y[j];
  return true;
}

}  // namespace detail

/// Robust locally weighted linear regression (Cleveland 1979) with tricube
/// neighbourhood weights and bisquare robustness weights. `x` must be
/// nondecreasing. The window holds max(2, floor(frac*n)) points.
inline std::vector<double> lowess(std::span<const double> x, std::span<const double> y, double frac = 0.25,
                                  int robustness_iterations = 2) {
  const std::size_t n = x.size();
  if (y.size() != n) throw InputError("lowess: x and y differ in length");
  if (n < 3) throw InputError("lowess: at least 3 points required");
  if (!(frac > 0.0 && frac <= 1.0)) throw ConfigError("lowess: frac must be in (0,1]");
  if (!std::is_sorted(x.begin(), x.end())) throw InputError("lowess: x must be sorted");

  const std::size_t ns = std::max<std::size_t>(
      2, std::min(n, static_cast<std::size_t>(frac * static_cast<double>(n) + 1e-7)));
  std::vector<double> ys(n), rw(n, 1.0), res(n), w(n);

  for (int iter = 0; iter <= robustness_iterations; ++iter) {
    std::size_t nleft = 0, nright = ns - 1, last = 0, i = 0;
    bool first = true;
    for (;;) {
      if (nright < n - 1) {
        if (x[i] - x[nleft] > x[nright + 1] - x[i]) {
          ++nleft;
          ++nright;
          continue;
        }
      }
      if (!detail::lowess_local(x, y, x[i], ys[i], nleft, nright, w, iter > 0, rw)) ys[i] = y[i];
      if (!first && last + 1 < i) {
        const double denom = x[i] - x[last];
        for (std::size_t j = last + 1; j < i; ++j) {
          const double al = (x[j] - x[last]) / denom;
          ys[j] = al * ys[i] + (1.0 - al) * ys[last];
        }
      }
      first = false;
      last = i;
      for (i = last + 1; i < n; ++i) {
        if (x[i] > x[last]) break;
        ys[i] = ys[last];
        last = i;
      }
      i = last + 1;
      if (last >= n - 1) break;
    }
    for (std::size_t k = 0; k < n; ++k) res[k] = y[k] - ys[k];
    if (iter == robustness_iterations) break;

    double sc = 0.0;
    for (double r : res) sc += std::abs(r);
    sc /= static_cast<double>(n);
    std::vector<double> ar(n);
    for (std::size_t k = 0; k < n; ++k) ar[k] = std::abs(res[k]);
    const std::size_t m1 = n / 2;
    std::nth_element(ar.begin(), ar.begin() + static_cast<std::ptrdiff_t>(m1), ar.end());
    double cmad;
    if (n % 2 == 0) {
      const double hi = ar[m1];
      const double lo = *std::max_element(ar.begin(), ar.begin() + static_cast<std::ptrdiff_t>(m1));
      cmad = 3.0 * (hi + lo);
    } else {
      cmad = 6.0 * ar[m1];
    }
    if (cmad < 1e-7 * sc) break;
    const double c9 = 0.999 * cmad, c1 = 0.001 * cmad;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = std::abs(res[k]);
      if (r <= c1) {
        rw[k] = 1.0;
      } else if (r <= c9) {
        const double q = r / cmad;
        rw[k] = (1.0 - q * q) * (1.0 - q * q);
      } else {
        rw[k] = 0.0;
      }
    }
  }
  return ys;
}

}  // namespace aggsent
