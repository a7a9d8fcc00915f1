// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/filters.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ddframe/numerics.hpp"
#include "ddframe/subdivision.hpp"

namespace ddframe {

Filter::Filter(std::vector<double> coeffs, long offset)
    : coeffs_(std::move(coeffs)), offset_(offset) {
  size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0.0) ++lead;
  size_t tail = coeffs_.size();
  while (tail > lead && coeffs_[tail - 1] == 0.0) --tail;
  if (lead == tail) {
    coeffs_.clear();
    offset_ = 0;
    return;
  }
  offset_ += static_cast<long>(lead);
  coeffs_ = std::vector<double>(coeffs_.begin() + static_cast<long>(lead),
                                coeffs_.begin() + static_cast<long>(tail));
}

double Filter::sum() const {
  double s = 0.0;
  for (double c : coeffs_) s += c;
  return s;
}

double Filter::moment(int alpha) const {
  double s = 0.0;
  for (long k = first(); k <= last(); ++k) {
    s += at(k) * std::pow(static_cast<double>(k), alpha);
  }
  return s;
}

Filter Filter::reversed() const {
  std::vector<double> rev(coeffs_.rbegin(), coeffs_.rend());
  return empty() ? Filter{} : Filter(std::move(rev), -last());
}

Filter Filter::modulated() const {
  std::vector<double> out = coeffs_;
  for (long k = first(); k <= last(); ++k) {
    if (k & 1) out[static_cast<size_t>(k - first())] = -out[static_cast<size_t>(k - first())];
  }
  return Filter(std::move(out), offset_);
}

Filter Filter::shifted(long s) const { return Filter(coeffs_, offset_ + s); }

Filter Filter::scaled(double a) const {
  std::vector<double> out = coeffs_;
  for (double& c : out) c *= a;
  return Filter(std::move(out), offset_);
}

Filter Filter::canonical_sign() const {
  if (empty()) return *this;
  size_t arg = 0;
  for (size_t i = 1; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_[i]) > std::abs(coeffs_[arg])) arg = i;
  }
  return coeffs_[arg] < 0.0 ? scaled(-1.0) : *this;
}

Filter Filter::autocorrelation() const { return convolve(*this, reversed()); }

Filter convolve(const Filter& a, const Filter& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(static_cast<size_t>(a.size() + b.size() - 1), 0.0);
  for (long i = a.first(); i <= a.last(); ++i) {
    for (long j = b.first(); j <= b.last(); ++j) {
      out[static_cast<size_t>(i + j - a.first() - b.first())] += a.at(i) * b.at(j);
    }
  }
  return Filter(std::move(out), a.first() + b.first());
}

Filter dd_mask(int n) {
  if (n < 1) throw std::invalid_argument("dd_mask requires n >= 1");
  // Row 1 of the regular operator: weights of nodes 1-n..n at 1/2, giving
  // p(1-2j) for node j.
  std::vector<double> nodes(static_cast<size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) nodes[static_cast<size_t>(i)] = 1 - n + i;
  const Eigen::VectorXd w = midpoint_weights(nodes, 0.5);

  std::vector<double> coeffs(static_cast<size_t>(4 * n - 1), 0.0);
  const long offset = 1 - 2 * n;
  coeffs[static_cast<size_t>(-offset)] = 1.0;  // p(0)
  for (int i = 0; i < 2 * n; ++i) {
    const long k = 1 - 2 * (1 - n + i);  // index of node's odd coefficient
    coeffs[static_cast<size_t>(k - offset)] = w[i];
  }
  return Filter(std::move(coeffs), offset);
}

namespace {

// p(w) = (1 - y)^n B(y) with y = sin^2(pi w); B has the binomial
// coefficients C(n-1+k, k), k = 0..n-1.
std::vector<double> half_band_remainder(int n) {
  std::vector<double> b(static_cast<size_t>(n), 0.0);
  b[0] = 1.0;
  for (int k = 1; k < n; ++k) {
    b[static_cast<size_t>(k)] =
        b[static_cast<size_t>(k - 1)] * static_cast<double>(n - 1 + k) /
        static_cast<double>(k);
  }
  return b;
}

// Multiply the real polynomial by (x - r) for real r, or by the real
// quadratic from a conjugate pair.
void multiply_linear(std::vector<double>& p, double r) {
  std::vector<double> out(p.size() + 1, 0.0);
  for (size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i];
    out[i] -= r * p[i];
  }
  p = std::move(out);
}

void multiply_quadratic(std::vector<double>& p, double sum, double prod) {
  // times x^2 - sum*x + prod
  std::vector<double> out(p.size() + 2, 0.0);
  for (size_t i = 0; i < p.size(); ++i) {
    out[i + 2] += p[i];
    out[i + 1] -= sum * p[i];
    out[i] += prod * p[i];
  }
  p = std::move(out);
}

}  // namespace

Filter daubechies_factor(const Filter& p) {
  const long n = (1 - p.first()) / 2;
  if (p.empty() || p.first() != 1 - 2 * n || p.last() != 2 * n - 1 || n < 1) {
    throw std::invalid_argument("daubechies_factor expects a mask supported on {1-2n,...,2n-1}");
  }

  // Roots of the degree-(n-1) remainder, then one z-root per y-root inside
  // the closed unit disk; conjugate pairs stay paired.
  const std::vector<double> b = half_band_remainder(static_cast<int>(n));
  std::vector<std::complex<double>> y_roots;
  if (n > 1) y_roots = numerics::poly_roots(b);

  std::vector<double> poly{1.0};  // in the variable w = e^{-i 2 pi omega}
  for (long i = 0; i < n; ++i) multiply_linear(poly, -1.0);  // (w + 1)^n

  std::vector<bool> used(y_roots.size(), false);
  for (size_t i = 0; i < y_roots.size(); ++i) {
    if (used[i]) continue;
    const std::complex<double> y = y_roots[i];
    // w^2 - (2 - 4y) w + 1 = 0; the two roots are reciprocal.
    const std::complex<double> half_trace = 1.0 - 2.0 * y;
    const std::complex<double> disc = std::sqrt(half_trace * half_trace - 1.0);
    std::complex<double> w = half_trace - disc;
    if (std::abs(w) > 1.0) w = half_trace + disc;
    if (std::abs(w) > 1.0 + 1e-12) {
      throw std::runtime_error("spectral factorization failed");
    }
    used[i] = true;
    if (std::abs(y.imag()) <= 1e-12 * std::max(1.0, std::abs(y))) {
      multiply_linear(poly, w.real());
    } else {
      // consume the conjugate partner
      size_t partner = i;
      double best = std::numeric_limits<double>::infinity();
      for (size_t j = i + 1; j < y_roots.size(); ++j) {
        if (used[j]) continue;
        const double dist = std::abs(y_roots[j] - std::conj(y));
        if (dist < best) {
          best = dist;
          partner = j;
        }
      }
      if (partner == i) throw std::runtime_error("spectral factorization failed");
      used[partner] = true;
      multiply_quadratic(poly, 2.0 * w.real(), std::norm(w));
    }
  }

  // poly(w) = sum_j d(-j) w^j up to scale; normalize to sum(d) = 2.
  double at_one = 0.0;
  for (double c : poly) at_one += c;
  if (at_one == 0.0) throw std::runtime_error("spectral factorization failed");
  const double scale = 2.0 / at_one;

  std::vector<double> coeffs(poly.size());
  for (size_t j = 0; j < poly.size(); ++j) {
    coeffs[poly.size() - 1 - j] = scale * poly[j];  // coefficient d(-j)
  }
  Filter d(std::move(coeffs), 1 - 2 * n);

  Filter residual = d.autocorrelation().scaled(0.5);
  double err = 0.0;
  for (long k = std::min(residual.first(), p.first());
       k <= std::max(residual.last(), p.last()); ++k) {
    err = std::max(err, std::abs(residual.at(k) - p.at(k)));
  }
  if (err > 1e-12) throw std::runtime_error("spectral factorization failed");
  return d;
}

std::pair<Filter, Filter> regular_framelets(const Filter& d) {
  const long n = (1 - d.first()) / 2;
  if (d.empty() || d.first() != 1 - 2 * n || d.last() != 0 || n < 1) {
    throw std::invalid_argument("regular_framelets expects d supported on {1-2n,...,0}");
  }
  const Filter dm = d.modulated();
  // The coefficient reversal maps the symbol product to its negated
  // conjugate; p and q2 have real symbols, so the UEP identities are
  // preserved, and the reversed orientation is the one the worked examples
  // factor against.
  const Filter q1 = convolve(d, dm)
                        .scaled(std::sqrt(2.0) / 2.0)
                        .shifted(2 * n - 1)
                        .reversed()
                        .canonical_sign();
  const Filter q2 = dm.autocorrelation().scaled(0.5).canonical_sign();
  return {q1, q2};
}

RegularFrame build_regular_frame(int n) {
  RegularFrame frame;
  frame.p = dd_mask(n);
  frame.d = daubechies_factor(frame.p);
  std::tie(frame.q1, frame.q2) = regular_framelets(frame.d);
  return frame;
}

double uep_residual(const Filter& p, const std::vector<Filter>& framelets) {
  long lo = p.first(), hi = p.last();
  for (const Filter& q : framelets) {
    if (q.empty()) continue;
    lo = std::min(lo, q.first());
    hi = std::max(hi, q.last());
  }
  const long max_lag = hi - lo;
  double residual = 0.0;
  for (long l = -max_lag; l <= max_lag; ++l) {
    double a = 0.0, bsum = 0.0;
    for (long m = lo; m <= hi; ++m) {
      double term = p.at(m + l) * p.at(m);
      for (const Filter& q : framelets) term += q.at(m + l) * q.at(m);
      a += term;
      bsum += (m & 1) ? -term : term;
    }
    residual = std::max(residual, std::abs(a - (l == 0 ? 4.0 : 0.0)));
    residual = std::max(residual, std::abs(bsum));
  }
  return residual;
}

UepFamily uep_product(const Filter& a, const std::vector<Filter>& b_list,
                      const Filter& p, const std::vector<Filter>& q_list,
                      double tol) {
  if (uep_residual(a, b_list) > tol || uep_residual(p, q_list) > tol) {
    throw std::invalid_argument("inputs are not UEP-compliant");
  }
  UepFamily out;
  out.mask = convolve(a, p).scaled(0.5);
  for (const Filter& b : b_list) out.framelets.push_back(convolve(p, b).scaled(0.5));
  for (const Filter& q : q_list) out.framelets.push_back(convolve(a, q).scaled(0.5));
  for (const Filter& q : q_list) {
    for (const Filter& b : b_list) out.framelets.push_back(convolve(q, b).scaled(0.5));
  }
  return out;
}

}  // namespace ddframe
