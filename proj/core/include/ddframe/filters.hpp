// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_FILTERS_HPP
#define DDFRAME_FILTERS_HPP

#include <utility>
#include <vector>

namespace ddframe {

/// Finite real coefficient sequence with an explicit support offset.
/// Stored coefficients are canonically trimmed: the first and last entries
/// are nonzero (the all-zero filter is stored empty).
class Filter {
 public:
  Filter() = default;
  Filter(std::vector<double> coeffs, long offset);

  bool empty() const { return coeffs_.empty(); }
  long size() const { return static_cast<long>(coeffs_.size()); }
  long first() const { return offset_; }
  long last() const { return offset_ + size() - 1; }
  long offset() const { return offset_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double at(long k) const {
    return (k < first() || k > last()) ? 0.0
                                       : coeffs_[static_cast<size_t>(k - offset_)];
  }
  double sum() const;
  // sum_k coeffs(k) * k^alpha
  double moment(int alpha) const;

  Filter reversed() const;          // k -> -k
  Filter modulated() const;         // coeffs(k) -> (-1)^k coeffs(k)
  Filter shifted(long s) const;     // support moved by +s
  Filter scaled(double a) const;
  // Global sign fixed so the first coefficient of largest magnitude is
  // positive.
  Filter canonical_sign() const;
  Filter autocorrelation() const;   // convolve(*this, reversed())

 private:
  std::vector<double> coeffs_;
  long offset_ = 0;
};

Filter convolve(const Filter& a, const Filter& b);

/// Regular mask p with its Daubechies factor d and the two framelets.
struct RegularFrame {
  Filter p;
  Filter d;
  Filter q1;
  Filter q2;
};

/// Dubuc-Deslauriers 2n-point mask: interpolatory, support {1-2n,...,2n-1},
/// odd coefficients from degree-(2n-1) midpoint interpolation on uniform
/// nodes, sum = 2.
Filter dd_mask(int n);

/// Real spectral factor d of p with support {1-2n,...,0}, sum(d) = 2 and
/// (1/2) autocorrelation(d) = p coefficient-wise. Roots of the factor are
/// selected inside the closed unit disk. Throws std::runtime_error
/// ("spectral factorization failed") when root finding or the residual check
/// fails.
Filter daubechies_factor(const Filter& p);

/// The two framelets q1(w) = sqrt(2) e^{i 2 pi (2n-1) w} d(w) d(w - 1/2) and
/// q2(w) = |d(w - 1/2)|^2, realized in the coefficient domain and returned
/// with canonical global sign.
std::pair<Filter, Filter> regular_framelets(const Filter& d);

RegularFrame build_regular_frame(int n);

/// Max over lags l of |A(l) - 4 delta(l)| and |B(l)| with
///   A(l) = sum_m p(m+l) p(m) + sum_j sum_m q_j(m+l) q_j(m)
///   B(l) = sum_m (-1)^m [ p(m+l) p(m) + sum_j q_j(m+l) q_j(m) ],
/// the exact coefficient-domain form of the two UEP identities.
double uep_residual(const Filter& p, const std::vector<Filter>& framelets);

struct UepFamily {
  Filter mask;
  std::vector<Filter> framelets;
};

/// Product construction: given families (a, b_list) and (p, q_list) that both
/// satisfy the UEP, returns the family {p*b_j} u {a*q_j} u {q_j*b_k} for the
/// mask a*p (symbol products as half-normalized convolutions). Throws
/// std::invalid_argument ("inputs are not UEP-compliant") when either input
/// family fails uep_residual at tol.
UepFamily uep_product(const Filter& a, const std::vector<Filter>& b_list,
                      const Filter& p, const std::vector<Filter>& q_list,
                      double tol = 1e-10);

}  // namespace ddframe

#endif  // DDFRAME_FILTERS_HPP
