#pragma once

#include <span>
#include <vector>

namespace tdie {

/// Compactly supported piecewise polynomial. Piece j covers (knots[j], knots[j+1]]
/// and is stored as coefficients in the local variable s = t - knots[j].
/// The function vanishes outside (knots.front(), knots.back()].
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(std::vector<double> knots, std::vector<std::vector<double>> coefficients);

  double operator()(double t) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& piece(std::size_t j) const { return pieces_[j]; }
  std::size_t num_pieces() const { return pieces_.size(); }
  int degree(std::size_t j) const { return static_cast<int>(pieces_[j].size()) - 1; }

  double support_begin() const { return knots_.front(); }
  double support_end() const { return knots_.back(); }

  /// Value of piece j at local coordinate s (no support test).
  double eval_piece(std::size_t j, double s) const;

  PiecewisePolynomial derivative() const;

  /// Integral over the whole support.
  double integral() const;

  /// The running integral from the support start, cut off at the support end
  /// (so it jumps by -integral() there). Adding integral() * H(t - support_end)
  /// recovers the full antiderivative.
  PiecewisePolynomial compact_antiderivative() const;

  bool is_zero() const;

  PiecewisePolynomial scaled(double factor) const;

 private:
  std::vector<double> knots_;
  std::vector<std::vector<double>> pieces_;
};

/// Shifted piecewise Lagrange temporal basis of order p on a uniform grid.
///
/// T_i(t) is supported on ((i-1) dt, (i+p) dt]. On ((j-1) dt, j dt] the current is
/// interpolated from the samples j-p..j, so T_i there is the Lagrange cardinal
/// polynomial of node i over that stencil. The family {T_i} is a partition of unity
/// and T_i(j dt) = delta_ij.
class TemporalBasis {
 public:
  TemporalBasis(int order, double dt, int shift = 0);

  int order() const { return order_; }
  double dt() const { return dt_; }
  int shift() const { return shift_; }
  double duration() const { return (order_ + 1) * dt_; }

  double operator()(double t) const { return profile_(t); }
  double derivative(double t) const { return derivative_(t); }

  const PiecewisePolynomial& profile() const { return profile_; }
  const PiecewisePolynomial& derivative_profile() const { return derivative_; }

  /// Compact part of the antiderivative; the full antiderivative is this plus
  /// dt * H(t - support_end).
  const PiecewisePolynomial& charge_profile() const { return charge_; }

  /// The antiderivative of T_i from -infinity to t.
  double antiderivative(double t) const;

  TemporalBasis shifted(int by) const { return TemporalBasis(order_, dt_, shift_ + by); }

 private:
  int order_;
  double dt_;
  int shift_;
  PiecewisePolynomial profile_;
  PiecewisePolynomial derivative_;
  PiecewisePolynomial charge_;
};

}  // namespace tdie
