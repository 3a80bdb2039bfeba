#include "tdie/temporal_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdie {

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> knots,
                                         std::vector<std::vector<double>> coefficients)
    : knots_(std::move(knots)), pieces_(std::move(coefficients)) {
  if (knots_.size() < 2 || pieces_.size() + 1 != knots_.size()) {
    throw std::invalid_argument("PiecewisePolynomial: need one piece per knot interval");
  }
  for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
    if (!(knots_[j + 1] > knots_[j])) throw std::invalid_argument("PiecewisePolynomial: knots must increase");
    if (pieces_[j].empty()) pieces_[j].push_back(0.0);
  }
}

double PiecewisePolynomial::eval_piece(std::size_t j, double s) const {
  const auto& c = pieces_[j];
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

double PiecewisePolynomial::operator()(double t) const {
  if (knots_.empty() || t <= knots_.front() || t > knots_.back()) return 0.0;
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return eval_piece(j, t - knots_[j]);
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
  std::vector<std::vector<double>> d(pieces_.size());
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const auto& c = pieces_[j];
    for (std::size_t k = 1; k < c.size(); ++k) d[j].push_back(static_cast<double>(k) * c[k]);
  }
  return PiecewisePolynomial(knots_, std::move(d));
}

double PiecewisePolynomial::integral() const {
  double total = 0.0;
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const double h = knots_[j + 1] - knots_[j];
    double hp = h;
    for (std::size_t k = 0; k < pieces_[j].size(); ++k) {
      total += pieces_[j][k] * hp / static_cast<double>(k + 1);
      hp *= h;
    }
  }
  return total;
}

PiecewisePolynomial PiecewisePolynomial::compact_antiderivative() const {
  std::vector<std::vector<double>> a(pieces_.size());
  double running = 0.0;
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const auto& c = pieces_[j];
    a[j].push_back(running);
    for (std::size_t k = 0; k < c.size(); ++k) a[j].push_back(c[k] / static_cast<double>(k + 1));
    const double h = knots_[j + 1] - knots_[j];
    double hp = h;
    for (std::size_t k = 0; k < c.size(); ++k) {
      running += c[k] * hp / static_cast<double>(k + 1);
      hp *= h;
    }
  }
  return PiecewisePolynomial(knots_, std::move(a));
}

bool PiecewisePolynomial::is_zero() const {
  for (const auto& c : pieces_) {
    for (double v : c) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

PiecewisePolynomial PiecewisePolynomial::scaled(double factor) const {
  auto p = pieces_;
  for (auto& c : p) {
    for (double& v : c) v *= factor;
  }
  return PiecewisePolynomial(knots_, std::move(p));
}

namespace {

// Coefficients (ascending powers of s) of the cardinal polynomial for node 0 over
// the integer stencil {m-p, ..., m}, expressed in s = tau - (m - 1).
std::vector<double> lagrange_piece(int order, int m) {
  std::vector<double> c{1.0};
  for (int k = m - order; k <= m; ++k) {
    if (k == 0) continue;
    // factor (tau - k) / (0 - k) with tau = s + m - 1
    const double shift = static_cast<double>(m - 1 - k);
    const double scale = -1.0 / static_cast<double>(k);
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j] += c[j] * shift * scale;
      next[j + 1] += c[j] * scale;
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

TemporalBasis::TemporalBasis(int order, double dt, int shift) : order_(order), dt_(dt), shift_(shift) {
  if (order < 0) throw std::invalid_argument("TemporalBasis: order must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("TemporalBasis: dt must be positive");
  std::vector<double> knots;
  std::vector<std::vector<double>> pieces;
  for (int m = 0; m <= order + 1; ++m) knots.push_back((shift + m - 1) * dt);
  for (int m = 0; m <= order; ++m) {
    auto c = lagrange_piece(order, m);
    double scale = 1.0;
    for (double& v : c) {
      v *= scale;
      scale /= dt;
    }
    pieces.push_back(std::move(c));
  }
  profile_ = PiecewisePolynomial(std::move(knots), std::move(pieces));
  derivative_ = profile_.derivative();
  charge_ = profile_.compact_antiderivative();
}

double TemporalBasis::antiderivative(double t) const {
  if (t <= profile_.support_begin()) return 0.0;
  if (t > profile_.support_end()) return profile_.integral();
  return charge_(t);
}

}  // namespace tdie
