#pragma once

// Formal group laws, orientations and cohomology theories.
//
// Every theory has one reference law, the additive law x + y. An orientation
// is a series theta(t) = t + O(t^2); it sends the reference first Chern class
// x of a line bundle to theta(x), and carries the conjugated law
//     F_theta(x, y) = theta(theta^-1(x) + theta^-1(y)).

#include <memory>
#include <string>
#include <vector>

#include "orr/series.hpp"

namespace orr {

class FormalGroupLaw {
 public:
  FormalGroupLaw() = default;
  /// F must be a series in two variables.
  FormalGroupLaw(std::string name, TruncatedSeries f);

  const std::string& name() const { return name_; }
  const TruncatedSeries& series() const { return f_; }
  const RingPtr& ring() const { return f_.ring(); }
  int order() const { return f_.order(); }

  /// Coefficient a_ij of x^i y^j.
  Elem coefficient(int i, int j) const;

  /// F(a, b) for nilpotent a, b.
  Elem operator()(const Elem& a, const Elem& b) const;

 private:
  std::string name_;
  TruncatedSeries f_;
};

FormalGroupLaw fgl_additive(const RingPtr& coeffs, int order);
/// x + y - beta x y; the ring must contain beta.
FormalGroupLaw fgl_multiplicative(const RingPtr& coeffs, int order);

/// Formal inverse iota(x) with F(x, iota(x)) = 0.
TruncatedSeries fgl_inverse(const FormalGroupLaw& f);

struct FglReport {
  TruncatedSeries left_unit;       // F(x, 0) - x
  TruncatedSeries right_unit;      // F(0, y) - y
  TruncatedSeries commutativity;   // F(x, y) - F(y, x)
  TruncatedSeries associativity;   // F(F(x, y), z) - F(x, F(y, z))
  bool weight_homogeneous = true;  // a_ij has weight 1 - i - j

  bool passed() const;
};

FglReport fgl_check(const FormalGroupLaw& f);

class Orientation {
 public:
  Orientation() = default;
  /// theta must be univariate with theta(0) = 0 and linear coefficient 1.
  Orientation(std::string name, TruncatedSeries theta);

  static Orientation identity(const RingPtr& coeffs, int order);
  /// (1 - exp(-beta t)) / beta.
  static Orientation multiplicative(const RingPtr& coeffs, int order);
  /// t + b1 t^2 + ... + bk t^(k+1).
  static Orientation universal(const RingPtr& coeffs, int order, int k);

  const std::string& name() const { return name_; }
  const TruncatedSeries& theta() const { return theta_; }
  const TruncatedSeries& theta_inverse() const { return data_->inverse; }
  const FormalGroupLaw& law() const { return data_->law; }
  const RingPtr& ring() const { return theta_.ring(); }
  int order() const { return theta_.order(); }
  /// True only for the exact identity series built by identity().
  bool is_identity() const { return data_->identity; }

  /// Key identifying the series (used for caches).
  const std::string& key() const { return data_->key; }

  /// theta(x) for a reference class x in the augmentation ideal.
  Elem apply(const Elem& x) const;

 private:
  struct Data {
    TruncatedSeries inverse;
    FormalGroupLaw law;
    bool identity = false;
    std::string key;
  };
  std::string name_;
  TruncatedSeries theta_;
  std::shared_ptr<const Data> data_;
};

/// The conjugated law of an orientation (computed directly, not cached).
FormalGroupLaw fgl_from_orientation(const Orientation& o);

/// Phi = theta1 o theta2^-1, the series with Phi(c1^(2)) = c1^(1).
TruncatedSeries comparison_series(const Orientation& theta1, const Orientation& theta2);

/// A coefficient ring with its family of orientations.
class Theory {
 public:
  enum class Kind { additive, multiplicative, universal };

  static Theory additive(int order = 10);
  static Theory multiplicative(int order = 10);
  static Theory universal(int k, int order = 10);
  /// "additive", "multiplicative" or "universal:k".
  static Theory parse(const std::string& name, int order = 10);

  Kind kind() const { return kind_; }
  int universal_rank() const { return k_; }
  int order() const { return order_; }
  const RingPtr& point_ring() const { return point_; }
  std::string name() const;

  /// Orientations available in this theory: identity, then mult (Laurent)
  /// or u1..uk (universal).
  const std::vector<Orientation>& orientations() const { return *orientations_; }
  const Orientation& orientation(const std::string& name) const;
  const Orientation& identity() const { return orientations().front(); }

 private:
  Kind kind_ = Kind::additive;
  int k_ = 0;
  int order_ = 10;
  RingPtr point_;
  std::shared_ptr<const std::vector<Orientation>> orientations_;
};

}  // namespace orr
