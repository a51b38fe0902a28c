#pragma once

// Points and iterated projective bundles, bundles given by Chern roots or
// Chern-class data, and closed-immersion records.
//
// All geometric data is stored in reference (additive) coordinates: the
// root of a line bundle is its reference first Chern class, and a ChernData
// bundle stores its reference Chern classes. Orientations only enter when
// classes are computed (see classes.hpp).

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "orr/fgl.hpp"
#include "orr/ring.hpp"

namespace orr {

class Space;
class Bundle;
using SpacePtr = std::shared_ptr<const Space>;
struct DualityData;

class Bundle {
 public:
  enum class Kind { roots, chern_data };

  Bundle() = default;
  static Bundle from_roots(SpacePtr base, std::vector<Elem> roots);
  /// classes[k] is c_{k+1}; classes.size() == rank.
  static Bundle from_chern(SpacePtr base, std::vector<Elem> classes);
  static Bundle trivial(SpacePtr base, int rank);
  static Bundle line(SpacePtr base, const Elem& root);

  Kind kind() const { return kind_; }
  const SpacePtr& base() const { return base_; }
  int rank() const { return rank_; }
  const std::vector<Elem>& roots() const { return data_; }

  /// Reference Chern class c_i (1 for i = 0, 0 beyond the rank).
  Elem reference_chern(int i) const;
  /// Reference classes c_1..c_rank.
  std::vector<Elem> reference_classes() const;
  /// 1 + c_1 + ... + c_rank.
  Elem reference_total() const;

  /// Same bundle re-expressed over a space whose ring contains the base ring.
  Bundle pullback(const SpacePtr& space) const;
  /// Image under a ring map from the base ring to `space`'s ring.
  Bundle restricted(const Substitution& map, const SpacePtr& space) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::roots;
  SpacePtr base_;
  int rank_ = 0;
  std::vector<Elem> data_;  // roots or c_1..c_rank
};

Bundle bundle_sum(const Bundle& a, const Bundle& b);
Bundle bundle_dual(const Bundle& e);
Bundle bundle_tensor_line(const Bundle& e, const Bundle& line);

/// Formal difference plus - minus over one base.
struct VirtualBundle {
  Bundle plus;
  Bundle minus;

  int rank() const { return plus.rank() - minus.rank(); }
  static VirtualBundle of(const Bundle& b);
  VirtualBundle negated() const { return {minus, plus}; }
};

VirtualBundle operator+(const VirtualBundle& a, const VirtualBundle& b);

class Space : public std::enable_shared_from_this<Space> {
 public:
  static SpacePtr point(const Theory& theory);
  /// P(E) with tautological sub-line of first Chern class h = `generator`.
  static SpacePtr proj_bundle(const SpacePtr& base, const Bundle& e, const std::string& generator);
  static SpacePtr projective_space(int n, const Theory& theory, const std::string& generator = "h");

  const Theory& theory() const { return theory_; }
  const RingPtr& ring() const { return ring_; }
  bool is_point() const { return base_ == nullptr; }
  const SpacePtr& base() const { return base_; }
  /// The bundle E with this space = P(E) (invalid for a point).
  const Bundle& bundle() const { return bundle_; }
  int bundle_rank() const { return bundle_.rank(); }
  const std::string& generator_name() const { return generator_; }
  /// h = c_1 of the tautological sub-line.
  Elem generator() const;
  /// Dimension over the point.
  int dimension() const;

  /// Display name; set once by whoever declares the space.
  std::string label() const;
  void set_label(std::string label) const;

  /// Cached duality data per orientation key (for P(E) -> base).
  std::shared_ptr<const DualityData> cached_duality(const std::string& key) const;
  void store_duality(const std::string& key, std::shared_ptr<const DualityData> data) const;

 private:
  Space() = default;

  Theory theory_;
  RingPtr ring_;
  SpacePtr base_;
  Bundle bundle_;
  std::string generator_;

  mutable std::mutex mutex_;
  mutable std::string label_;
  mutable std::map<std::string, std::shared_ptr<const DualityData>> duality_;
};

/// Tautological sub-line lambda of P(E), root h.
Bundle tautological_sub(const SpacePtr& p);
/// xi = p^*E / lambda of rank r - 1, as ChernData.
Bundle universal_quotient(const SpacePtr& p);
/// T_p = lambda^dual (x) xi.
Bundle relative_tangent(const SpacePtr& p);
/// P(E + 1), the projective completion of E.
SpacePtr projective_completion(const Bundle& e, const std::string& generator);

/// A closed immersion Z -> X modeled by restriction, a module section of the
/// restriction, the fundamental class of Z in X and the normal bundle.
class Embedding {
 public:
  using Lift = std::function<Elem(const Elem&)>;
  using Fdl = std::function<Elem(const Orientation&)>;

  Embedding() = default;
  /// Runs the constructor checks (raises invalid_embedding):
  ///   restrict(lift(b)) = b on the source basis,
  ///   fdl * (b - lift(restrict(b))) = 0 on the target basis,
  ///   restrict(fdl) = c_top(normal) in reference coordinates.
  Embedding(std::string name, SpacePtr source, SpacePtr target, Substitution restrict, Lift lift, Fdl fdl,
            Bundle normal);

  const std::string& name() const { return name_; }
  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  int codim() const { return normal_.rank(); }
  const Bundle& normal() const { return normal_; }

  Elem restrict(const Elem& x) const { return restrict_(x.in(target_->ring())); }
  Elem lift(const Elem& z) const { return lift_(z.in(source_->ring())); }
  Elem fdl(const Orientation& o) const { return fdl_(o); }
  const Substitution& restriction_map() const { return restrict_; }

 private:
  std::string name_;
  SpacePtr source_;
  SpacePtr target_;
  Substitution restrict_;
  Lift lift_;
  Fdl fdl_;
  Bundle normal_;
};

/// Zero section X -> P(E + 1); the completion is created with `generator`.
Embedding embed_zero_section(const Bundle& e, const std::string& generator);
/// Linear P^m_X in P^n_X for two projective bundles of trivial bundles over
/// one base.
Embedding embed_linear(const SpacePtr& small, const SpacePtr& large);
/// Diagonal P -> P x_X P (the Kunneth square, created with `generator`).
Embedding embed_diagonal(const SpacePtr& p, const std::string& generator);
/// inner: Z -> Y, outer: Y -> X; the result is Z -> X.
Embedding embed_compose(const Embedding& inner, const Embedding& outer);
Embedding embed_identity(const SpacePtr& s);

}  // namespace orr
