#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gfl/lattice.hpp"
#include "gfl/scalar.hpp"

namespace gfl {

/// Dense probability table over every configuration of a finite volume.
///
/// Entries are stored in canonical enumeration order (see
/// `configuration_index`). The constructor validates nonnegativity and
/// normalization: exact in rational mode, within `tolerance` otherwise.
class FiniteDistribution {
 public:
  FiniteDistribution(Volume volume, Alphabet alphabet, std::vector<Scalar> probs,
                     double tolerance = kDefaultTolerance);

  /// Normalizes nonnegative weights. Throws ValidationError if all are zero.
  static FiniteDistribution from_weights(Volume volume, Alphabet alphabet, std::vector<Scalar> weights,
                                         double tolerance = kDefaultTolerance);

  [[nodiscard]] const Volume& volume() const { return volume_; }
  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] const std::vector<Scalar>& probs() const { return probs_; }
  [[nodiscard]] std::size_t size() const { return probs_.size(); }
  [[nodiscard]] double tolerance() const { return tolerance_; }
  [[nodiscard]] NumericMode mode() const;

  [[nodiscard]] const Scalar& prob(const Configuration& c) const;
  [[nodiscard]] const Scalar& operator[](std::size_t i) const { return probs_[i]; }

 private:
  Volume volume_;
  Alphabet alphabet_;
  std::vector<Scalar> probs_;
  double tolerance_;
};

/// Lists the violated invariants of a candidate table; empty when valid.
std::vector<std::string> distribution_violations(const Volume& volume, const Alphabet& alphabet,
                                                 const std::vector<Scalar>& probs,
                                                 double tolerance = kDefaultTolerance);

/// Sums out the sites of p.volume() \ target.
FiniteDistribution marginalize(const FiniteDistribution& p, const Volume& target);

/// Every entry > 0 (floating entries must exceed the tolerance).
bool is_positive(const FiniteDistribution& p);

/// Equal tables: exact for rationals, entrywise `approx_equal` otherwise.
bool tables_equal(const std::vector<Scalar>& a, const std::vector<Scalar>& b, double tol = kDefaultTolerance);
/// max_i |a_i - b_i|, exact when both tables are rational.
Scalar sup_difference(const std::vector<Scalar>& a, const std::vector<Scalar>& b);
double sup_distance(const std::vector<Scalar>& a, const std::vector<Scalar>& b);

/// A random field restricted to a finite window: a consistent family of
/// finite-dimensional distributions.
class RandomFieldModel {
 public:
  virtual ~RandomFieldModel() = default;

  [[nodiscard]] virtual const Volume& window() const = 0;
  [[nodiscard]] virtual const Alphabet& alphabet() const = 0;
  [[nodiscard]] virtual NumericMode mode() const = 0;
  [[nodiscard]] virtual std::string describe() const = 0;

  /// Marginal law on any V inside the window.
  [[nodiscard]] virtual FiniteDistribution marginal(const Volume& v) const = 0;

  /// P_V(c) for V = c.volume(). The default reads it off `marginal`; models
  /// with closed forms override it so that large conditions stay cheap.
  [[nodiscard]] virtual Scalar probability(const Configuration& c) const;

  [[nodiscard]] double tolerance() const { return tolerance_; }
  void set_tolerance(double tol) { tolerance_ = tol; }

 protected:
  void require_in_window(const Volume& v) const;

 private:
  double tolerance_ = kDefaultTolerance;
};

using ModelPtr = std::shared_ptr<const RandomFieldModel>;

/// Random field given by one full table on the window; marginals are
/// computed by summation and memoized.
class TableField final : public RandomFieldModel {
 public:
  explicit TableField(FiniteDistribution table, std::string label = "table");

  const Volume& window() const override { return table_.volume(); }
  const Alphabet& alphabet() const override { return table_.alphabet(); }
  NumericMode mode() const override { return table_.mode(); }
  std::string describe() const override { return label_; }
  FiniteDistribution marginal(const Volume& v) const override;
  Scalar probability(const Configuration& c) const override;

  [[nodiscard]] const FiniteDistribution& table() const { return table_; }

 private:
  std::shared_ptr<const FiniteDistribution> cached_marginal(const Volume& v) const;

  FiniteDistribution table_;
  std::string label_;
  mutable std::mutex cache_mutex_;
  mutable std::map<Volume, std::shared_ptr<const FiniteDistribution>> cache_;
};

std::shared_ptr<TableField> table_field(const Volume& window, const Alphabet& alphabet, std::vector<Scalar> probs,
                                        double tolerance = kDefaultTolerance);

/// (P_S)_V == P_V for V ⊂ S ⊆ window.
bool check_marginal_consistency(const RandomFieldModel& m, const Volume& s, const Volume& v);

}  // namespace gfl
