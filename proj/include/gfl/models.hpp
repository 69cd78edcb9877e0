#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gfl/fields.hpp"

namespace gfl {

/// Independent sites with P(x_t = 1) = p on the binary alphabet.
class ProductField final : public RandomFieldModel {
 public:
  ProductField(Volume window, Scalar p);

  const Volume& window() const override { return window_; }
  const Alphabet& alphabet() const override { return alphabet_; }
  NumericMode mode() const override { return p_.mode(); }
  std::string describe() const override;
  FiniteDistribution marginal(const Volume& v) const override;
  Scalar probability(const Configuration& c) const override;

 private:
  Volume window_;
  Alphabet alphabet_ = Alphabet::binary();
  Scalar p_;
};

ModelPtr bernoulli_product(const Volume& window, const Scalar& p);

/// One of the two Markov chains on sites 1..N with spins {-1,+1} whose prefix
/// laws are P_{1..n}(x) = Π_{j<n} (1 + c_j x_j x_{j+1})/2 · (1 ± x_n k_n)/2,
/// with k_N = κ and k_t = c_t k_{t+1}.
class MarkovChainPair final : public RandomFieldModel {
 public:
  MarkovChainPair(std::vector<Scalar> couplings, Scalar kappa, int sign);

  const Volume& window() const override { return window_; }
  const Alphabet& alphabet() const override { return alphabet_; }
  NumericMode mode() const override;
  std::string describe() const override;
  FiniteDistribution marginal(const Volume& v) const override;
  Scalar probability(const Configuration& c) const override;

  [[nodiscard]] int horizon() const { return static_cast<int>(k_.size()); }
  [[nodiscard]] int sign() const { return sign_; }
  /// c_j for 1 <= j < N.
  [[nodiscard]] const Scalar& coupling(int j) const { return c_.at(static_cast<std::size_t>(j - 1)); }
  /// k_t for 1 <= t <= N.
  [[nodiscard]] const Scalar& k(int t) const { return k_.at(static_cast<std::size_t>(t - 1)); }

 private:
  Volume window_;
  Alphabet alphabet_ = Alphabet::spins();
  std::vector<Scalar> c_;
  std::vector<Scalar> k_;
  Scalar kappa_;
  int sign_;
};

/// (P⁺, P⁻) for horizon N, couplings c_1..c_{N-1} and tail κ, all in (0, 1).
std::pair<ModelPtr, ModelPtr> example1_pair(int horizon, const std::vector<Scalar>& couplings, const Scalar& kappa);
/// Same coupling c at every bond.
std::pair<ModelPtr, ModelPtr> example1_pair(int horizon, const Scalar& coupling, const Scalar& kappa);

/// (1 + c_{t-1} y_{t-1} x)(1 + c_t x y_{t+1}) / (2 (1 + c_{t-1} c_t y_{t-1} y_{t+1})), spins as ±1.
Scalar example1_interior_conditional(const Scalar& c_prev, const Scalar& c_next, int y_prev, int x, int y_next);
/// (1 + c_1 x y_2) / 2.
Scalar example1_first_conditional(const Scalar& c1, int x, int y2);

/// Exchangeable binary field: a Bernoulli(p) product with p drawn from the
/// density τ p^{τ-1} on [0, 1].
class BernoulliMixture final : public RandomFieldModel {
 public:
  BernoulliMixture(Scalar tau, Volume window);

  const Volume& window() const override { return window_; }
  const Alphabet& alphabet() const override { return alphabet_; }
  NumericMode mode() const override { return exact_ ? NumericMode::rational : NumericMode::floating; }
  std::string describe() const override;
  FiniteDistribution marginal(const Volume& v) const override;
  Scalar probability(const Configuration& c) const override;

  [[nodiscard]] const Scalar& tau() const { return tau_; }
  /// τ B(k + τ, n - k + 1): probability of one configuration with k ones on n sites.
  [[nodiscard]] Scalar weight(std::size_t ones, std::size_t sites) const;

 private:
  Scalar tau_;
  Volume window_;
  Alphabet alphabet_ = Alphabet::binary();
  bool exact_;
  long tau_int_ = 0;
};

/// Exact mode requires a positive integer τ; any other τ gives a floating model.
ModelPtr example2_model(const Scalar& tau, const Volume& window);

/// (k + τ) / (n + τ + 1): conditional probability of a one given k ones among n conditioned sites.
Scalar example2_conditional(std::size_t ones, std::size_t sites, const Scalar& tau);

/// -x ln p - (1 - x) ln(1 - p) for p in (0, 1); at p in {0, 1} the value is 0 when
/// the symbol is the almost sure one and +inf otherwise.
double example2_limiting_hamiltonian(const Scalar& p, int x);

/// Nearest-neighbour Ising field on the box of side `side` in `dimension`
/// dimensions, with free boundary at the window edge, as a full table.
ModelPtr ising_demo(double beta, double h, std::size_t dimension, int side);

/// Box of side L with coordinates 0..L-1 in each of `dimension` axes.
Volume window_box(std::size_t dimension, int side);

/// Parses `example1:N=8,c=1/2,kappa=1/2`, `example2:tau=1,window=12`,
/// `ising:beta=0.4,d=1,window=11`, `product:p=1/2,window=9` or `table:<path>`.
ModelPtr model_from_descriptor(const std::string& descriptor, NumericMode mode = NumericMode::rational);

}  // namespace gfl
