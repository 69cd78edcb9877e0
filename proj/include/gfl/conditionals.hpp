#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfl/fields.hpp"

namespace gfl {

/// A probability table on X^V attached to a condition on a disjoint volume.
class ConditionalKernel {
 public:
  ConditionalKernel(Volume target, Configuration condition, Alphabet alphabet, std::vector<Scalar> probs,
                    double tolerance = kDefaultTolerance);

  [[nodiscard]] const Volume& target() const { return target_; }
  [[nodiscard]] const Configuration& condition() const { return condition_; }
  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] const std::vector<Scalar>& probs() const { return probs_; }
  [[nodiscard]] std::size_t size() const { return probs_.size(); }
  [[nodiscard]] double tolerance() const { return tolerance_; }

  [[nodiscard]] const Scalar& prob(const Configuration& x) const;
  [[nodiscard]] const Scalar& operator[](std::size_t i) const { return probs_[i]; }
  [[nodiscard]] bool is_strictly_positive() const;

 private:
  Volume target_;
  Configuration condition_;
  Alphabet alphabet_;
  std::vector<Scalar> probs_;
  double tolerance_;
};

/// g_V^z(x) = P_{V∪Λ}(xz) / P_Λ(z) for z on Λ disjoint from V.
ConditionalKernel finite_conditional(const RandomFieldModel& m, const Volume& target, const Configuration& condition);

/// Distribution of x_t given a condition, as a vector over the alphabet.
using OnePointKernelFn = std::function<std::vector<Scalar>(const Site& t, const Configuration& condition)>;

/// One-point finite-conditional kernels of a model.
OnePointKernelFn one_point_kernels(std::shared_ptr<const RandomFieldModel> m);

// ---------------------------------------------------------------- boundaries

/// Produces a boundary configuration on F.last() \ target for a filtration.
/// Restrictions to the earlier stages are the stage conditions, so nested
/// restrictions are consistent by construction.
struct BoundaryGenerator {
  std::string label;
  std::function<Configuration(const Filtration& f, const Volume& target, const Alphabet& alphabet)> realize;
};

struct BoundaryFamily {
  std::vector<BoundaryGenerator> generators;
  std::string description;

  [[nodiscard]] std::size_t size() const { return generators.size(); }
};

BoundaryGenerator constant_boundary(Symbol s, const Alphabet& alphabet);
/// Symbol at each site drawn from a hash of (seed, site): identical under every filtration.
BoundaryGenerator random_boundary(std::uint64_t seed);
/// Restrictions of a fixed configuration, which must cover F.last() \ target.
BoundaryGenerator explicit_boundary(Configuration config, std::string label);
/// Fills each new shell of the filtration so that the fraction of sites carrying
/// `marked` among Λ_n \ target is as close to densities[n] as the previous stage allows.
/// The density list is cycled when the filtration is longer.
BoundaryGenerator density_boundary(std::vector<mpq_class> densities, Symbol marked, Symbol other,
                                   std::string label);
/// Constant target density.
BoundaryGenerator constant_density_boundary(const mpq_class& density, Symbol marked, Symbol other);
/// Densities alternating lo, hi, lo, ... along the stages.
BoundaryGenerator oscillating_density_boundary(const mpq_class& lo, const mpq_class& hi, Symbol marked, Symbol other);

/// Both constant boundaries plus `random_count` seeded random ones.
BoundaryFamily standard_family(const Alphabet& alphabet, std::size_t random_count, std::uint64_t seed);

/// Configuration that agrees with `inner` on `region` and with `outer` elsewhere.
Configuration splice(const Configuration& inner, const Configuration& outer, const Volume& region);

/// Kernels compared by the quasilocality moduli. For stage n and generators
/// A, B: `base` is the one-point kernel at A's deepest-stage boundary and
/// `spliced` the kernel at the boundary equal to A on Λ_n \ t and to B beyond.
struct SplicedPair {
  std::size_t stage = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  std::vector<Scalar> base;
  std::vector<Scalar> spliced;
};

std::vector<SplicedPair> spliced_kernels(const OnePointKernelFn& kernels, const Site& t, const Filtration& f,
                                         const BoundaryFamily& family, const Alphabet& alphabet);

// ---------------------------------------------------------------- limits

struct LimitStage {
  std::size_t volume_size = 0;  // |Λ_n \ V|
  std::vector<Scalar> values;
  std::optional<Scalar> sup_gap_to_previous;
};

struct LimitEstimate {
  Volume target;
  Configuration boundary;
  std::vector<LimitStage> stages;
  bool converged = false;
  bool gaps_monotone = false;
  std::optional<Scalar> final_gap;

  /// stage, volume_size, one column per target configuration, sup_gap_to_previous
  [[nodiscard]] std::string to_csv(const Alphabet& alphabet) const;
};

/// Evaluates g_V at the restriction of `boundary` to every stage Λ_n \ V.
LimitEstimate limit_along_filtration(const RandomFieldModel& m, const Volume& target, const Configuration& boundary,
                                     const Filtration& f, const Scalar& gap_tol);

// ---------------------------------------------------------------- identities

/// g_V^z(xy) g_I^{zy}(u) = g_V^z(uy) g_I^{zy}(x) for all x,u on I and y on V \ I.
bool check_pair_consistency(const RandomFieldModel& m, const Volume& inner, const Volume& outer,
                            const Configuration& z);

/// The eight-factor exchange identity of one-point conditionals at sites t, s.
bool check_one_point_consistency(const RandomFieldModel& m, const Site& t, const Site& s, const Configuration& z);

/// Rebuilds g_V^z from one-point kernels by the telescoping product
///   prod_j g_{t_j}^{z (xu)_j}(x_{t_j}) / g_{t_j}^{z (xu)_j}(u_{t_j}),
/// where (xu)_j takes x on t_1..t_{j-1} and u on t_{j+1}..t_n, then normalizes
/// over x. `reference` defaults to the all-first-symbol configuration and
/// `order` to the canonical order of V.
ConditionalKernel reconstruct_from_one_point(const OnePointKernelFn& one_point, const Alphabet& alphabet,
                                             const Volume& target, const Configuration& z,
                                             const std::optional<Configuration>& reference = std::nullopt,
                                             std::span<const Site> order = {});

/// Smallest r <= max_r such that one-point kernels at t depend only on the
/// condition inside ball(t, r). Exhaustive over conditions when there are at
/// most `exhaustive_limit` of them, seeded sampling otherwise.
std::optional<int> markov_radius(const RandomFieldModel& m, const Site& t, int max_r,
                                 std::uint64_t exhaustive_limit = 1'000'000, std::uint64_t seed = 0x5eed);

}  // namespace gfl
