#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfl/specifications.hpp"

namespace gfl {

enum class Verdict { uniform_evidence, divergence_witness, inconclusive };

std::string_view to_string(Verdict v);

/// Gap sequence of one boundary generator along the filtration.
struct GeneratorTrace {
  std::string label;
  LimitEstimate estimate;

  /// Stage-to-stage sup gaps as doubles; the first stage has none.
  [[nodiscard]] std::vector<double> gaps() const;
};

struct Witness {
  std::size_t generator = 0;
  std::string label;
  /// Gaps from the second stage on.
  std::vector<double> gap_trace;
  /// Smallest of the last three gaps.
  double persistent_gap = 0.0;
};

/// Uniform: the last three sup gaps are non-increasing and the final one is
/// within `tol` (so at least four stages are needed); gaps at or below `tol`
/// compare as zero. Divergent: some generator keeps all of its last three
/// gaps at or above 10·tol.
Verdict decide_verdict(const std::vector<std::optional<double>>& sup_gaps,
                       const std::vector<std::vector<double>>& generator_gaps, double tol,
                       std::optional<std::size_t>* divergent_generator = nullptr);

struct ConvergenceReport {
  std::string model;
  std::string site;
  std::string filtration;
  std::string family;
  std::size_t family_size = 0;
  double gap_tol = 0.0;
  std::vector<std::size_t> volume_sizes;
  std::vector<std::optional<Scalar>> sup_gaps;
  std::vector<GeneratorTrace> traces;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;

  [[nodiscard]] std::string to_json() const;
  /// stage, volume_size, sup_gap, then one gap column per generator.
  [[nodiscard]] std::string to_csv() const;
};

/// g_t at every stage for every generator, the sup over generators of the
/// stage-to-stage gap, and the resulting verdict.
ConvergenceReport uniform_convergence_report(const RandomFieldModel& m, const Site& t, const Filtration& f,
                                             const BoundaryFamily& family, double gap_tol);

struct IndependenceReport {
  bool agree = false;
  double max_discrepancy = 0.0;
  /// Generator and filtration indices with the largest discrepancy.
  std::size_t worst_generator = 0;
  std::size_t worst_filtration = 0;
  /// tables[g][k]: deepest-stage kernel of generator g under filtration k.
  std::vector<std::vector<std::vector<Scalar>>> tables;
  std::vector<std::string> labels;

  [[nodiscard]] std::string to_json() const;
};

/// Agreement of deepest-stage kernels across filtrations, per generator.
IndependenceReport filtration_independence_check(const RandomFieldModel& m, const Site& t,
                                                 const std::vector<Filtration>& filtrations,
                                                 const BoundaryFamily& family, double tol);

/// Stage moduli of dependence on the far boundary.
struct ModulusReport {
  std::string quantity;
  std::vector<double> modulus;
  /// "quasilocal-evidence", "non-quasilocal-witness" or "inconclusive".
  std::string verdict;

  [[nodiscard]] std::string to_json() const;
};

/// The deepest stage is where every spliced boundary is evaluated, so its
/// modulus is zero by construction; verdicts read the stages before it.
std::string modulus_verdict(const std::vector<double>& modulus, double tol);

ModulusReport quasilocality_report(ModelPtr m, const Site& t, const Filtration& f, const BoundaryFamily& family,
                                   double tol);
ModulusReport quasilocality_report(const OnePointSpec& q, const Site& t, const Filtration& f,
                                   const BoundaryFamily& family, double tol);
ModulusReport energy_criterion_report(ModelPtr m, const Site& t, const Filtration& f, const BoundaryFamily& family,
                                      double tol);

enum class WitnessStrategy { oscillating_density, exhaustive_small, user_family };

std::string_view to_string(WitnessStrategy s);
WitnessStrategy parse_witness_strategy(std::string_view text);

struct WitnessSearch {
  WitnessStrategy strategy = WitnessStrategy::oscillating_density;
  std::size_t generators_searched = 0;
  /// Empty means "none found", which is never evidence of Gibbsianness.
  std::optional<Witness> witness;
  std::string note;
};

/// Oscillating densities (1/4, 3/4) and (0, 1) in both phases.
BoundaryFamily oscillating_density_family(const Alphabet& alphabet);

/// Looks for a generator whose one-point conditional sequence fails the
/// Cauchy criterion at resolution 10·tol over the last three stages.
/// `exhaustive_small` tries every boundary on F.last() \ t when there are at
/// most `exhaustive_limit` of them; `user_family` searches `family`.
WitnessSearch non_gibbs_witness(const RandomFieldModel& m, const Site& t, const Filtration& f,
                                WitnessStrategy strategy, double tol, const BoundaryFamily& family = {},
                                std::uint64_t exhaustive_limit = 1U << 16);

}  // namespace gfl
