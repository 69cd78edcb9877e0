#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfl/energy.hpp"

namespace gfl {

/// A family of one-point kernels q_t^z indexed by site and boundary.
///
/// The boundary is a configuration on (part of) window \ t; evaluators decide
/// how much of it they need and throw GeometryError when it is too small.
struct OnePointSpec {
  Volume window;
  Alphabet alphabet;
  OnePointKernelFn evaluate;
  bool positive = true;
  double tolerance = kDefaultTolerance;
  std::string label = "1-spec";
};

/// Kernels q_V^z over X^V, indexed by volume and boundary.
struct Specification {
  using KernelFn = std::function<std::vector<Scalar>(const Volume& v, const Configuration& boundary)>;
  Volume window;
  Alphabet alphabet;
  KernelFn evaluate;
  double tolerance = kDefaultTolerance;
  std::string label = "spec";
};

/// One-point transition energy field in ratio form: `evaluate(t, z)` returns
/// the row-major matrix exp δ_t^z(x, u).
struct OnePointTEF {
  using RatioFn = std::function<std::vector<Scalar>(const Site& t, const Configuration& boundary)>;
  Volume window;
  Alphabet alphabet;
  RatioFn evaluate;
  double tolerance = kDefaultTolerance;
  std::string label = "tef";

  /// δ_t^z(x, u) as a log.
  [[nodiscard]] double delta(const Site& t, const Configuration& z, Symbol x, Symbol u) const;
};

/// Finite-range interaction: Φ_A(x_A) for A a translate of a template.
///
/// Templates are stored translated so that their first site is the origin;
/// unspecified (template, configuration) pairs contribute zero.
class Potential {
 public:
  using Key = std::pair<Volume, std::vector<Symbol>>;

  Potential(Alphabet alphabet, std::size_t dimension);

  /// Adds `value` to the term of the template `offsets` at configuration `symbols`.
  void add_term(const Volume& offsets, const std::vector<Symbol>& symbols, const Scalar& value);

  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] std::size_t dimension() const { return dimension_; }
  /// Largest L∞ diameter over the templates.
  [[nodiscard]] int range() const { return range_; }
  [[nodiscard]] bool finite_range() const { return true; }
  [[nodiscard]] const std::map<Key, Scalar>& terms() const { return terms_; }
  [[nodiscard]] std::vector<Volume> templates() const;

  /// Φ_A(c) for the set A = c.volume(); zero when A is not a translate of a template.
  [[nodiscard]] Scalar term(const Configuration& c) const;

  /// Lines `offsets | symbols | value`, preceded by an `alphabet` line.
  [[nodiscard]] std::string str() const;
  static Potential parse(std::string_view text);

 private:
  Alphabet alphabet_;
  std::size_t dimension_;
  int range_ = 0;
  std::map<Key, Scalar> terms_;
};

/// Nearest-neighbour Ising potential on {-1,+1}: Φ_{s,s+e} = -β x_s x_{s+e}, Φ_s = -h x_s.
Potential ising_potential(double beta, double h, std::size_t dimension);

/// H_V^z(x) = Σ Φ_A(x z) over sets A meeting V and lying inside the window,
/// one entry per configuration x on V. Throws GeometryError when a needed site
/// of the window is neither in V nor in the boundary.
std::vector<Scalar> local_hamiltonian(const Potential& phi, const Volume& window, const Volume& v,
                                      const Configuration& boundary);

/// One-point Hamiltonian H_t^z(x) = Σ_{A ∋ t} Φ_A(x z) as extended reals.
std::vector<double> hamiltonian_from_potential(const Potential& phi, const Volume& window, const Site& t,
                                               const Configuration& boundary);

/// δ_t^z(x, u) = H_t^z(u) - H_t^z(x).
OnePointTEF tef_from_potential(const Potential& phi, const Volume& window);

/// Gibbs form of a TEF; evaluation throws InconsistentError on cocycle failure.
OnePointSpec onepoint_spec_from_tef(const OnePointTEF& d);
/// exp δ_t^z(x, u) = q_t^z(x) / q_t^z(u).
OnePointTEF tef_from_1spec(const OnePointSpec& q);
/// Extends a 1-spec to all finite volumes by the reconstruction product.
Specification spec_from_onepoint(const OnePointSpec& q);
/// Finite-conditional kernels of a model as a specification on its window.
Specification spec_from_model(ModelPtr m);
OnePointSpec onepoint_spec_from_model(ModelPtr m);

/// probs(x) ∝ exp(-H_V^z(x)), normalized by enumeration of X^V.
FiniteDistribution finite_volume_gibbs(const Potential& phi, const Volume& window, const Volume& v,
                                       const Configuration& boundary);

// ---------------------------------------------------------------- measure systems

/// Positive, not necessarily normalized, tables μ_V on X^V.
struct MeasureSystem {
  using TableFn = std::function<std::vector<Scalar>(const Volume& v)>;
  using PointFn = std::function<Scalar(const Configuration& c)>;
  Alphabet alphabet;
  TableFn table;
  /// Optional single-entry evaluator; preferred over `table` when set.
  PointFn point;
  std::string label = "measure system";
};

MeasureSystem measure_system_from_model(ModelPtr m);
/// μ_V(x) = exp(-Σ_{A ⊆ V} Φ_A(x_A)).
MeasureSystem measure_system_from_potential(const Potential& phi);

struct StagedTEF {
  /// One entry per stage; the first is empty.
  std::vector<std::optional<double>> sup_gaps;
  /// Per generator and stage, the matrix δ_t(x, u) in log form.
  std::vector<std::vector<std::vector<double>>> deltas;
  bool stabilized = false;
  /// Stage index from which all later gaps are within tolerance.
  std::optional<std::size_t> stabilized_from;
  bool diverging = false;
  /// Present when stabilized: evaluates on the deepest stage.
  std::optional<OnePointTEF> tef;
};

/// δ_t^{z_Λ}(x,u) = ln μ_{t∪Λ}(x z_Λ) / μ_{t∪Λ}(u z_Λ) for every stage Λ of F and
/// every generator of the family.
StagedTEF tef_from_measure_system(const MeasureSystem& mu, const Site& t, const Filtration& f,
                                  const BoundaryFamily& family, double tol = kDefaultTolerance);

// ---------------------------------------------------------------- validation

struct ValidationReport {
  std::string axiom;
  std::size_t fixtures_checked = 0;
  bool sampled = false;
  std::size_t violation_count = 0;
  /// At most `kMaxListed` entries, in fixture order.
  std::vector<std::string> violations;
  double max_residual = 0.0;

  static constexpr std::size_t kMaxListed = 100;

  [[nodiscard]] bool ok() const { return violation_count == 0; }
  [[nodiscard]] std::string to_json() const;
  void add_violation(std::string text);
  void merge(const ValidationReport& other);
};

/// Pair of sites with a boundary on window \ {t, s}.
struct PairFixture {
  Site t;
  Site s;
  Configuration z;
};

/// Volume, proper subvolume and boundary on window \ V.
struct VolumeFixture {
  Volume v;
  Volume inner;
  Configuration z;
};

struct FixturePlan {
  std::uint64_t exhaustive_limit = 1'000'000;
  std::size_t sample_size = 4096;
  std::uint64_t seed = 0x5eed;
};

struct PairFixtures {
  std::vector<PairFixture> fixtures;
  bool sampled = false;
};

struct VolumeFixtures {
  std::vector<VolumeFixture> fixtures;
  bool sampled = false;
};

/// All unordered site pairs with every boundary on the rest of the window,
/// or a seeded sample when that exceeds the plan's limit.
PairFixtures pair_fixtures(const Volume& window, const Alphabet& alphabet, const FixturePlan& plan = {});
/// Volumes of 2..max_volume sites, each nonempty proper subvolume, every boundary.
VolumeFixtures volume_fixtures(const Volume& window, const Alphabet& alphabet, std::size_t max_volume = 2,
                               const FixturePlan& plan = {});

/// Eight-factor identity q_t^{zy}(x)q_s^{zx}(v)q_t^{zv}(u)q_s^{zu}(y) = q_t^{zy}(u)q_s^{zu}(v)q_t^{zv}(x)q_s^{zx}(y).
/// Throws ValidationError on a non-normalized family.
ValidationReport validate_1spec(const OnePointSpec& q, const PairFixtures& fixtures);
/// q_V^z(xy) q_I^{zy}(u) = q_V^z(uy) q_I^{zy}(x).
ValidationReport validate_spec(const Specification& q, const VolumeFixtures& fixtures);
/// Per-site cocycle and two-site exchange.
ValidationReport validate_tef(const OnePointTEF& d, const PairFixtures& fixtures);

}  // namespace gfl
