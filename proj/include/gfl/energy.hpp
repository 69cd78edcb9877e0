#pragma once

#include <vector>

#include "gfl/conditionals.hpp"

namespace gfl {

/// Transition energies Δ_V^z(x, u) = ln g(x)/g(u) of one conditional kernel.
///
/// Values are held as the ratios exp Δ, so rational kernels give exact
/// energies and every algebraic law is checked multiplicatively. Logs are
/// taken only on request.
class TransitionEnergy {
 public:
  /// `ratios` is row-major: ratios[x * n + u] = exp Δ(x, u).
  TransitionEnergy(Volume volume, Configuration condition, Alphabet alphabet, std::vector<Scalar> ratios);

  /// Builds exp Δ from log-energies (floating).
  static TransitionEnergy from_logs(Volume volume, Configuration condition, Alphabet alphabet,
                                    const std::vector<double>& logs);

  [[nodiscard]] const Volume& volume() const { return volume_; }
  [[nodiscard]] const Configuration& condition() const { return condition_; }
  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  /// Number of configurations on the volume.
  [[nodiscard]] std::size_t states() const { return states_; }

  [[nodiscard]] const Scalar& ratio(std::size_t x, std::size_t u) const { return ratios_[x * states_ + u]; }
  [[nodiscard]] double value(std::size_t x, std::size_t u) const { return log(ratio(x, u)); }
  [[nodiscard]] const std::vector<Scalar>& ratios() const { return ratios_; }

 private:
  Volume volume_;
  Configuration condition_;
  Alphabet alphabet_;
  std::size_t states_;
  std::vector<Scalar> ratios_;
};

TransitionEnergy transition_energy(const ConditionalKernel& k);

/// Δ(x,x) = 0 and Δ(x,u) = -Δ(u,x).
bool check_antisymmetry(const TransitionEnergy& e, double tol = kDefaultTolerance);
/// Δ(x,u) = Δ(x,y) + Δ(y,u) for every triple.
bool check_cocycle(const TransitionEnergy& e, double tol = kDefaultTolerance);

/// Splitting of the joint energy on V ∪ I into energies on V and on I:
///   Δ_{V∪I}^z(xy, uv) = Δ_V^{zy}(x, u) + Δ_I^{zu}(y, v)
///                     = Δ_V^{zv}(x, u) + Δ_I^{zx}(y, v).
/// Both orders of the two-step path xy → uy → uv and xy → xv → uv are checked.
bool check_decomposition(const RandomFieldModel& m, const Volume& v, const Volume& i, const Configuration& z);

/// Δ_t^{zy}(x,u) + Δ_s^{zu}(y,v) = Δ_s^{zx}(y,v) + Δ_t^{zv}(x,u).
bool check_one_point_exchange(const RandomFieldModel& m, const Site& t, const Site& s, const Configuration& z);

/// g(x) = exp Δ(x,u) / Σ_α exp Δ(α,u). Throws InconsistentError if the cocycle fails.
ConditionalKernel gibbs_form_from_energy(const TransitionEnergy& e, const Configuration& reference);

/// Hamiltonian table of a kernel up to gauge.
///
/// Stored as Boltzmann weights w = exp(-H) so that rational energies stay
/// exact; a zero weight stands for H = +inf.
class HamiltonianTable {
 public:
  HamiltonianTable(Volume volume, Configuration condition, Alphabet alphabet, std::vector<Scalar> weights);
  /// From extended-real energies; +inf maps to a zero weight.
  static HamiltonianTable from_energies(Volume volume, Configuration condition, Alphabet alphabet,
                                        const std::vector<double>& energies);

  [[nodiscard]] const Volume& volume() const { return volume_; }
  [[nodiscard]] const Configuration& condition() const { return condition_; }
  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] const std::vector<Scalar>& weights() const { return weights_; }
  [[nodiscard]] const Scalar& weight(std::size_t x) const { return weights_[x]; }
  /// H(x) = -ln w(x); +inf for zero weight.
  [[nodiscard]] double value(std::size_t x) const;
  [[nodiscard]] bool is_finite() const;

 private:
  Volume volume_;
  Configuration condition_;
  Alphabet alphabet_;
  std::vector<Scalar> weights_;
};

/// H(x) = -Δ(x, gauge), so H(gauge) = 0 and Δ(x,u) = H(u) - H(x).
HamiltonianTable hamiltonian_from_energy(const TransitionEnergy& e, const Configuration& gauge);
/// Δ(x,u) = H(u) - H(x). Requires finite H.
TransitionEnergy energy_from_hamiltonian(const HamiltonianTable& h);
/// g(x) = exp(-H(x)) / Σ_α exp(-H(α)). Rejects infinite entries.
ConditionalKernel gibbs_form_from_hamiltonian(const HamiltonianTable& h);

/// H_{V∪I}^z(xy) + H_V^{zy}(u) = H_{V∪I}^z(uy) + H_V^{zy}(x) for Hamiltonians
/// derived from the model's kernels with the given gauges (first configuration
/// when omitted).
bool check_hamiltonian_consistency(const RandomFieldModel& m, const Volume& v, const Volume& i,
                                   const Configuration& z, std::size_t joint_gauge = 0, std::size_t part_gauge = 0);

/// For every stage Λ_n: sup over generator pairs (A, B) and (x, u) of
/// |Δ_t(x,u) at A's boundary - Δ_t(x,u) at the boundary A|Λ_n + B beyond|,
/// both evaluated at the deepest stage.
std::vector<double> energy_quasilocality_modulus(const OnePointKernelFn& kernels, const Site& t, const Filtration& f,
                                                 const BoundaryFamily& family, const Alphabet& alphabet);
std::vector<double> energy_quasilocality_modulus(std::shared_ptr<const RandomFieldModel> m, const Site& t,
                                                 const Filtration& f, const BoundaryFamily& family);

}  // namespace gfl
