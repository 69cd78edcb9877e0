#include "gfl/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfl/error.hpp"

namespace gfl {

TransitionEnergy::TransitionEnergy(Volume volume, Configuration condition, Alphabet alphabet,
                                   std::vector<Scalar> ratios)
    : volume_(std::move(volume)),
      condition_(std::move(condition)),
      alphabet_(std::move(alphabet)),
      states_(configuration_count(volume_, alphabet_)),
      ratios_(std::move(ratios)) {
  if (ratios_.size() != states_ * states_) throw DomainError("transition energy table has the wrong size");
  for (const auto& r : ratios_) {
    if (r.sign() <= 0) throw PositivityError("transition energy ratio " + r.str() + " is not positive");
  }
}

TransitionEnergy TransitionEnergy::from_logs(Volume volume, Configuration condition, Alphabet alphabet,
                                             const std::vector<double>& logs) {
  std::vector<Scalar> ratios;
  ratios.reserve(logs.size());
  for (double d : logs) ratios.emplace_back(std::exp(d));
  return TransitionEnergy(std::move(volume), std::move(condition), std::move(alphabet), std::move(ratios));
}

TransitionEnergy transition_energy(const ConditionalKernel& k) {
  const std::size_t n = k.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (k[x].sign() <= 0) {
      throw PositivityError("kernel entry " + configuration_at(k.target(), k.alphabet().size(), x).str(k.alphabet()) +
                            " is not positive");
    }
  }
  std::vector<Scalar> ratios;
  ratios.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t u = 0; u < n; ++u) ratios.push_back(k[x] / k[u]);
  }
  return TransitionEnergy(k.target(), k.condition(), k.alphabet(), std::move(ratios));
}

bool check_antisymmetry(const TransitionEnergy& e, double tol) {
  for (std::size_t x = 0; x < e.states(); ++x) {
    if (!approx_equal(e.ratio(x, x), Scalar(1), tol)) return false;
    for (std::size_t u = 0; u < x; ++u) {
      if (!approx_equal(e.ratio(x, u) * e.ratio(u, x), Scalar(1), tol)) return false;
    }
  }
  return true;
}

bool check_cocycle(const TransitionEnergy& e, double tol) {
  const std::size_t n = e.states();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t u = 0; u < n; ++u) {
        if (!approx_equal(e.ratio(x, u), e.ratio(x, y) * e.ratio(y, u), tol)) return false;
      }
    }
  }
  return true;
}

bool check_decomposition(const RandomFieldModel& m, const Volume& v, const Volume& i, const Configuration& z) {
  if (v.empty() || i.empty() || !v.is_disjoint_from(i)) throw DomainError("check_decomposition needs disjoint V, I");
  const Alphabet& a = m.alphabet();
  const double tol = m.tolerance();
  const auto joint = transition_energy(finite_conditional(m, v.unite(i), z));
  const auto xs = enumerate_configurations(v, a);
  const auto ys = enumerate_configurations(i, a);

  // Energies on V given each configuration of I, and on I given each configuration of V.
  std::vector<TransitionEnergy> on_v;
  std::vector<TransitionEnergy> on_i;
  for (const auto& y : ys) on_v.push_back(transition_energy(finite_conditional(m, v, concat(z, y))));
  for (const auto& x : xs) on_i.push_back(transition_energy(finite_conditional(m, i, concat(z, x))));

  const std::size_t q = a.size();
  auto joint_index = [&](std::size_t xi, std::size_t yi) {
    return configuration_index(concat(xs[xi], ys[yi]), q);
  };
  for (std::size_t x = 0; x < xs.size(); ++x) {
    for (std::size_t u = 0; u < xs.size(); ++u) {
      for (std::size_t y = 0; y < ys.size(); ++y) {
        for (std::size_t w = 0; w < ys.size(); ++w) {
          const Scalar& lhs = joint.ratio(joint_index(x, y), joint_index(u, w));
          // xy -> uy -> uw
          if (!approx_equal(lhs, on_v[y].ratio(x, u) * on_i[u].ratio(y, w), tol)) return false;
          // xy -> xw -> uw
          if (!approx_equal(lhs, on_v[w].ratio(x, u) * on_i[x].ratio(y, w), tol)) return false;
        }
      }
    }
  }
  return true;
}

bool check_one_point_exchange(const RandomFieldModel& m, const Site& t, const Site& s, const Configuration& z) {
  if (t == s) throw DomainError("check_one_point_exchange needs two distinct sites");
  const std::size_t q = m.alphabet().size();
  const double tol = m.tolerance();
  std::vector<TransitionEnergy> et;  // et[b] = Δ_t^{z, s=b}
  std::vector<TransitionEnergy> es;  // es[a] = Δ_s^{z, t=a}
  for (std::size_t b = 0; b < q; ++b) {
    const auto sym = static_cast<Symbol>(b);
    et.push_back(transition_energy(finite_conditional(m, Volume{t}, concat(z, Configuration(Volume{s}, {sym})))));
    es.push_back(transition_energy(finite_conditional(m, Volume{s}, concat(z, Configuration(Volume{t}, {sym})))));
  }
  for (std::size_t x = 0; x < q; ++x) {
    for (std::size_t u = 0; u < q; ++u) {
      for (std::size_t y = 0; y < q; ++y) {
        for (std::size_t v = 0; v < q; ++v) {
          const Scalar lhs = et[y].ratio(x, u) * es[u].ratio(y, v);
          const Scalar rhs = es[x].ratio(y, v) * et[v].ratio(x, u);
          if (!approx_equal(lhs, rhs, tol)) return false;
        }
      }
    }
  }
  return true;
}

ConditionalKernel gibbs_form_from_energy(const TransitionEnergy& e, const Configuration& reference) {
  if (reference.volume() != e.volume()) throw DomainError("reference configuration must live on the energy volume");
  if (!check_cocycle(e)) throw InconsistentError("transition energy violates the cocycle law");
  const std::size_t u = configuration_index(reference, e.alphabet().size());
  std::vector<Scalar> probs;
  probs.reserve(e.states());
  Scalar total(0);
  for (std::size_t x = 0; x < e.states(); ++x) {
    probs.push_back(e.ratio(x, u));
    total += probs.back();
  }
  for (auto& p : probs) p /= total;
  return ConditionalKernel(e.volume(), e.condition(), e.alphabet(), std::move(probs));
}

// ---------------------------------------------------------------- Hamiltonians

HamiltonianTable::HamiltonianTable(Volume volume, Configuration condition, Alphabet alphabet,
                                   std::vector<Scalar> weights)
    : volume_(std::move(volume)),
      condition_(std::move(condition)),
      alphabet_(std::move(alphabet)),
      weights_(std::move(weights)) {
  if (weights_.size() != configuration_count(volume_, alphabet_)) {
    throw DomainError("Hamiltonian table has the wrong size");
  }
  for (const auto& w : weights_) {
    if (w.sign() < 0) throw ArgumentError("negative Boltzmann weight");
  }
}

HamiltonianTable HamiltonianTable::from_energies(Volume volume, Configuration condition, Alphabet alphabet,
                                                 const std::vector<double>& energies) {
  std::vector<Scalar> w;
  w.reserve(energies.size());
  for (double h : energies) {
    if (std::isnan(h) || h == -std::numeric_limits<double>::infinity()) {
      throw ArgumentError("Hamiltonian values must be finite or +inf");
    }
    w.emplace_back(std::isinf(h) ? 0.0 : std::exp(-h));
  }
  return HamiltonianTable(std::move(volume), std::move(condition), std::move(alphabet), std::move(w));
}

double HamiltonianTable::value(std::size_t x) const {
  const Scalar& w = weights_[x];
  if (w.is_zero()) return std::numeric_limits<double>::infinity();
  return -log(w);
}

bool HamiltonianTable::is_finite() const {
  return std::none_of(weights_.begin(), weights_.end(), [](const Scalar& w) { return w.is_zero(); });
}

HamiltonianTable hamiltonian_from_energy(const TransitionEnergy& e, const Configuration& gauge) {
  if (gauge.volume() != e.volume()) throw DomainError("gauge configuration must live on the energy volume");
  const std::size_t g = configuration_index(gauge, e.alphabet().size());
  std::vector<Scalar> w;
  w.reserve(e.states());
  for (std::size_t x = 0; x < e.states(); ++x) w.push_back(e.ratio(x, g));
  return HamiltonianTable(e.volume(), e.condition(), e.alphabet(), std::move(w));
}

TransitionEnergy energy_from_hamiltonian(const HamiltonianTable& h) {
  if (!h.is_finite()) throw PositivityError("Hamiltonian has infinite entries");
  const std::size_t n = h.size();
  std::vector<Scalar> ratios;
  ratios.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t u = 0; u < n; ++u) ratios.push_back(h.weight(x) / h.weight(u));
  }
  return TransitionEnergy(h.volume(), h.condition(), h.alphabet(), std::move(ratios));
}

ConditionalKernel gibbs_form_from_hamiltonian(const HamiltonianTable& h) {
  if (!h.is_finite()) throw PositivityError("Gibbs form needs a finite Hamiltonian");
  Scalar total(0);
  for (const auto& w : h.weights()) total += w;
  std::vector<Scalar> probs;
  probs.reserve(h.size());
  for (const auto& w : h.weights()) probs.push_back(w / total);
  return ConditionalKernel(h.volume(), h.condition(), h.alphabet(), std::move(probs));
}

bool check_hamiltonian_consistency(const RandomFieldModel& m, const Volume& v, const Volume& i,
                                   const Configuration& z, std::size_t joint_gauge, std::size_t part_gauge) {
  if (v.empty() || i.empty() || !v.is_disjoint_from(i)) {
    throw DomainError("check_hamiltonian_consistency needs disjoint V, I");
  }
  const Alphabet& a = m.alphabet();
  const std::size_t q = a.size();
  const Volume joint_vol = v.unite(i);
  const auto e_joint = transition_energy(finite_conditional(m, joint_vol, z));
  const auto h_joint = hamiltonian_from_energy(e_joint, configuration_at(joint_vol, q, joint_gauge));
  const auto xs = enumerate_configurations(v, a);
  for (const auto& y : enumerate_configurations(i, a)) {
    const auto e_part = transition_energy(finite_conditional(m, v, concat(z, y)));
    const auto h_part = hamiltonian_from_energy(e_part, xs.at(part_gauge));
    for (std::size_t x = 0; x < xs.size(); ++x) {
      const std::size_t xy = configuration_index(concat(xs[x], y), q);
      for (std::size_t u = 0; u < xs.size(); ++u) {
        const std::size_t uy = configuration_index(concat(xs[u], y), q);
        // exp(-(H(xy) + H(u))) == exp(-(H(uy) + H(x)))
        if (!approx_equal(h_joint.weight(xy) * h_part.weight(u), h_joint.weight(uy) * h_part.weight(x),
                          m.tolerance())) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<double> energy_quasilocality_modulus(const OnePointKernelFn& kernels, const Site& t, const Filtration& f,
                                                 const BoundaryFamily& family, const Alphabet& alphabet) {
  std::vector<double> modulus(f.size(), 0.0);
  const std::size_t q = alphabet.size();
  for (const auto& p : spliced_kernels(kernels, t, f, family, alphabet)) {
    for (std::size_t x = 0; x < q; ++x) {
      for (std::size_t u = 0; u < q; ++u) {
        if (x == u) continue;
        if (p.base[x].sign() <= 0 || p.base[u].sign() <= 0 || p.spliced[x].sign() <= 0 || p.spliced[u].sign() <= 0) {
          throw PositivityError("zero one-point probability in energy modulus");
        }
        const double d = std::fabs(log(p.base[x] / p.base[u]) - log(p.spliced[x] / p.spliced[u]));
        modulus[p.stage] = std::max(modulus[p.stage], d);
      }
    }
  }
  return modulus;
}

std::vector<double> energy_quasilocality_modulus(std::shared_ptr<const RandomFieldModel> m, const Site& t,
                                                 const Filtration& f, const BoundaryFamily& family) {
  const Alphabet alphabet = m->alphabet();
  return energy_quasilocality_modulus(one_point_kernels(std::move(m)), t, f, family, alphabet);
}

}  // namespace gfl
