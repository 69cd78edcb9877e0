#include "gfl/fields.hpp"

#include <algorithm>
#include <cmath>

#include "gfl/error.hpp"

namespace gfl {

std::vector<std::string> distribution_violations(const Volume& volume, const Alphabet& alphabet,
                                                 const std::vector<Scalar>& probs, double tolerance) {
  std::vector<std::string> out;
  const std::uint64_t expected = configuration_count(volume, alphabet);
  if (probs.size() != expected) {
    out.push_back("key set: expected " + std::to_string(expected) + " entries, got " +
                  std::to_string(probs.size()));
    return out;
  }
  bool exact = true;
  Scalar total(0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].sign() < 0) {
      out.push_back("nonnegativity: entry " + configuration_at(volume, alphabet.size(), i).str(alphabet) + " = " +
                    probs[i].str());
    }
    exact = exact && probs[i].is_exact();
    total += probs[i];
  }
  if (exact) {
    if (total != Scalar(1)) out.push_back("normalization: sum = " + total.str());
  } else if (std::fabs(total.to_double() - 1.0) > tolerance) {
    out.push_back("normalization: sum = " + total.str());
  }
  return out;
}

FiniteDistribution::FiniteDistribution(Volume volume, Alphabet alphabet, std::vector<Scalar> probs, double tolerance)
    : volume_(std::move(volume)), alphabet_(std::move(alphabet)), probs_(std::move(probs)), tolerance_(tolerance) {
  const auto problems = distribution_violations(volume_, alphabet_, probs_, tolerance_);
  if (!problems.empty()) {
    std::string msg = "invalid distribution on " + volume_.str() + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

FiniteDistribution FiniteDistribution::from_weights(Volume volume, Alphabet alphabet, std::vector<Scalar> weights,
                                                    double tolerance) {
  Scalar total(0);
  for (const auto& w : weights) {
    if (w.sign() < 0) throw ValidationError("negative weight " + w.str());
    total += w;
  }
  if (total.is_zero()) throw ValidationError("all weights are zero");
  for (auto& w : weights) w /= total;
  return FiniteDistribution(std::move(volume), std::move(alphabet), std::move(weights), tolerance);
}

NumericMode FiniteDistribution::mode() const {
  for (const auto& p : probs_) {
    if (!p.is_exact()) return NumericMode::floating;
  }
  return NumericMode::rational;
}

const Scalar& FiniteDistribution::prob(const Configuration& c) const {
  if (c.volume() != volume_) {
    throw DomainError("configuration on " + c.volume().str() + " queried against a table on " + volume_.str());
  }
  return probs_[configuration_index(c, alphabet_.size())];
}

FiniteDistribution marginalize(const FiniteDistribution& p, const Volume& target) {
  if (!target.is_subset_of(p.volume())) {
    throw DomainError("cannot marginalize onto " + target.str() + ": not inside " + p.volume().str());
  }
  if (target == p.volume()) return p;
  const std::size_t q = p.alphabet().size();
  std::vector<std::size_t> keep;
  for (const auto& s : target) keep.push_back(static_cast<std::size_t>(p.volume().index_of(s)));
  const std::size_t n = p.volume().size();
  std::vector<Scalar> out(configuration_count(target, p.alphabet()), Scalar(0));
  std::vector<Symbol> digits(n, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::uint64_t j = 0;
    for (std::size_t k : keep) j = j * q + digits[k];
    out[j] += p[i];
    for (std::size_t d = n; d > 0; --d) {
      if (++digits[d - 1] < q) break;
      digits[d - 1] = 0;
    }
  }
  return FiniteDistribution(target, p.alphabet(), std::move(out), p.tolerance());
}

bool is_positive(const FiniteDistribution& p) {
  return std::all_of(p.probs().begin(), p.probs().end(), [&](const Scalar& x) {
    return x.is_exact() ? x.sign() > 0 : x.to_double() > p.tolerance();
  });
}

bool tables_equal(const std::vector<Scalar>& a, const std::vector<Scalar>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!approx_equal(a[i], b[i], tol)) return false;
  }
  return true;
}

Scalar sup_difference(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) throw DomainError("tables of different size");
  Scalar d(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Scalar e = abs(a[i] - b[i]);
    if (e > d) d = std::move(e);
  }
  return d;
}

double sup_distance(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) throw DomainError("tables of different size");
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, distance(a[i], b[i]));
  return d;
}

// ---------------------------------------------------------------- RandomFieldModel

Scalar RandomFieldModel::probability(const Configuration& c) const { return marginal(c.volume()).prob(c); }

void RandomFieldModel::require_in_window(const Volume& v) const {
  if (!v.is_subset_of(window())) {
    throw DomainError("volume " + v.str() + " is not inside the window " + window().str());
  }
}

TableField::TableField(FiniteDistribution table, std::string label)
    : table_(std::move(table)), label_(std::move(label)) {
  set_tolerance(table_.tolerance());
}

std::shared_ptr<const FiniteDistribution> TableField::cached_marginal(const Volume& v) const {
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(v); it != cache_.end()) return it->second;
  }
  require_in_window(v);
  auto m = std::make_shared<const FiniteDistribution>(marginalize(table_, v));
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(v, std::move(m)).first->second;
}

FiniteDistribution TableField::marginal(const Volume& v) const { return *cached_marginal(v); }

Scalar TableField::probability(const Configuration& c) const {
  if (c.empty()) return Scalar(1);
  return cached_marginal(c.volume())->prob(c);
}

std::shared_ptr<TableField> table_field(const Volume& window, const Alphabet& alphabet, std::vector<Scalar> probs,
                                        double tolerance) {
  return std::make_shared<TableField>(FiniteDistribution(window, alphabet, std::move(probs), tolerance));
}

bool check_marginal_consistency(const RandomFieldModel& m, const Volume& s, const Volume& v) {
  if (!v.is_subset_of(s) || !s.is_subset_of(m.window())) {
    throw DomainError("check_marginal_consistency needs V ⊂ S ⊆ window");
  }
  const auto direct = m.marginal(v);
  const auto via = marginalize(m.marginal(s), v);
  return tables_equal(direct.probs(), via.probs(), m.tolerance());
}

}  // namespace gfl
