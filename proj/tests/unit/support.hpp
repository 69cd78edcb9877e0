#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "gfl/fields.hpp"

namespace gfl::testing {

/// Strictly positive rational table with integer weights in [1, 20].
inline std::shared_ptr<TableField> random_positive_table(const Volume& window, std::size_t q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> w(1, 20);
  std::size_t count = 1;
  for (std::size_t i = 0; i < window.size(); ++i) count *= q;
  std::vector<Scalar> weights(count);
  mpq_class total = 0;
  std::vector<int> raw(count);
  for (auto& r : raw) {
    r = w(rng);
    total += r;
  }
  for (std::size_t i = 0; i < count; ++i) weights[i] = Scalar(mpq_class(raw[i]) / total);
  std::vector<std::string> names;
  for (std::size_t s = 0; s < q; ++s) names.push_back(q == 2 ? std::to_string(s) : "s" + std::to_string(s));
  return table_field(window, Alphabet(names), std::move(weights));
}

inline Volume line(int n) {
  std::vector<Site> s;
  for (int i = 0; i < n; ++i) s.push_back(Site{i});
  return Volume(std::move(s));
}

/// Brute-force evaluation straight from the full table, written without the
/// library's marginalization or indexing helpers.
class TableOracle {
 public:
  explicit TableOracle(const TableField& f) : window_(f.window().sites()), q_(f.alphabet().size()) {
    for (const auto& p : f.table().probs()) probs_.push_back(p.rational());
  }

  /// P(assignment), summing every full configuration that agrees with it.
  [[nodiscard]] mpq_class prob(const std::map<Site, Symbol>& assignment) const {
    mpq_class total = 0;
    const std::size_t n = window_.size();
    std::vector<Symbol> digits(n);
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
      std::size_t rest = idx;
      for (std::size_t k = n; k-- > 0;) {
        digits[k] = static_cast<Symbol>(rest % q_);
        rest /= q_;
      }
      bool match = true;
      for (const auto& [site, sym] : assignment) {
        for (std::size_t k = 0; k < n; ++k) {
          if (window_[k] == site && digits[k] != sym) match = false;
        }
      }
      if (match) total += probs_[idx];
    }
    return total;
  }

  static std::map<Site, Symbol> as_map(const Configuration& c) {
    std::map<Site, Symbol> m;
    for (std::size_t i = 0; i < c.size(); ++i) m[c.volume()[i]] = c[i];
    return m;
  }

  /// P(x z) / P(z).
  [[nodiscard]] mpq_class conditional(const Configuration& x, const Configuration& z) const {
    auto joint = as_map(z);
    const auto den = prob(joint);
    for (const auto& [s, v] : as_map(x)) joint[s] = v;
    return prob(joint) / den;
  }

 private:
  std::vector<Site> window_;
  std::size_t q_;
  std::vector<mpq_class> probs_;
};

/// Every subset of `v` with the given size, in lexicographic order.
inline std::vector<Volume> subsets_of_size(const Volume& v, std::size_t k) {
  std::vector<Volume> out;
  const std::size_t n = v.size();
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    std::vector<Site> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s.push_back(v[i]);
    }
    out.emplace_back(std::move(s));
  }
  return out;
}

inline std::vector<Volume> all_subsets(const Volume& v) {
  std::vector<Volume> out;
  for (std::size_t k = 0; k <= v.size(); ++k) {
    for (auto& s : subsets_of_size(v, k)) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gfl::testing
