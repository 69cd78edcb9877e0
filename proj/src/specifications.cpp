#include "gfl/specifications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gfl/error.hpp"
#include "gfl/parallel.hpp"
#include "gfl/text.hpp"

namespace gfl {

namespace {

Scalar exp_scalar(const Scalar& d) {
  if (d.is_exact() && d.is_zero()) return Scalar(1);
  return Scalar(std::exp(d.to_double()));
}

Volume translate(const Volume& v, const Site& shift) {
  std::vector<Site> sites;
  sites.reserve(v.size());
  for (const auto& s : v) sites.push_back(s.shifted(shift));
  return Volume(std::move(sites));
}

Configuration single(const Site& s, Symbol x) { return Configuration(Volume{s}, {x}); }

double relative_residual(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact() && a == b) return 0.0;
  const double da = a.to_double();
  const double db = b.to_double();
  const double scale = std::max(std::fabs(da), std::fabs(db));
  if (scale == 0.0) return 0.0;
  return std::fabs(da - db) / scale;
}

bool violates(const Scalar& a, const Scalar& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a != b;
  return relative_residual(a, b) > tol;
}

void require_normalized(const std::vector<Scalar>& probs, double tol, const std::string& where) {
  Scalar total(0);
  for (const auto& p : probs) {
    if (p.sign() < 0) throw ValidationError(where + ": negative probability " + p.str());
    total += p;
  }
  if (!approx_equal(total, Scalar(1), tol)) throw ValidationError(where + ": family sums to " + total.str());
}

std::string symbols_str(const Alphabet& a, std::initializer_list<std::pair<const char*, Symbol>> items) {
  std::string s;
  for (const auto& [name, sym] : items) {
    if (!s.empty()) s += ' ';
    s += name;
    s += '=';
    s += a.name(sym);
  }
  return s;
}

/// Translates of potential templates that meet `v` and lie inside `window`.
struct Interaction {
  Volume templ;
  Volume sites;
};

std::vector<Interaction> interactions_meeting(const Potential& phi, const Volume& window, const Volume& v) {
  std::set<std::pair<Volume, Volume>> found;
  for (const auto& templ : phi.templates()) {
    for (const auto& s : v) {
      if (s.dim() != phi.dimension()) throw DomainError("site " + s.str() + " has the wrong dimension for the potential");
      for (const auto& o : templ) {
        Volume a = translate(templ, s.minus(o));
        if (a.is_subset_of(window)) found.emplace(std::move(a), templ);
      }
    }
  }
  std::vector<Interaction> out;
  out.reserve(found.size());
  for (auto& [a, templ] : found) out.push_back({templ, a});
  return out;
}

}  // namespace

double OnePointTEF::delta(const Site& t, const Configuration& z, Symbol x, Symbol u) const {
  return log(evaluate(t, z).at(static_cast<std::size_t>(x) * alphabet.size() + u));
}

// ---------------------------------------------------------------- Potential

Potential::Potential(Alphabet alphabet, std::size_t dimension) : alphabet_(std::move(alphabet)), dimension_(dimension) {
  if (dimension_ == 0 || dimension_ > kMaxDimension) throw ArgumentError("potential dimension out of range");
}

void Potential::add_term(const Volume& offsets, const std::vector<Symbol>& symbols, const Scalar& value) {
  if (offsets.empty()) throw ArgumentError("potential template must be nonempty");
  if (offsets.size() != symbols.size()) throw ArgumentError("template and configuration sizes differ");
  for (const auto& s : offsets) {
    if (s.dim() != dimension_) throw ArgumentError("template site " + s.str() + " has the wrong dimension");
  }
  for (Symbol s : symbols) {
    if (s >= alphabet_.size()) throw ArgumentError("symbol outside the alphabet");
  }
  const Site origin = offsets[0];
  Volume templ = translate(offsets, Site(std::vector<int>(dimension_, 0)).minus(origin));
  for (const auto& a : templ) {
    for (const auto& b : templ) range_ = std::max(range_, a.linf_distance(b));
  }
  auto [it, inserted] = terms_.try_emplace(Key{std::move(templ), symbols}, value);
  if (!inserted) it->second += value;
}

std::vector<Volume> Potential::templates() const {
  std::vector<Volume> out;
  for (const auto& [key, value] : terms_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

Scalar Potential::term(const Configuration& c) const {
  if (c.empty()) return Scalar(0);
  const Volume templ = translate(c.volume(), Site(std::vector<int>(dimension_, 0)).minus(c.volume()[0]));
  const auto it = terms_.find(Key{templ, c.symbols()});
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::string Potential::str() const {
  std::ostringstream out;
  out << "alphabet " << alphabet_.str() << '\n';
  for (const auto& [key, value] : terms_) {
    std::string syms;
    for (std::size_t i = 0; i < key.second.size(); ++i) {
      if (i) syms += ',';
      syms += alphabet_.name(key.second[i]);
    }
    out << key.first.str() << " | " << syms << " | " << value.str() << '\n';
  }
  return out.str();
}

Potential Potential::parse(std::string_view body) {
  Alphabet alphabet = Alphabet::spins();
  std::optional<Potential> phi;
  for (const auto& line : text::content_lines(body)) {
    if (text::starts_with(line, "alphabet")) {
      if (phi) throw ParseError("alphabet line must precede the terms");
      alphabet = Alphabet::parse(std::string_view(line).substr(8));
      continue;
    }
    const auto parts = text::split(line, '|');
    if (parts.size() != 3) throw ParseError("potential line needs 'offsets | symbols | value': '" + line + "'");
    std::vector<std::pair<Site, Symbol>> pairs;
    const auto sites = text::split_top_level(parts[0], ',');
    const auto syms = text::split(parts[1], ',');
    if (sites.size() != syms.size()) throw ParseError("offsets and symbols differ in count: '" + line + "'");
    for (std::size_t i = 0; i < sites.size(); ++i) pairs.emplace_back(Site::parse(sites[i]), alphabet.index_of(syms[i]));
    std::sort(pairs.begin(), pairs.end());
    std::vector<Site> vs;
    std::vector<Symbol> ss;
    for (auto& [s, x] : pairs) {
      vs.push_back(s);
      ss.push_back(x);
    }
    if (!phi) phi.emplace(alphabet, vs.front().dim());
    Volume offsets(std::move(vs));
    if (offsets.size() != ss.size()) throw ParseError("repeated offset in '" + line + "'");
    phi->add_term(offsets, ss, Scalar::parse(parts[2]));
  }
  if (!phi) return Potential(alphabet, 1);
  return *phi;
}

Potential ising_potential(double beta, double h, std::size_t dimension) {
  Potential phi(Alphabet::spins(), dimension);
  const Alphabet& a = phi.alphabet();
  const std::vector<int> zero(dimension, 0);
  for (std::size_t axis = 0; axis < dimension; ++axis) {
    std::vector<int> e(dimension, 0);
    e[axis] = 1;
    const Volume pair{Site(zero), Site(e)};
    for (Symbol x = 0; x < 2; ++x) {
      for (Symbol y = 0; y < 2; ++y) {
        phi.add_term(pair, {x, y}, Scalar(-beta * a.numeric_value(x) * a.numeric_value(y)));
      }
    }
  }
  if (h != 0.0) {
    for (Symbol x = 0; x < 2; ++x) phi.add_term(Volume{Site(zero)}, {x}, Scalar(-h * a.numeric_value(x)));
  }
  return phi;
}

std::vector<Scalar> local_hamiltonian(const Potential& phi, const Volume& window, const Volume& v,
                                      const Configuration& boundary) {
  if (!v.is_disjoint_from(boundary.volume())) throw DomainError("boundary overlaps the volume " + v.str());
  const Alphabet& alphabet = phi.alphabet();
  const std::size_t q = alphabet.size();
  const auto interactions = interactions_meeting(phi, window, v);

  // Per interaction site: index into V (>= 0) or boundary symbol encoded as -1 - symbol.
  std::vector<std::vector<std::ptrdiff_t>> sources;
  sources.reserve(interactions.size());
  for (const auto& in : interactions) {
    std::vector<std::ptrdiff_t> src;
    for (const auto& s : in.sites) {
      if (const auto i = v.index_of(s); i >= 0) {
        src.push_back(i);
      } else if (const auto j = boundary.volume().index_of(s); j >= 0) {
        src.push_back(-1 - static_cast<std::ptrdiff_t>(boundary[static_cast<std::size_t>(j)]));
      } else {
        throw GeometryError("boundary does not cover site " + s.str() + " of an interaction with " + v.str());
      }
    }
    sources.push_back(std::move(src));
  }

  const std::uint64_t n = configuration_count(v, alphabet);
  std::vector<Scalar> h(n, Scalar(0));
  std::vector<Symbol> digits(v.size(), 0);
  std::vector<Symbol> syms;
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    for (std::size_t k = 0; k < interactions.size(); ++k) {
      syms.clear();
      for (auto src : sources[k]) {
        syms.push_back(src >= 0 ? digits[static_cast<std::size_t>(src)] : static_cast<Symbol>(-1 - src));
      }
      const auto it = phi.terms().find(Potential::Key{interactions[k].templ, syms});
      if (it != phi.terms().end()) h[idx] += it->second;
    }
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < q) break;
      digits[i] = 0;
    }
  }
  return h;
}

std::vector<double> hamiltonian_from_potential(const Potential& phi, const Volume& window, const Site& t,
                                               const Configuration& boundary) {
  if (!window.contains(t)) throw DomainError("site " + t.str() + " is outside the window");
  std::vector<double> out;
  for (const auto& h : local_hamiltonian(phi, window, Volume{t}, boundary)) out.push_back(h.to_double());
  return out;
}

OnePointTEF tef_from_potential(const Potential& phi, const Volume& window) {
  OnePointTEF d;
  d.window = window;
  d.alphabet = phi.alphabet();
  d.label = "potential";
  d.evaluate = [phi, window](const Site& t, const Configuration& z) {
    if (!window.contains(t)) throw DomainError("site " + t.str() + " is outside the window");
    const auto h = local_hamiltonian(phi, window, Volume{t}, z);
    const std::size_t q = h.size();
    std::vector<Scalar> r;
    r.reserve(q * q);
    for (std::size_t x = 0; x < q; ++x) {
      for (std::size_t u = 0; u < q; ++u) r.push_back(exp_scalar(h[u] - h[x]));
    }
    return r;
  };
  return d;
}

OnePointSpec onepoint_spec_from_tef(const OnePointTEF& d) {
  OnePointSpec q;
  q.window = d.window;
  q.alphabet = d.alphabet;
  q.tolerance = d.tolerance;
  q.label = "gibbs form of " + d.label;
  q.evaluate = [d](const Site& t, const Configuration& z) {
    const std::size_t n = d.alphabet.size();
    const auto r = d.evaluate(t, z);
    for (const auto& v : r) {
      if (v.sign() <= 0) throw InconsistentError("transition energy ratio is not positive at " + t.str());
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t u = 0; u < n; ++u) {
          if (violates(r[x * n + u], r[x * n + y] * r[y * n + u], d.tolerance)) {
            throw InconsistentError("transition energy field violates the cocycle law at " + t.str());
          }
        }
      }
    }
    std::vector<Scalar> probs;
    Scalar total(0);
    for (std::size_t x = 0; x < n; ++x) {
      probs.push_back(r[x * n]);
      total += probs.back();
    }
    for (auto& p : probs) p /= total;
    return probs;
  };
  return q;
}

OnePointTEF tef_from_1spec(const OnePointSpec& q) {
  OnePointTEF d;
  d.window = q.window;
  d.alphabet = q.alphabet;
  d.tolerance = q.tolerance;
  d.label = "energies of " + q.label;
  d.evaluate = [q](const Site& t, const Configuration& z) {
    const auto p = q.evaluate(t, z);
    const std::size_t n = p.size();
    for (const auto& v : p) {
      if (v.sign() <= 0) throw PositivityError("1-spec value " + v.str() + " at " + t.str() + " is not positive");
    }
    std::vector<Scalar> r;
    r.reserve(n * n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t u = 0; u < n; ++u) r.push_back(p[x] / p[u]);
    }
    return r;
  };
  return d;
}

Specification spec_from_onepoint(const OnePointSpec& q) {
  Specification spec;
  spec.window = q.window;
  spec.alphabet = q.alphabet;
  spec.tolerance = q.tolerance;
  spec.label = "extension of " + q.label;
  spec.evaluate = [q](const Volume& v, const Configuration& z) {
    if (v.size() == 1) return q.evaluate(v[0], z);
    return reconstruct_from_one_point(q.evaluate, q.alphabet, v, z).probs();
  };
  return spec;
}

Specification spec_from_model(ModelPtr m) {
  Specification spec;
  spec.window = m->window();
  spec.alphabet = m->alphabet();
  spec.tolerance = m->tolerance();
  spec.label = m->describe();
  spec.evaluate = [m](const Volume& v, const Configuration& z) { return finite_conditional(*m, v, z).probs(); };
  return spec;
}

OnePointSpec onepoint_spec_from_model(ModelPtr m) {
  OnePointSpec q;
  q.window = m->window();
  q.alphabet = m->alphabet();
  q.tolerance = m->tolerance();
  q.label = m->describe();
  q.evaluate = one_point_kernels(m);
  return q;
}

FiniteDistribution finite_volume_gibbs(const Potential& phi, const Volume& window, const Volume& v,
                                       const Configuration& boundary) {
  const auto h = local_hamiltonian(phi, window, v, boundary);
  const bool all_zero = std::all_of(h.begin(), h.end(), [](const Scalar& e) { return e.is_exact() && e.is_zero(); });
  std::vector<Scalar> weights;
  weights.reserve(h.size());
  if (all_zero) {
    weights.assign(h.size(), Scalar(1));
  } else {
    double lo = h.front().to_double();
    for (const auto& e : h) lo = std::min(lo, e.to_double());
    for (const auto& e : h) weights.emplace_back(std::exp(-(e.to_double() - lo)));
  }
  return FiniteDistribution::from_weights(v, phi.alphabet(), std::move(weights));
}

// ---------------------------------------------------------------- measure systems

MeasureSystem measure_system_from_model(ModelPtr m) {
  MeasureSystem mu;
  mu.alphabet = m->alphabet();
  mu.label = m->describe();
  mu.table = [m](const Volume& v) { return m->marginal(v).probs(); };
  mu.point = [m](const Configuration& c) { return m->probability(c); };
  return mu;
}

MeasureSystem measure_system_from_potential(const Potential& phi) {
  MeasureSystem mu;
  mu.alphabet = phi.alphabet();
  mu.label = "free-boundary weights";
  mu.table = [phi](const Volume& v) {
    std::vector<Scalar> w;
    for (const auto& e : local_hamiltonian(phi, v, v, Configuration{})) w.push_back(exp_scalar(-e));
    return w;
  };
  return mu;
}

namespace {

std::vector<Scalar> measure_ratios(const MeasureSystem& mu, const Site& t, const Configuration& z) {
  const std::size_t q = mu.alphabet.size();
  std::vector<Scalar> weights(q);
  if (mu.point) {
    for (std::size_t x = 0; x < q; ++x) weights[x] = mu.point(concat(single(t, static_cast<Symbol>(x)), z));
  } else {
    const Volume joint = z.volume().unite(Volume{t});
    const auto table = mu.table(joint);
    for (std::size_t x = 0; x < q; ++x) {
      weights[x] = table.at(configuration_index(concat(single(t, static_cast<Symbol>(x)), z), q));
    }
  }
  for (const auto& w : weights) {
    if (w.sign() <= 0) throw PositivityError("measure system weight at " + t.str() + " is not positive");
  }
  std::vector<Scalar> r;
  r.reserve(q * q);
  for (std::size_t x = 0; x < q; ++x) {
    for (std::size_t u = 0; u < q; ++u) r.push_back(weights[x] / weights[u]);
  }
  return r;
}

}  // namespace

StagedTEF tef_from_measure_system(const MeasureSystem& mu, const Site& t, const Filtration& f,
                                  const BoundaryFamily& family, double tol) {
  if (family.size() == 0) throw ArgumentError("boundary family is empty");
  const Volume target{t};
  StagedTEF out;
  out.deltas.resize(family.size());
  out.sup_gaps.assign(f.size(), std::nullopt);
  for (std::size_t g = 0; g < family.size(); ++g) {
    const Configuration boundary = family.generators[g].realize(f, target, mu.alphabet);
    for (std::size_t n = 0; n < f.size(); ++n) {
      const auto r = measure_ratios(mu, t, restrict(boundary, f[n].minus(t)));
      std::vector<double> logs;
      logs.reserve(r.size());
      for (const auto& v : r) logs.push_back(log(v));
      out.deltas[g].push_back(std::move(logs));
    }
  }
  for (std::size_t n = 1; n < f.size(); ++n) {
    double gap = 0.0;
    for (const auto& per_gen : out.deltas) {
      for (std::size_t k = 0; k < per_gen[n].size(); ++k) gap = std::max(gap, std::fabs(per_gen[n][k] - per_gen[n - 1][k]));
    }
    out.sup_gaps[n] = gap;
  }
  if (f.size() >= 2) {
    std::size_t from = f.size() - 1;
    while (from >= 1 && *out.sup_gaps[from] <= tol) --from;
    if (from < f.size() - 1) {
      out.stabilized = true;
      out.stabilized_from = from;
    }
  }
  if (f.size() >= 4) {
    const std::size_t last = f.size() - 1;
    // The same generator must keep the gap open, not just the supremum.
    for (const auto& per_gen : out.deltas) {
      double persistent = std::numeric_limits<double>::infinity();
      for (std::size_t n = last - 2; n <= last; ++n) {
        double gap = 0.0;
        for (std::size_t k = 0; k < per_gen[n].size(); ++k) gap = std::max(gap, std::fabs(per_gen[n][k] - per_gen[n - 1][k]));
        persistent = std::min(persistent, gap);
      }
      if (persistent >= 10 * tol) out.diverging = true;
    }
  }
  if (out.stabilized) {
    OnePointTEF d;
    d.alphabet = mu.alphabet;
    d.window = f.window();
    d.tolerance = tol;
    d.label = "deepest stage of " + mu.label;
    const Volume deepest = f.last();
    d.evaluate = [mu, deepest](const Site& s, const Configuration& z) {
      return measure_ratios(mu, s, restrict(z, z.volume().intersect(deepest).minus(s)));
    };
    out.tef = std::move(d);
  }
  return out;
}

// ---------------------------------------------------------------- validation

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["axiom"] = axiom;
  j["fixtures_checked"] = fixtures_checked;
  j["sampled"] = sampled;
  j["violation_count"] = violation_count;
  j["violations"] = violations;
  j["max_residual"] = max_residual;
  return j.dump(2);
}

void ValidationReport::add_violation(std::string text) {
  ++violation_count;
  if (violations.size() < kMaxListed) violations.push_back(std::move(text));
}

void ValidationReport::merge(const ValidationReport& other) {
  fixtures_checked += other.fixtures_checked;
  sampled = sampled || other.sampled;
  max_residual = std::max(max_residual, other.max_residual);
  violation_count += other.violation_count;
  for (const auto& v : other.violations) {
    if (violations.size() < kMaxListed) violations.push_back(v);
  }
}

PairFixtures pair_fixtures(const Volume& window, const Alphabet& alphabet, const FixturePlan& plan) {
  PairFixtures out;
  const std::size_t n = window.size();
  if (n < 2) return out;
  std::vector<std::pair<Site, Site>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(window[i], window[j]);
  }
  const double per_pair = std::pow(static_cast<double>(alphabet.size()), static_cast<double>(n - 2));
  if (per_pair * static_cast<double>(pairs.size()) <= static_cast<double>(plan.exhaustive_limit)) {
    for (const auto& [t, s] : pairs) {
      for (auto& z : enumerate_configurations(window.minus(Volume{t, s}), alphabet)) {
        out.fixtures.push_back({t, s, std::move(z)});
      }
    }
    return out;
  }
  out.sampled = true;
  std::mt19937_64 rng(plan.seed);
  for (std::size_t k = 0; k < plan.sample_size; ++k) {
    const auto& [t, s] = pairs[rng() % pairs.size()];
    const Volume rest = window.minus(Volume{t, s});
    std::vector<Symbol> syms(rest.size());
    for (auto& x : syms) x = static_cast<Symbol>(rng() % alphabet.size());
    out.fixtures.push_back({t, s, Configuration(rest, std::move(syms))});
  }
  return out;
}

VolumeFixtures volume_fixtures(const Volume& window, const Alphabet& alphabet, std::size_t max_volume,
                               const FixturePlan& plan) {
  VolumeFixtures out;
  const std::size_t n = window.size();
  max_volume = std::min(max_volume, n);
  if (max_volume < 2) return out;

  // Count the quantified space before committing to enumeration.
  double total = 0.0;
  for (std::size_t k = 2; k <= max_volume; ++k) {
    double binom = 1.0;
    for (std::size_t i = 0; i < k; ++i) binom = binom * static_cast<double>(n - i) / static_cast<double>(i + 1);
    total += binom * (std::pow(2.0, static_cast<double>(k)) - 2.0) *
             std::pow(static_cast<double>(alphabet.size()), static_cast<double>(n - k));
  }

  auto subvolumes = [](const Volume& v, std::uint64_t mask) {
    std::vector<Site> sites;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mask >> i & 1U) sites.push_back(v[i]);
    }
    return Volume(std::move(sites));
  };

  if (total <= static_cast<double>(plan.exhaustive_limit)) {
    for (std::size_t k = 2; k <= max_volume; ++k) {
      std::vector<bool> pick(n, false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        std::vector<Site> sites;
        for (std::size_t i = 0; i < n; ++i) {
          if (pick[i]) sites.push_back(window[i]);
        }
        const Volume v(std::move(sites));
        const auto boundaries = enumerate_configurations(window.minus(v), alphabet);
        for (std::uint64_t mask = 1; mask + 1 < (1ULL << k); ++mask) {
          const Volume inner = subvolumes(v, mask);
          for (const auto& z : boundaries) out.fixtures.push_back({v, inner, z});
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return out;
  }

  out.sampled = true;
  std::mt19937_64 rng(plan.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < plan.sample_size; ++k) {
    const std::size_t size = 2 + rng() % (max_volume - 1);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < size; ++i) std::swap(order[i], order[i + rng() % (n - i)]);
    std::vector<Site> sites;
    for (std::size_t i = 0; i < size; ++i) sites.push_back(window[order[i]]);
    const Volume v(std::move(sites));
    const std::uint64_t mask = 1 + rng() % ((1ULL << size) - 2);
    const Volume rest = window.minus(v);
    std::vector<Symbol> syms(rest.size());
    for (auto& x : syms) x = static_cast<Symbol>(rng() % alphabet.size());
    out.fixtures.push_back({v, subvolumes(v, mask), Configuration(rest, std::move(syms))});
  }
  return out;
}

ValidationReport validate_1spec(const OnePointSpec& q, const PairFixtures& fixtures) {
  const Alphabet& a = q.alphabet;
  const std::size_t n = a.size();
  auto partial = parallel_map<ValidationReport>(fixtures.fixtures.size(), [&](std::size_t i) {
    const auto& fx = fixtures.fixtures[i];
    ValidationReport r;
    r.fixtures_checked = 1;
    std::vector<std::vector<Scalar>> qt(n);  // qt[y] = q_t^{z, s=y}
    std::vector<std::vector<Scalar>> qs(n);  // qs[x] = q_s^{z, t=x}
    for (std::size_t b = 0; b < n; ++b) {
      const auto sym = static_cast<Symbol>(b);
      qt[b] = q.evaluate(fx.t, concat(fx.z, single(fx.s, sym)));
      qs[b] = q.evaluate(fx.s, concat(fx.z, single(fx.t, sym)));
      require_normalized(qt[b], q.tolerance, "q at " + fx.t.str());
      require_normalized(qs[b], q.tolerance, "q at " + fx.s.str());
    }
    for (Symbol x = 0; x < n; ++x) {
      for (Symbol u = 0; u < n; ++u) {
        for (Symbol y = 0; y < n; ++y) {
          for (Symbol v = 0; v < n; ++v) {
            const Scalar lhs = qt[y][x] * qs[x][v] * qt[v][u] * qs[u][y];
            const Scalar rhs = qt[y][u] * qs[u][v] * qt[v][x] * qs[x][y];
            r.max_residual = std::max(r.max_residual, relative_residual(lhs, rhs));
            if (violates(lhs, rhs, q.tolerance)) {
              r.add_violation("t=" + fx.t.str() + " s=" + fx.s.str() + " z=" + fx.z.str(a) + " " +
                              symbols_str(a, {{"x", x}, {"u", u}, {"y", y}, {"v", v}}) + ": " + lhs.str() +
                              " != " + rhs.str());
            }
          }
        }
      }
    }
    return r;
  });
  ValidationReport report;
  report.axiom = "1-specification consistency";
  report.sampled = fixtures.sampled;
  for (const auto& r : partial) report.merge(r);
  return report;
}

ValidationReport validate_spec(const Specification& q, const VolumeFixtures& fixtures) {
  const Alphabet& a = q.alphabet;
  const std::size_t n = a.size();
  auto partial = parallel_map<ValidationReport>(fixtures.fixtures.size(), [&](std::size_t i) {
    const auto& fx = fixtures.fixtures[i];
    ValidationReport r;
    r.fixtures_checked = 1;
    const auto qv = q.evaluate(fx.v, fx.z);
    require_normalized(qv, q.tolerance, "q on " + fx.v.str());
    const Volume outer = fx.v.minus(fx.inner);
    const auto xs = enumerate_configurations(fx.inner, a);
    for (const auto& y : enumerate_configurations(outer, a)) {
      const auto qi = q.evaluate(fx.inner, concat(fx.z, y));
      require_normalized(qi, q.tolerance, "q on " + fx.inner.str());
      for (std::size_t x = 0; x < xs.size(); ++x) {
        const std::size_t xy = configuration_index(concat(xs[x], y), n);
        for (std::size_t u = 0; u < xs.size(); ++u) {
          const std::size_t uy = configuration_index(concat(xs[u], y), n);
          const Scalar lhs = qv[xy] * qi[u];
          const Scalar rhs = qv[uy] * qi[x];
          r.max_residual = std::max(r.max_residual, relative_residual(lhs, rhs));
          if (violates(lhs, rhs, q.tolerance)) {
            r.add_violation("V=" + fx.v.str() + " I=" + fx.inner.str() + " z=" + fx.z.str(a) + " y=" + y.str(a) +
                            " x=" + xs[x].str(a) + " u=" + xs[u].str(a) + ": " + lhs.str() + " != " + rhs.str());
          }
        }
      }
    }
    return r;
  });
  ValidationReport report;
  report.axiom = "specification consistency";
  report.sampled = fixtures.sampled;
  for (const auto& r : partial) report.merge(r);
  return report;
}

ValidationReport validate_tef(const OnePointTEF& d, const PairFixtures& fixtures) {
  const Alphabet& a = d.alphabet;
  const std::size_t n = a.size();
  auto partial = parallel_map<ValidationReport>(fixtures.fixtures.size(), [&](std::size_t i) {
    const auto& fx = fixtures.fixtures[i];
    ValidationReport r;
    r.fixtures_checked = 1;
    std::vector<std::vector<Scalar>> rt(n);
    std::vector<std::vector<Scalar>> rs(n);
    for (std::size_t b = 0; b < n; ++b) {
      const auto sym = static_cast<Symbol>(b);
      rt[b] = d.evaluate(fx.t, concat(fx.z, single(fx.s, sym)));
      rs[b] = d.evaluate(fx.s, concat(fx.z, single(fx.t, sym)));
    }
    auto check = [&](const Scalar& lhs, const Scalar& rhs, const std::string& what) {
      r.max_residual = std::max(r.max_residual, relative_residual(lhs, rhs));
      if (lhs.sign() <= 0 || rhs.sign() <= 0 || violates(lhs, rhs, d.tolerance)) {
        r.add_violation(what + " t=" + fx.t.str() + " s=" + fx.s.str() + " z=" + fx.z.str(a) + ": " + lhs.str() +
                        " != " + rhs.str());
      }
    };
    for (std::size_t b = 0; b < n; ++b) {
      for (const auto* m : {&rt[b], &rs[b]}) {
        for (std::size_t x = 0; x < n; ++x) {
          for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t u = 0; u < n; ++u) {
              check((*m)[x * n + u], (*m)[x * n + y] * (*m)[y * n + u], "cocycle");
            }
          }
        }
      }
    }
    for (Symbol x = 0; x < n; ++x) {
      for (Symbol u = 0; u < n; ++u) {
        for (Symbol y = 0; y < n; ++y) {
          for (Symbol v = 0; v < n; ++v) {
            check(rt[y][x * n + u] * rs[u][y * n + v], rs[x][y * n + v] * rt[v][x * n + u],
                  "exchange " + symbols_str(a, {{"x", x}, {"u", u}, {"y", y}, {"v", v}}));
          }
        }
      }
    }
    return r;
  });
  ValidationReport report;
  report.axiom = "transition energy field";
  report.sampled = fixtures.sampled;
  for (const auto& r : partial) report.merge(r);
  return report;
}

}  // namespace gfl
