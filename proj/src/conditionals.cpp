#include "gfl/conditionals.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "gfl/error.hpp"
#include "gfl/parallel.hpp"

namespace gfl {

// ---------------------------------------------------------------- ConditionalKernel

ConditionalKernel::ConditionalKernel(Volume target, Configuration condition, Alphabet alphabet,
                                     std::vector<Scalar> probs, double tolerance)
    : target_(std::move(target)),
      condition_(std::move(condition)),
      alphabet_(std::move(alphabet)),
      probs_(std::move(probs)),
      tolerance_(tolerance) {
  if (!target_.is_disjoint_from(condition_.volume())) {
    throw DomainError("condition volume " + condition_.volume().str() + " overlaps the target " + target_.str());
  }
  const auto problems = distribution_violations(target_, alphabet_, probs_, tolerance_);
  if (!problems.empty()) throw ValidationError("invalid conditional kernel: " + problems.front());
}

const Scalar& ConditionalKernel::prob(const Configuration& x) const {
  if (x.volume() != target_) throw DomainError("configuration is not on the kernel target " + target_.str());
  return probs_[configuration_index(x, alphabet_.size())];
}

bool ConditionalKernel::is_strictly_positive() const {
  return std::all_of(probs_.begin(), probs_.end(),
                     [&](const Scalar& p) { return p.is_exact() ? p.sign() > 0 : p.to_double() > tolerance_; });
}

ConditionalKernel finite_conditional(const RandomFieldModel& m, const Volume& target, const Configuration& condition) {
  if (target.empty()) throw DomainError("finite_conditional needs a nonempty target volume");
  if (!target.is_disjoint_from(condition.volume())) {
    throw DomainError("condition on " + condition.volume().str() + " overlaps the target " + target.str());
  }
  const Volume joint = target.unite(condition.volume());
  if (!joint.is_subset_of(m.window())) throw DomainError("volume " + joint.str() + " leaves the model window");

  const auto n = configuration_count(target, m.alphabet());
  std::vector<Scalar> probs;
  probs.reserve(n);
  Scalar total(0);
  for (std::uint64_t i = 0; i < n; ++i) {
    probs.push_back(m.probability(concat(configuration_at(target, m.alphabet().size(), i), condition)));
    total += probs.back();
  }
  if (total.is_zero() || (!total.is_exact() && total.to_double() <= 0.0)) {
    throw NullConditionError("P(z) = 0 for condition " + condition.str(m.alphabet()));
  }
  for (auto& p : probs) p /= total;
  return ConditionalKernel(target, condition, m.alphabet(), std::move(probs), m.tolerance());
}

OnePointKernelFn one_point_kernels(std::shared_ptr<const RandomFieldModel> m) {
  return [m = std::move(m)](const Site& t, const Configuration& condition) {
    return finite_conditional(*m, Volume{t}, condition).probs();
  };
}

// ---------------------------------------------------------------- boundaries

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t site_hash(std::uint64_t seed, const Site& s) {
  std::uint64_t h = splitmix64(seed);
  for (int c : s.coords()) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
  return h;
}

Volume boundary_volume(const Filtration& f, const Volume& target) { return f.last().minus(target); }

}  // namespace

BoundaryGenerator constant_boundary(Symbol s, const Alphabet& alphabet) {
  return {"constant(" + alphabet.name(s) + ")", [s](const Filtration& f, const Volume& target, const Alphabet&) {
            return Configuration::constant(boundary_volume(f, target), s);
          }};
}

BoundaryGenerator random_boundary(std::uint64_t seed) {
  return {"random(seed=" + std::to_string(seed) + ")",
          [seed](const Filtration& f, const Volume& target, const Alphabet& alphabet) {
            const Volume v = boundary_volume(f, target);
            std::vector<Symbol> sym;
            sym.reserve(v.size());
            for (const auto& s : v) sym.push_back(static_cast<Symbol>(site_hash(seed, s) % alphabet.size()));
            return Configuration(v, std::move(sym));
          }};
}

BoundaryGenerator explicit_boundary(Configuration config, std::string label) {
  return {std::move(label), [config = std::move(config)](const Filtration& f, const Volume& target, const Alphabet&) {
            const Volume v = boundary_volume(f, target);
            if (!v.is_subset_of(config.volume())) {
              throw GeometryError("explicit boundary does not cover " + v.str());
            }
            return restrict(config, v);
          }};
}

BoundaryGenerator density_boundary(std::vector<mpq_class> densities, Symbol marked, Symbol other, std::string label) {
  if (densities.empty()) throw ArgumentError("density_boundary needs at least one density");
  for (const auto& d : densities) {
    if (d < 0 || d > 1) throw ArgumentError("densities must lie in [0, 1]");
  }
  return {std::move(label), [densities = std::move(densities), marked, other](const Filtration& f,
                                                                             const Volume& target, const Alphabet&) {
            std::map<Site, Symbol> assigned;
            std::size_t marked_so_far = 0;
            Volume previous;
            for (std::size_t n = 0; n < f.size(); ++n) {
              const Volume stage = f[n].minus(target);
              const Volume shell = stage.minus(previous);
              const mpq_class& d = densities[n % densities.size()];
              // round(d * |stage|), half up
              mpq_class want_q = d * static_cast<long>(stage.size()) + mpq_class(1, 2);
              mpz_class want = want_q.get_num() / want_q.get_den();
              std::size_t want_n = want.get_ui();
              want_n = std::clamp(want_n, marked_so_far, marked_so_far + shell.size());
              std::size_t to_mark = want_n - marked_so_far;
              for (const auto& s : shell) assigned[s] = to_mark > 0 ? (--to_mark, marked) : other;
              marked_so_far = want_n;
              previous = stage;
            }
            const Volume v = boundary_volume(f, target);
            std::vector<Symbol> sym;
            sym.reserve(v.size());
            for (const auto& s : v) sym.push_back(assigned.at(s));
            return Configuration(v, std::move(sym));
          }};
}

BoundaryGenerator constant_density_boundary(const mpq_class& density, Symbol marked, Symbol other) {
  return density_boundary({density}, marked, other, "density(" + density.get_str() + ")");
}

BoundaryGenerator oscillating_density_boundary(const mpq_class& lo, const mpq_class& hi, Symbol marked,
                                               Symbol other) {
  return density_boundary({lo, hi}, marked, other, "oscillating(" + lo.get_str() + "," + hi.get_str() + ")");
}

BoundaryFamily standard_family(const Alphabet& alphabet, std::size_t random_count, std::uint64_t seed) {
  BoundaryFamily fam;
  fam.generators.push_back(constant_boundary(0, alphabet));
  fam.generators.push_back(constant_boundary(static_cast<Symbol>(alphabet.size() - 1), alphabet));
  for (std::size_t i = 0; i < random_count; ++i) fam.generators.push_back(random_boundary(seed + i));
  fam.description = "constant first/last symbol + " + std::to_string(random_count) +
                    " hashed random boundaries (seed " + std::to_string(seed) + ")";
  return fam;
}

Configuration splice(const Configuration& inner, const Configuration& outer, const Volume& region) {
  std::vector<Symbol> sym(outer.symbols());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (region.contains(outer.volume()[i])) sym[i] = inner.at(outer.volume()[i]);
  }
  return Configuration(outer.volume(), std::move(sym));
}

std::vector<SplicedPair> spliced_kernels(const OnePointKernelFn& kernels, const Site& t, const Filtration& f,
                                         const BoundaryFamily& family, const Alphabet& alphabet) {
  const Volume tvol{t};
  const std::size_t g = family.size();
  std::vector<Configuration> boundaries;
  for (const auto& gen : family.generators) boundaries.push_back(gen.realize(f, tvol, alphabet));
  const auto base = parallel_map<std::vector<Scalar>>(g, [&](std::size_t a) { return kernels(t, boundaries[a]); });

  const std::size_t per_stage = g * g;
  return parallel_map<SplicedPair>(f.size() * per_stage, [&](std::size_t k) {
    SplicedPair p;
    p.stage = k / per_stage;
    p.first = (k % per_stage) / g;
    p.second = k % g;
    p.base = base[p.first];
    if (p.first == p.second) {
      p.spliced = base[p.first];
    } else {
      const Volume region = f[p.stage].minus(tvol);
      p.spliced = kernels(t, splice(boundaries[p.first], boundaries[p.second], region));
    }
    return p;
  });
}

// ---------------------------------------------------------------- limits

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string LimitEstimate::to_csv(const Alphabet& alphabet) const {
  std::ostringstream os;
  os << "stage,volume_size";
  const auto configs = enumerate_configurations(target, alphabet);
  for (const auto& c : configs) os << ',' << csv_field(c.str(alphabet));
  os << ",sup_gap_to_previous\n";
  for (std::size_t n = 0; n < stages.size(); ++n) {
    os << n + 1 << ',' << stages[n].volume_size;
    for (const auto& v : stages[n].values) os << ',' << v.str();
    os << ',' << (stages[n].sup_gap_to_previous ? stages[n].sup_gap_to_previous->str() : "") << '\n';
  }
  return os.str();
}

LimitEstimate limit_along_filtration(const RandomFieldModel& m, const Volume& target, const Configuration& boundary,
                                     const Filtration& f, const Scalar& gap_tol) {
  LimitEstimate est;
  est.target = target;
  est.boundary = boundary;
  const Volume needed = f.last().minus(target);
  if (!needed.is_subset_of(boundary.volume())) {
    throw GeometryError("boundary does not cover the final filtration stage");
  }
  for (std::size_t n = 0; n < f.size(); ++n) {
    const Volume stage = f[n].minus(target);
    LimitStage st;
    st.volume_size = stage.size();
    try {
      st.values = finite_conditional(m, target, restrict(boundary, stage)).probs();
    } catch (const NullConditionError& e) {
      throw NullConditionError("stage " + std::to_string(n + 1) + ": " + e.what());
    }
    if (n > 0) st.sup_gap_to_previous = sup_difference(st.values, est.stages.back().values);
    est.stages.push_back(std::move(st));
  }
  if (est.stages.size() >= 2) {
    est.final_gap = est.stages.back().sup_gap_to_previous;
    est.converged = *est.final_gap <= gap_tol;
    est.gaps_monotone = true;
    for (std::size_t n = 2; n < est.stages.size(); ++n) {
      if (*est.stages[n].sup_gap_to_previous > *est.stages[n - 1].sup_gap_to_previous) est.gaps_monotone = false;
    }
  }
  return est;
}

// ---------------------------------------------------------------- identities

bool check_pair_consistency(const RandomFieldModel& m, const Volume& inner, const Volume& outer,
                            const Configuration& z) {
  if (inner.empty() || !inner.is_subset_of(outer)) throw DomainError("check_pair_consistency needs I ⊂ V");
  const double tol = m.tolerance();
  const Alphabet& a = m.alphabet();
  const Volume rest = outer.minus(inner);
  const auto g_outer = finite_conditional(m, outer, z);
  const auto xs = enumerate_configurations(inner, a);
  for (const auto& y : enumerate_configurations(rest, a)) {
    const auto g_inner = finite_conditional(m, inner, concat(z, y));
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      const Scalar& gxy = g_outer.prob(concat(xs[xi], y));
      for (std::size_t ui = 0; ui < xs.size(); ++ui) {
        const Scalar& guy = g_outer.prob(concat(xs[ui], y));
        if (!approx_equal(gxy * g_inner[ui], guy * g_inner[xi], tol)) return false;
      }
    }
  }
  return true;
}

bool check_one_point_consistency(const RandomFieldModel& m, const Site& t, const Site& s, const Configuration& z) {
  if (t == s) throw DomainError("check_one_point_consistency needs two distinct sites");
  const std::size_t q = m.alphabet().size();
  const double tol = m.tolerance();
  // gt[b][a] = g_t^{z, s=b}(a); gs[a][b] = g_s^{z, t=a}(b)
  std::vector<std::vector<Scalar>> gt(q);
  std::vector<std::vector<Scalar>> gs(q);
  for (std::size_t b = 0; b < q; ++b) {
    gt[b] = finite_conditional(m, Volume{t}, concat(z, Configuration(Volume{s}, {static_cast<Symbol>(b)}))).probs();
    gs[b] = finite_conditional(m, Volume{s}, concat(z, Configuration(Volume{t}, {static_cast<Symbol>(b)}))).probs();
  }
  for (std::size_t x = 0; x < q; ++x) {
    for (std::size_t u = 0; u < q; ++u) {
      for (std::size_t y = 0; y < q; ++y) {
        for (std::size_t v = 0; v < q; ++v) {
          const Scalar lhs = gt[y][x] * gs[x][v] * gt[v][u] * gs[u][y];
          const Scalar rhs = gt[y][u] * gs[u][v] * gt[v][x] * gs[x][y];
          if (!approx_equal(lhs, rhs, tol)) return false;
        }
      }
    }
  }
  return true;
}

ConditionalKernel reconstruct_from_one_point(const OnePointKernelFn& one_point, const Alphabet& alphabet,
                                             const Volume& target, const Configuration& z,
                                             const std::optional<Configuration>& reference,
                                             std::span<const Site> order) {
  if (target.empty()) throw DomainError("reconstruction needs a nonempty volume");
  if (!target.is_disjoint_from(z.volume())) throw DomainError("condition overlaps the target volume");
  const Configuration u = reference ? *reference : Configuration::constant(target, 0);
  if (u.volume() != target) throw DomainError("reference configuration must live on the target volume");

  std::vector<Site> sites = order.empty() ? target.sites() : std::vector<Site>(order.begin(), order.end());
  if (Volume(sites) != target || sites.size() != target.size()) {
    throw DomainError("site order is not a permutation of the target volume");
  }
  const std::size_t n = sites.size();

  const auto xs = enumerate_configurations(target, alphabet);
  std::vector<Scalar> weights;
  weights.reserve(xs.size());
  Scalar total(0);
  for (const auto& x : xs) {
    Scalar w(1);
    for (std::size_t j = 0; j < n; ++j) {
      // (xu)_j: x on the sites before t_j, u on the sites after it.
      std::vector<Site> vs;
      std::vector<Symbol> sym;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        vs.push_back(sites[i]);
        sym.push_back(i < j ? x.at(sites[i]) : u.at(sites[i]));
      }
      std::vector<std::pair<Site, Symbol>> pairs;
      for (std::size_t i = 0; i < vs.size(); ++i) pairs.emplace_back(vs[i], sym[i]);
      std::sort(pairs.begin(), pairs.end());
      std::vector<Site> sorted_sites;
      std::vector<Symbol> sorted_sym;
      for (auto& [site, symbol] : pairs) {
        sorted_sites.push_back(site);
        sorted_sym.push_back(symbol);
      }
      const Configuration cond = concat(z, Configuration(Volume(std::move(sorted_sites)), std::move(sorted_sym)));
      const auto g = one_point(sites[j], cond);
      const Scalar& num = g.at(x.at(sites[j]));
      const Scalar& den = g.at(u.at(sites[j]));
      if (num.sign() <= 0 || den.sign() <= 0) {
        throw PositivityError("zero one-point probability at factor j=" + std::to_string(j + 1) + ", site " +
                              sites[j].str() + ", condition " + cond.str(alphabet));
      }
      w *= num;
      w /= den;
    }
    total += w;
    weights.push_back(std::move(w));
  }
  for (auto& w : weights) w /= total;
  return ConditionalKernel(target, z, alphabet, std::move(weights));
}

std::optional<int> markov_radius(const RandomFieldModel& m, const Site& t, int max_r, std::uint64_t exhaustive_limit,
                                 std::uint64_t seed) {
  const Volume& window = m.window();
  if (!window.contains(t)) throw GeometryError("site " + t.str() + " is outside the window");
  if (max_r < 0) throw ArgumentError("max_r must be nonnegative");
  {
    std::vector<int> lo(t.coords().begin(), t.coords().end());
    std::vector<int> hi = lo;
    for (auto& c : lo) c -= max_r;
    for (auto& c : hi) c += max_r;
    const Volume full = Volume::box(Site(std::span<const int>(lo)), Site(std::span<const int>(hi)));
    if (!full.is_subset_of(window)) {
      throw GeometryError("site " + t.str() + " does not have a margin of " + std::to_string(max_r) +
                          " inside the window");
    }
  }
  const Alphabet& a = m.alphabet();
  const std::size_t q = a.size();
  const double tol = m.tolerance();
  const Volume tvol{t};

  for (int r = 0; r <= max_r; ++r) {
    const Volume near = ball(t, r, window).minus(t);
    const Volume far = window.minus(near).minus(t);

    // Conditions are z_near plus a symbol-or-absent choice on every far site.
    long double total = 1;
    for (std::size_t i = 0; i < near.size(); ++i) total *= static_cast<long double>(q);
    for (std::size_t i = 0; i < far.size(); ++i) total *= static_cast<long double>(q + 1);

    std::map<Configuration, std::vector<Scalar>> reference;
    auto reference_for = [&](const Configuration& zn) -> const std::vector<Scalar>& {
      auto it = reference.find(zn);
      if (it == reference.end()) it = reference.emplace(zn, finite_conditional(m, tvol, zn).probs()).first;
      return it->second;
    };
    auto far_condition = [&](const std::vector<std::size_t>& choice) {
      std::vector<Site> sites;
      std::vector<Symbol> sym;
      for (std::size_t i = 0; i < far.size(); ++i) {
        if (choice[i] == 0) continue;
        sites.push_back(far[i]);
        sym.push_back(static_cast<Symbol>(choice[i] - 1));
      }
      return Configuration(Volume(std::move(sites)), std::move(sym));
    };

    bool ok = true;
    if (total <= static_cast<long double>(exhaustive_limit)) {
      const std::uint64_t near_count = configuration_count(near, a);
      std::vector<std::size_t> choice(far.size(), 0);
      while (ok) {
        const bool any_far = std::any_of(choice.begin(), choice.end(), [](std::size_t c) { return c != 0; });
        if (any_far) {
          const Configuration zf = far_condition(choice);
          for (std::uint64_t i = 0; i < near_count && ok; ++i) {
            const Configuration zn = configuration_at(near, q, i);
            const auto g = finite_conditional(m, tvol, concat(zn, zf)).probs();
            ok = tables_equal(g, reference_for(zn), tol);
          }
        }
        std::size_t d = 0;
        while (d < choice.size() && ++choice[d] > q) choice[d++] = 0;
        if (d == choice.size()) break;
      }
    } else {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
      std::uniform_int_distribution<std::size_t> pick(0, q);
      std::uniform_int_distribution<std::size_t> sym(0, q - 1);
      for (std::uint64_t k = 0; k < exhaustive_limit / 50 && ok; ++k) {
        std::vector<Symbol> zs(near.size());
        for (auto& s : zs) s = static_cast<Symbol>(sym(rng));
        const Configuration zn(near, std::move(zs));
        std::vector<std::size_t> choice(far.size());
        for (auto& c : choice) c = pick(rng);
        const auto g = finite_conditional(m, tvol, concat(zn, far_condition(choice))).probs();
        ok = tables_equal(g, reference_for(zn), tol);
      }
    }
    if (ok) return r;
  }
  return std::nullopt;
}

}  // namespace gfl
