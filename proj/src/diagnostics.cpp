#include "gfl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gfl/error.hpp"
#include "gfl/parallel.hpp"

namespace gfl {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::uniform_evidence:
      return "uniform-evidence";
    case Verdict::divergence_witness:
      return "divergence-witness";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> GeneratorTrace::gaps() const {
  std::vector<double> out;
  for (const auto& st : estimate.stages) {
    if (st.sup_gap_to_previous) out.push_back(st.sup_gap_to_previous->to_double());
  }
  return out;
}

namespace {

double persistent(const std::vector<double>& gaps) {
  if (gaps.size() < 3) return 0.0;
  return std::min({gaps[gaps.size() - 3], gaps[gaps.size() - 2], gaps[gaps.size() - 1]});
}

ordered_json witness_json(const Witness& w) {
  ordered_json j;
  j["generator"] = w.label;
  j["generator_index"] = w.generator;
  j["gap_trace"] = w.gap_trace;
  j["persistent_gap"] = w.persistent_gap;
  return j;
}

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

Verdict decide_verdict(const std::vector<std::optional<double>>& sup_gaps,
                       const std::vector<std::vector<double>>& generator_gaps, double tol,
                       std::optional<std::size_t>* divergent_generator) {
  if (divergent_generator) divergent_generator->reset();
  const std::size_t n = sup_gaps.size();
  if (n >= 4 && sup_gaps[n - 3] && sup_gaps[n - 2] && sup_gaps[n - 1]) {
    auto settled = [tol](double x) { return x <= tol ? 0.0 : x; };
    const double a = settled(*sup_gaps[n - 3]);
    const double b = settled(*sup_gaps[n - 2]);
    const double c = settled(*sup_gaps[n - 1]);
    if (a >= b && b >= c && c <= tol) return Verdict::uniform_evidence;
  }
  for (std::size_t g = 0; g < generator_gaps.size(); ++g) {
    if (generator_gaps[g].size() >= 3 && persistent(generator_gaps[g]) >= 10 * tol) {
      if (divergent_generator) *divergent_generator = g;
      return Verdict::divergence_witness;
    }
  }
  return Verdict::inconclusive;
}

std::string ConvergenceReport::to_json() const {
  ordered_json j;
  j["model"] = model;
  j["site"] = site;
  j["filtration"] = filtration;
  j["family"] = family;
  j["family_size"] = family_size;
  j["gap_tol"] = gap_tol;
  ordered_json stages = ordered_json::array();
  for (std::size_t n = 0; n < sup_gaps.size(); ++n) {
    ordered_json s;
    s["n"] = n + 1;
    s["volume_size"] = volume_sizes[n];
    s["sup_gap"] = sup_gaps[n] ? ordered_json(sup_gaps[n]->str()) : ordered_json(nullptr);
    stages.push_back(std::move(s));
  }
  j["stages"] = std::move(stages);
  j["verdict"] = std::string(to_string(verdict));
  if (witness) j["witness"] = witness_json(*witness);
  return j.dump(2);
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream os;
  os << "stage,volume_size,sup_gap";
  for (const auto& t : traces) os << ',' << csv_field("gap:" + t.label);
  os << '\n';
  for (std::size_t n = 0; n < sup_gaps.size(); ++n) {
    os << n + 1 << ',' << volume_sizes[n] << ',' << (sup_gaps[n] ? sup_gaps[n]->str() : "");
    for (const auto& t : traces) {
      const auto& gap = t.estimate.stages[n].sup_gap_to_previous;
      os << ',' << (gap ? gap->str() : "");
    }
    os << '\n';
  }
  return os.str();
}

ConvergenceReport uniform_convergence_report(const RandomFieldModel& m, const Site& t, const Filtration& f,
                                             const BoundaryFamily& family, double gap_tol) {
  if (family.size() == 0) throw ArgumentError("boundary family is empty");
  const Volume target{t};
  ConvergenceReport r;
  r.model = m.describe();
  r.site = t.str();
  r.filtration = f.str();
  r.family = family.description;
  r.family_size = family.size();
  r.gap_tol = gap_tol;
  r.traces = parallel_map<GeneratorTrace>(family.size(), [&](std::size_t g) {
    const auto& gen = family.generators[g];
    try {
      const auto boundary = gen.realize(f, target, m.alphabet());
      return GeneratorTrace{gen.label, limit_along_filtration(m, target, boundary, f, Scalar(gap_tol))};
    } catch (const NullConditionError& e) {
      throw NullConditionError(std::string(e.what()) + " (generator " + gen.label + ")");
    }
  });
  for (std::size_t n = 0; n < f.size(); ++n) {
    r.volume_sizes.push_back(f[n].minus(target).size());
    std::optional<Scalar> sup;
    for (const auto& tr : r.traces) {
      const auto& gap = tr.estimate.stages[n].sup_gap_to_previous;
      if (gap && (!sup || *gap > *sup)) sup = *gap;
    }
    r.sup_gaps.push_back(std::move(sup));
  }
  std::vector<std::optional<double>> sup_d;
  for (const auto& s : r.sup_gaps) sup_d.push_back(s ? std::optional<double>(s->to_double()) : std::nullopt);
  std::vector<std::vector<double>> per_gen;
  for (const auto& tr : r.traces) per_gen.push_back(tr.gaps());
  std::optional<std::size_t> divergent;
  r.verdict = decide_verdict(sup_d, per_gen, gap_tol, &divergent);
  if (divergent) r.witness = Witness{*divergent, r.traces[*divergent].label, per_gen[*divergent],
                                     persistent(per_gen[*divergent])};
  return r;
}

// ---------------------------------------------------------------- filtrations

std::string IndependenceReport::to_json() const {
  ordered_json j;
  j["agree"] = agree;
  j["max_discrepancy"] = max_discrepancy;
  j["filtrations"] = tables.empty() ? 0 : tables.front().size();
  if (!labels.empty()) {
    j["worst_generator"] = labels[worst_generator];
    j["worst_filtration"] = worst_filtration + 1;
  }
  ordered_json gens = ordered_json::array();
  for (std::size_t g = 0; g < tables.size(); ++g) {
    ordered_json e;
    e["generator"] = labels[g];
    ordered_json per = ordered_json::array();
    for (const auto& tab : tables[g]) {
      std::vector<std::string> vals;
      for (const auto& v : tab) vals.push_back(v.str());
      per.push_back(vals);
    }
    e["deepest_tables"] = std::move(per);
    gens.push_back(std::move(e));
  }
  j["generators"] = std::move(gens);
  return j.dump(2);
}

IndependenceReport filtration_independence_check(const RandomFieldModel& m, const Site& t,
                                                 const std::vector<Filtration>& filtrations,
                                                 const BoundaryFamily& family, double tol) {
  if (filtrations.size() < 2) throw ArgumentError("need at least two filtrations to compare");
  const Volume target{t};
  IndependenceReport r;
  for (const auto& gen : family.generators) r.labels.push_back(gen.label);
  r.tables = parallel_map<std::vector<std::vector<Scalar>>>(family.size(), [&](std::size_t g) {
    std::vector<std::vector<Scalar>> per;
    for (const auto& f : filtrations) {
      const auto boundary = family.generators[g].realize(f, target, m.alphabet());
      per.push_back(finite_conditional(m, target, restrict(boundary, f.last().minus(target))).probs());
    }
    return per;
  });
  r.agree = true;
  for (std::size_t g = 0; g < r.tables.size(); ++g) {
    for (std::size_t k = 1; k < r.tables[g].size(); ++k) {
      const double d = sup_distance(r.tables[g][k], r.tables[g][0]);
      if (d > r.max_discrepancy) {
        r.max_discrepancy = d;
        r.worst_generator = g;
        r.worst_filtration = k;
      }
      if (!tables_equal(r.tables[g][k], r.tables[g][0], tol)) r.agree = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------- moduli

std::string ModulusReport::to_json() const {
  ordered_json j;
  j["quantity"] = quantity;
  j["modulus"] = modulus;
  j["verdict"] = verdict;
  return j.dump(2);
}

std::string modulus_verdict(const std::vector<double>& modulus, double tol) {
  if (modulus.size() < 2) return "inconclusive";
  const std::size_t last = modulus.size() - 2;
  if (modulus[last] <= tol) return "quasilocal-evidence";
  if (last >= 2 && std::min({modulus[last - 2], modulus[last - 1], modulus[last]}) >= 10 * tol) {
    return "non-quasilocal-witness";
  }
  return "inconclusive";
}

namespace {

ModulusReport one_point_modulus(const OnePointKernelFn& kernels, const Site& t, const Filtration& f,
                                const BoundaryFamily& family, const Alphabet& alphabet, double tol) {
  ModulusReport r;
  r.quantity = "one-point kernels";
  r.modulus.assign(f.size(), 0.0);
  for (const auto& p : spliced_kernels(kernels, t, f, family, alphabet)) {
    r.modulus[p.stage] = std::max(r.modulus[p.stage], sup_distance(p.base, p.spliced));
  }
  r.verdict = modulus_verdict(r.modulus, tol);
  return r;
}

}  // namespace

ModulusReport quasilocality_report(ModelPtr m, const Site& t, const Filtration& f, const BoundaryFamily& family,
                                   double tol) {
  const Alphabet alphabet = m->alphabet();
  return one_point_modulus(one_point_kernels(std::move(m)), t, f, family, alphabet, tol);
}

ModulusReport quasilocality_report(const OnePointSpec& q, const Site& t, const Filtration& f,
                                   const BoundaryFamily& family, double tol) {
  return one_point_modulus(q.evaluate, t, f, family, q.alphabet, tol);
}

ModulusReport energy_criterion_report(ModelPtr m, const Site& t, const Filtration& f, const BoundaryFamily& family,
                                      double tol) {
  ModulusReport r;
  r.quantity = "transition energies";
  r.modulus = energy_quasilocality_modulus(std::move(m), t, f, family);
  r.verdict = modulus_verdict(r.modulus, tol);
  return r;
}

// ---------------------------------------------------------------- witnesses

std::string_view to_string(WitnessStrategy s) {
  switch (s) {
    case WitnessStrategy::oscillating_density:
      return "oscillating-density";
    case WitnessStrategy::exhaustive_small:
      return "exhaustive-small";
    case WitnessStrategy::user_family:
      return "user-family";
  }
  return "user-family";
}

WitnessStrategy parse_witness_strategy(std::string_view text) {
  if (text == "oscillating-density") return WitnessStrategy::oscillating_density;
  if (text == "exhaustive-small") return WitnessStrategy::exhaustive_small;
  if (text == "user-family") return WitnessStrategy::user_family;
  throw ParseError("unknown witness strategy '" + std::string(text) + "'");
}

BoundaryFamily oscillating_density_family(const Alphabet& alphabet) {
  const auto marked = static_cast<Symbol>(alphabet.size() - 1);
  BoundaryFamily fam;
  fam.generators.push_back(oscillating_density_boundary(mpq_class(1, 4), mpq_class(3, 4), marked, 0));
  fam.generators.push_back(oscillating_density_boundary(mpq_class(3, 4), mpq_class(1, 4), marked, 0));
  fam.generators.push_back(oscillating_density_boundary(mpq_class(0), mpq_class(1), marked, 0));
  fam.generators.push_back(oscillating_density_boundary(mpq_class(1), mpq_class(0), marked, 0));
  fam.description = "oscillating densities of symbol " + alphabet.name(marked) + ": 1/4<->3/4 and 0<->1, both phases";
  return fam;
}

WitnessSearch non_gibbs_witness(const RandomFieldModel& m, const Site& t, const Filtration& f,
                                WitnessStrategy strategy, double tol, const BoundaryFamily& family,
                                std::uint64_t exhaustive_limit) {
  WitnessSearch out;
  out.strategy = strategy;
  const Volume target{t};
  BoundaryFamily fam;
  switch (strategy) {
    case WitnessStrategy::oscillating_density:
      fam = oscillating_density_family(m.alphabet());
      break;
    case WitnessStrategy::user_family:
      fam = family;
      break;
    case WitnessStrategy::exhaustive_small: {
      const Volume rest = f.last().minus(target);
      const long double count = std::pow(static_cast<long double>(m.alphabet().size()), rest.size());
      if (count > static_cast<long double>(exhaustive_limit)) {
        out.note = "boundary space too large for exhaustive search";
        return out;
      }
      for (auto& c : enumerate_configurations(rest, m.alphabet())) {
        std::string label = c.str(m.alphabet());
        fam.generators.push_back(explicit_boundary(std::move(c), std::move(label)));
      }
      break;
    }
  }
  // Gap traces only; stages with a null condition rule that generator out.
  const auto traces = parallel_map<std::optional<std::vector<double>>>(fam.size(), [&](std::size_t g) {
    try {
      const auto boundary = fam.generators[g].realize(f, target, m.alphabet());
      return std::optional<std::vector<double>>(
          GeneratorTrace{fam.generators[g].label, limit_along_filtration(m, target, boundary, f, Scalar(tol))}.gaps());
    } catch (const NullConditionError&) {
      return std::optional<std::vector<double>>();
    }
  });
  out.generators_searched = fam.size();
  for (std::size_t g = 0; g < traces.size(); ++g) {
    if (!traces[g] || traces[g]->size() < 3) continue;
    const double p = persistent(*traces[g]);
    if (p >= 10 * tol) {
      out.witness = Witness{g, fam.generators[g].label, *traces[g], p};
      break;
    }
  }
  out.note = out.witness ? "Cauchy criterion fails over the last three stages"
                         : "none found; this is not evidence of Gibbsianness";
  return out;
}

}  // namespace gfl
