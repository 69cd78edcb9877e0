#include "gfl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gfl/error.hpp"
#include "gfl/models.hpp"
#include "gfl/parallel.hpp"
#include "gfl/tables.hpp"
#include "gfl/text.hpp"

namespace gfl::cli {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

namespace {

const std::map<std::string, std::string>& default_values() {
  static const std::map<std::string, std::string> d = {
      {"axioms", "all"},
      {"check", "false"},
      {"condition", ""},
      {"family", "standard:4"},
      {"filtration", "geometric"},
      {"gauge", ""},
      {"goldens", "goldens"},
      {"mode", "rational"},
      {"model", "ising:beta=0.4,d=1,window=11"},
      {"order", ""},
      {"out", "gfl-reports"},
      {"reference", ""},
      {"seed", "24301"},
      {"site", ""},
      {"tau", "1"},
      {"threads", "0"},
      {"tol", "1e-12"},
      {"volume", ""},
      {"witness", "oscillating-density"},
  };
  return d;
}

bool execution_only(const std::string& key) {
  return key == "out" || key == "threads" || key == "check" || key == "goldens";
}

}  // namespace

ExperimentConfig::ExperimentConfig() : values_(default_values()) {}

void ExperimentConfig::load_file(const std::string& path) {
  for (const auto& line : text::content_lines(text::read_file(path))) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line needs key=value: '" + line + "'");
    set(std::string(text::trim(std::string_view(line).substr(0, eq))),
        std::string(text::trim(std::string_view(line).substr(eq + 1))));
  }
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) throw ParseError("unknown config key '" + key + "'");
  values_[key] = value;
}

const std::string& ExperimentConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError("unknown config key '" + key + "'");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const { return Scalar::parse(get(key)).to_double(); }

long ExperimentConfig::get_long(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t used = 0;
    const long out = std::stol(v, &used);
    if (used != v.size()) throw ParseError("");
    return out;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "' needs an integer, got '" + v + "'");
  }
}

std::map<std::string, std::string> ExperimentConfig::header() const {
  std::map<std::string, std::string> h;
  for (const auto& [k, v] : values_) {
    if (!execution_only(k)) h[k] = v;
  }
  return h;
}

std::string ExperimentConfig::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : header()) os << k << " = " << v << '\n';
  return os.str();
}

// ---------------------------------------------------------------- filtrations and families

Site default_site(const Volume& window) {
  if (window.empty()) throw ArgumentError("empty window");
  return window[window.size() / 2];
}

namespace {

int covering_radius(const Volume& window, const Site& t) {
  int r = 0;
  for (const auto& s : window) r = std::max(r, s.linf_distance(t));
  return r;
}

std::vector<int> parse_ints(const std::string& list) {
  std::vector<int> out;
  for (const auto& item : text::split(list, ',')) {
    const Scalar v = Scalar::parse(item);
    if (!v.is_exact() || v.rational().get_den() != 1) throw ParseError("expected an integer radius, got '" + item + "'");
    out.push_back(static_cast<int>(v.rational().get_num().get_si()));
  }
  return out;
}

Volume lopsided_box(const Site& t, int r, const Volume& window) {
  std::vector<Site> sites;
  for (const auto& s : window) {
    bool inside = true;
    for (std::size_t i = 0; i < t.dim() && inside; ++i) inside = s[i] - t[i] >= -r && s[i] - t[i] <= 2 * r;
    if (inside) sites.push_back(s);
  }
  return Volume(std::move(sites));
}

}  // namespace

Filtration parse_filtration(const std::string& spec, const Volume& window, const Site& t) {
  if (!window.contains(t)) throw ArgumentError("site " + t.str() + " is outside the window");
  const int cover = covering_radius(window, t);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

  std::vector<int> linear;
  for (int r = 1; r <= cover; ++r) linear.push_back(r);
  if (linear.empty()) throw ArgumentError("window has no sites besides " + t.str());

  if (kind == "linear") return box_filtration(window, t, linear);
  if (kind == "geometric") {
    std::vector<int> radii;
    for (int r = 1; r <= cover; r *= 3) radii.push_back(r);
    if (radii.size() < 4) radii = linear;
    return box_filtration(window, t, radii);
  }
  if (kind == "box") return box_filtration(window, t, parse_ints(args));
  if (kind == "lopsided") {
    const auto radii = args.empty() ? linear : parse_ints(args);
    std::vector<Volume> stages;
    for (int r : radii) {
      Volume v = lopsided_box(t, r, window);
      if (stages.empty() || v.size() > stages.back().size()) stages.push_back(std::move(v));
    }
    return Filtration(window, std::move(stages));
  }
  if (kind == "stages") {
    std::vector<Volume> stages;
    for (const auto& v : text::split(args, '|')) stages.push_back(Volume::parse(v));
    return Filtration(window, std::move(stages));
  }
  throw ParseError("unknown filtration '" + spec + "'");
}

BoundaryFamily parse_family(const std::string& spec, const Alphabet& alphabet, std::uint64_t seed) {
  BoundaryFamily fam;
  std::vector<std::string> parts;
  const auto marked = static_cast<Symbol>(alphabet.size() - 1);
  auto add = [&](const BoundaryFamily& other) {
    for (const auto& g : other.generators) fam.generators.push_back(g);
    parts.push_back(other.description);
  };
  for (const auto& item : text::split(spec, '+')) {
    const auto colon = item.find(':');
    const std::string kind = item.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : item.substr(colon + 1);
    if (kind == "standard") {
      add(standard_family(alphabet, args.empty() ? 4 : static_cast<std::size_t>(std::stoul(args)), seed));
    } else if (kind == "constants") {
      add(standard_family(alphabet, 0, seed));
    } else if (kind == "random") {
      const std::size_t k = args.empty() ? 4 : static_cast<std::size_t>(std::stoul(args));
      BoundaryFamily f;
      for (std::size_t i = 0; i < k; ++i) f.generators.push_back(random_boundary(seed + i));
      f.description = std::to_string(k) + " hashed random boundaries (seed " + std::to_string(seed) + ")";
      add(f);
    } else if (kind == "oscillating" && args.empty()) {
      add(oscillating_density_family(alphabet));
    } else if (kind == "oscillating") {
      const auto d = text::split(args, ',');
      if (d.size() != 2) throw ParseError("oscillating needs two densities");
      BoundaryFamily f;
      f.generators.push_back(oscillating_density_boundary(mpq_class(d[0]), mpq_class(d[1]), marked, 0));
      f.description = f.generators.back().label;
      add(f);
    } else if (kind == "density") {
      BoundaryFamily f;
      f.generators.push_back(constant_density_boundary(mpq_class(args), marked, 0));
      f.description = f.generators.back().label;
      add(f);
    } else if (kind == "explicit") {
      BoundaryFamily f;
      f.generators.push_back(explicit_boundary(Configuration::parse(args, alphabet), "explicit"));
      f.description = "explicit boundary " + args;
      add(f);
    } else {
      throw ParseError("unknown family item '" + item + "'");
    }
  }
  if (fam.generators.empty()) throw ParseError("empty boundary family");
  for (std::size_t i = 0; i < parts.size(); ++i) fam.description += (i ? " + " : "") + parts[i];
  return fam;
}

// ---------------------------------------------------------------- commands

namespace {

struct Context {
  ExperimentConfig config;
  std::ostream& out;
  std::ostream& err;
};

ordered_json header_json(const ExperimentConfig& c) {
  ordered_json j;
  for (const auto& [k, v] : c.header()) j[k] = v;
  return j;
}

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path.string() + "'");
  f << body;
}

NumericMode mode_of(const ExperimentConfig& c) { return parse_numeric_mode(c.get("mode")); }

Site site_of(const ExperimentConfig& c, const Volume& window) {
  return c.get("site").empty() ? default_site(window) : Site::parse(c.get("site"));
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"') o += '"';
    o += ch;
  }
  return o + "\"";
}

std::vector<Volume> small_subvolumes(const Volume& window, std::size_t max_size) {
  std::vector<Volume> out;
  for (std::size_t i = 0; i < window.size(); ++i) {
    out.push_back(Volume{window[i]});
    if (max_size < 2) continue;
    for (std::size_t j = i + 1; j < window.size(); ++j) out.push_back(Volume{window[i], window[j]});
  }
  return out;
}

ValidationReport marginal_report(const RandomFieldModel& m) {
  ValidationReport r;
  r.axiom = "marginal consistency";
  const Volume& w = m.window();
  const bool whole = w.size() <= 14;
  for (const auto& v : small_subvolumes(w, 2)) {
    std::vector<Volume> supersets;
    if (whole && v != w) supersets.push_back(w);
    for (const auto& s : w) {
      if (!v.contains(s)) {
        supersets.push_back(v.unite(Volume{s}));
        break;
      }
    }
    for (const auto& s : supersets) {
      ++r.fixtures_checked;
      if (!check_marginal_consistency(m, s, v)) r.add_violation("marginal of " + s.str() + " on " + v.str());
    }
  }
  return r;
}

ordered_json report_json(const ValidationReport& r) { return ordered_json::parse(r.to_json()); }

int cmd_validate(Context& ctx) {
  const auto& c = ctx.config;
  const std::string descriptor = c.get("model");
  const fs::path out_dir = c.get("out");
  ordered_json doc;
  doc["config"] = header_json(c);
  doc["model"] = descriptor;
  std::vector<ValidationReport> reports;

  if (text::starts_with(descriptor, "table:")) {
    const auto raw = read_table(std::string(text::trim(descriptor.substr(6))));
    ValidationReport r;
    r.axiom = "distribution";
    r.fixtures_checked = 1;
    for (auto& v : distribution_violations(raw.volume, raw.alphabet, raw.values)) r.add_violation(std::move(v));
    reports.push_back(r);
  }
  if (reports.empty() || reports.front().ok()) {
    const ModelPtr m = model_from_descriptor(descriptor, mode_of(c));
    const std::string axioms = c.get("axioms");
    auto wants = [&](const std::string& a) {
      if (axioms == "all") return true;
      for (const auto& item : text::split(axioms, ',')) {
        if (item == a) return true;
      }
      return false;
    };
    FixturePlan plan;
    plan.seed = static_cast<std::uint64_t>(c.get_long("seed"));
    const auto pairs = pair_fixtures(m->window(), m->alphabet(), plan);
    if (wants("marginal")) reports.push_back(marginal_report(*m));
    const auto q = onepoint_spec_from_model(m);
    if (wants("1spec")) reports.push_back(validate_1spec(q, pairs));
    if (wants("spec")) reports.push_back(validate_spec(spec_from_model(m), volume_fixtures(m->window(), m->alphabet(), 2, plan)));
    if (wants("tef")) reports.push_back(validate_tef(tef_from_1spec(q), pairs));
    if (wants("potential") && text::starts_with(descriptor, "ising:")) {
      // Rebuild the potential of the demo and validate its autonomous objects.
      const std::string label = m->describe();
      double beta = 0.4;
      double h = 0.0;
      std::size_t d = 1;
      for (const auto& item : text::split(label.substr(6), ',')) {
        const auto eq = item.find('=');
        const std::string k = item.substr(0, eq);
        const std::string v = item.substr(eq + 1);
        if (k == "beta") beta = std::stod(v);
        if (k == "h") h = std::stod(v);
        if (k == "d") d = std::stoul(v);
      }
      const auto phi = ising_potential(beta, h, d);
      const auto tef = tef_from_potential(phi, m->window());
      auto r1 = validate_tef(tef, pairs);
      r1.axiom = "potential: transition energy field";
      const auto q1 = onepoint_spec_from_tef(tef);
      auto r2 = validate_1spec(q1, pairs);
      r2.axiom = "potential: 1-specification consistency";
      auto r3 = validate_spec(spec_from_onepoint(q1), volume_fixtures(m->window(), m->alphabet(), 2, plan));
      r3.axiom = "potential: specification consistency";
      reports.push_back(r1);
      reports.push_back(r2);
      reports.push_back(r3);
    }
  }

  bool ok = true;
  doc["reports"] = ordered_json::array();
  std::ostringstream csv;
  csv << "axiom,fixtures_checked,sampled,violation_count,max_residual\n";
  for (const auto& r : reports) {
    ok = ok && r.ok();
    doc["reports"].push_back(report_json(r));
    csv << csv_quote(r.axiom) << ',' << r.fixtures_checked << ',' << (r.sampled ? "true" : "false") << ','
        << r.violation_count << ',' << Scalar(r.max_residual).str() << '\n';
    ctx.out << (r.ok() ? "ok    " : "FAIL  ") << r.axiom << ": " << r.fixtures_checked << " fixtures, "
            << r.violation_count << " violations, max residual " << r.max_residual << '\n';
    for (const auto& v : r.violations) ctx.out << "      " << v << '\n';
  }
  doc["ok"] = ok;
  write_file(out_dir / "validate.json", doc.dump(2) + "\n");
  write_file(out_dir / "validate.csv", csv.str());
  return ok ? kExitOk : kExitViolations;
}

int cmd_diagnose(Context& ctx) {
  const auto& c = ctx.config;
  const ModelPtr m = model_from_descriptor(c.get("model"), mode_of(c));
  const Site t = site_of(c, m->window());
  const double tol = c.get_double("tol");
  const auto seed = static_cast<std::uint64_t>(c.get_long("seed"));
  const Filtration f = parse_filtration(c.get("filtration"), m->window(), t);
  const BoundaryFamily family = parse_family(c.get("family"), m->alphabet(), seed);
  const fs::path out_dir = c.get("out");

  const auto report = uniform_convergence_report(*m, t, f, family, tol);
  ordered_json doc;
  doc["config"] = header_json(c);
  const ordered_json body = ordered_json::parse(report.to_json());
  for (const auto& [k, v] : body.items()) doc[k] = v;

  // Filtration independence against the linear and lopsided boxes.
  std::vector<Filtration> fs_list{f};
  for (const char* alt : {"linear", "lopsided"}) {
    try {
      fs_list.push_back(parse_filtration(alt, m->window(), t));
    } catch (const Error&) {
    }
  }
  const auto indep = filtration_independence_check(*m, t, fs_list, family, tol);
  ordered_json ind = ordered_json::parse(indep.to_json());
  ind.erase("generators");
  doc["filtration_independence"] = ind;
  try {
    doc["quasilocality"] = ordered_json::parse(quasilocality_report(m, t, f, family, tol).to_json());
    doc["energy_criterion"] = ordered_json::parse(energy_criterion_report(m, t, f, family, tol).to_json());
  } catch (const PositivityError& e) {
    doc["energy_criterion"] = std::string("not applicable: ") + e.what();
  }
  const auto search = non_gibbs_witness(*m, t, f, parse_witness_strategy(c.get("witness")), tol, family);
  ordered_json ws;
  ws["strategy"] = std::string(to_string(search.strategy));
  ws["generators_searched"] = search.generators_searched;
  ws["found"] = search.witness.has_value();
  if (search.witness) {
    ws["generator"] = search.witness->label;
    ws["gap_trace"] = search.witness->gap_trace;
    ws["persistent_gap"] = search.witness->persistent_gap;
  }
  ws["note"] = search.note;
  doc["witness_search"] = ws;

  write_file(out_dir / "diagnose.json", doc.dump(2) + "\n");
  write_file(out_dir / "diagnose.csv", report.to_csv());
  ctx.out << "model " << report.model << ", site " << report.site << ", filtration " << report.filtration
          << ", family of " << report.family_size << '\n';
  for (std::size_t n = 0; n < report.sup_gaps.size(); ++n) {
    ctx.out << "  stage " << n + 1 << "  |Λ\\t| = " << report.volume_sizes[n]
            << "  sup gap = " << (report.sup_gaps[n] ? report.sup_gaps[n]->str() : "-") << '\n';
  }
  ctx.out << "verdict: " << to_string(report.verdict);
  if (report.witness) ctx.out << " (generator " << report.witness->label << ", gap " << report.witness->persistent_gap << ")";
  ctx.out << '\n';
  switch (report.verdict) {
    case Verdict::uniform_evidence:
      return kExitOk;
    case Verdict::divergence_witness:
      return kExitDivergence;
    case Verdict::inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

// ---------------------------------------------------------------- reproduce

using FileSet = std::map<std::string, std::string>;

FileSet reproduce_example1(const ExperimentConfig& c) {
  constexpr int n = 8;
  const Scalar half = Scalar::ratio(1, 2);
  auto [plus, minus] = example1_pair(n, half, half);
  const auto& chain = dynamic_cast<const MarkovChainPair&>(*plus);
  const Alphabet& a = plus->alphabet();

  std::ostringstream csv;
  csv << "t,condition,q_plus,q_minus,closed_form,equal\n";
  std::size_t rows = 0;
  bool all_equal = true;
  bool all_closed = true;
  for (int t = 1; t < n; ++t) {
    for (int ahead = 1; t + ahead <= n; ++ahead) {
      std::vector<Site> sites;
      for (int s = 1; s <= t + ahead; ++s) {
        if (s != t) sites.push_back(Site{s});
      }
      const Volume cond_vol(std::move(sites));
      for (const auto& y : enumerate_configurations(cond_vol, a)) {
        const auto qp = finite_conditional(*plus, Volume{Site{t}}, y).probs();
        const auto qm = finite_conditional(*minus, Volume{Site{t}}, y).probs();
        const int y_next = a.numeric_value(y.at(Site{t + 1}));
        const Scalar closed = t == 1 ? example1_first_conditional(chain.coupling(1), 1, y_next)
                                     : example1_interior_conditional(chain.coupling(t - 1), chain.coupling(t),
                                                                     a.numeric_value(y.at(Site{t - 1})), 1, y_next);
        const bool eq = qp == qm;
        all_equal = all_equal && eq;
        all_closed = all_closed && qp[1] == closed;
        csv << t << ',' << csv_quote(y.str(a)) << ',' << qp[1].str() << ',' << qm[1].str() << ',' << closed.str()
            << ',' << (eq && qp[1] == closed ? "true" : "false") << '\n';
        ++rows;
      }
    }
  }
  bool marginals = true;
  for (const auto* m : {plus.get(), minus.get()}) {
    for (int last = 1; last < n; ++last) {
      marginals = marginals && check_marginal_consistency(*m, Volume::interval(1, last + 1), Volume::interval(1, last));
    }
    marginals = marginals && check_marginal_consistency(*m, m->window(), Volume{Site{2}, Site{5}});
  }
  ordered_json doc;
  doc["config"] = header_json(c);
  doc["example"] = "example1";
  doc["horizon"] = n;
  doc["c"] = half.str();
  doc["kappa"] = half.str();
  std::vector<std::string> ks;
  for (int t = 1; t <= n; ++t) ks.push_back(chain.k(t).str());
  doc["k"] = ks;
  doc["p_plus_1(+1)"] = plus->probability(Configuration(Volume{Site{1}}, {1})).str();
  doc["p_minus_1(+1)"] = minus->probability(Configuration(Volume{Site{1}}, {1})).str();
  doc["conditions_checked"] = rows;
  doc["kernels_coincide"] = all_equal;
  doc["closed_form_matches"] = all_closed;
  doc["marginal_consistency"] = marginals;
  return {{"example1.json", doc.dump(2) + "\n"}, {"example1_kernels.csv", csv.str()}};
}

FileSet reproduce_example2(const ExperimentConfig& c) {
  const Scalar tau = Scalar::parse(c.get("tau"));
  const ModelPtr small = example2_model(tau, window_box(1, 13));
  const Alphabet& a = small->alphabet();

  std::ostringstream cond_csv;
  cond_csv << "sites,ones,conditional,closed_form,equal\n";
  bool all_equal = true;
  const Site t{0};
  for (std::size_t n = 0; n <= 12; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      std::vector<Site> sites;
      std::vector<Symbol> sym;
      for (std::size_t i = 1; i <= n; ++i) {
        sites.push_back(Site{static_cast<int>(i)});
        sym.push_back(i <= k ? 1 : 0);
      }
      const Configuration z(Volume(std::move(sites)), std::move(sym));
      const Scalar g = finite_conditional(*small, Volume{t}, z)[1];
      const Scalar closed = example2_conditional(k, n, tau);
      const bool eq = tau.is_exact() ? g == closed : approx_equal(g, closed);
      all_equal = all_equal && eq;
      cond_csv << n << ',' << k << ',' << g.str() << ',' << closed.str() << ',' << (eq ? "true" : "false") << '\n';
    }
  }

  const ModelPtr wide = example2_model(tau, window_box(1, 163));
  const Site center = default_site(wide->window());
  const Filtration f = parse_filtration("geometric", wide->window(), center);
  const auto search = non_gibbs_witness(*wide, center, f, WitnessStrategy::oscillating_density, c.get_double("tol"));
  std::string witness_csv = "stage,volume_size,value,sup_gap_to_previous\n";
  ordered_json wj;
  wj["site"] = center.str();
  wj["filtration"] = f.str();
  wj["found"] = search.witness.has_value();
  if (search.witness) {
    const BoundaryFamily family = oscillating_density_family(a);
    const auto& gen = family.generators[search.witness->generator];
    const auto est = limit_along_filtration(*wide, Volume{center}, gen.realize(f, Volume{center}, a), f, Scalar(0));
    witness_csv = est.to_csv(a);
    std::vector<std::string> gaps;
    for (const auto& st : est.stages) {
      if (st.sup_gap_to_previous) gaps.push_back(st.sup_gap_to_previous->str());
    }
    wj["generator"] = search.witness->label;
    wj["exact_gaps"] = gaps;
    wj["persistent_gap"] = search.witness->persistent_gap;
  }
  wj["note"] = search.note;

  std::ostringstream ham;
  ham << "p,x,hamiltonian\n";
  for (const auto& p : {Scalar(0), Scalar::ratio(1, 4), Scalar::ratio(1, 2), Scalar::ratio(3, 4), Scalar(1)}) {
    for (int x = 0; x <= 1; ++x) {
      const double h = example2_limiting_hamiltonian(p, x);
      ham << p.str() << ',' << x << ',' << (std::isinf(h) ? std::string("inf") : Scalar(h).str()) << '\n';
    }
  }

  ordered_json doc;
  doc["config"] = header_json(c);
  doc["example"] = "example2";
  doc["tau"] = tau.str();
  doc["conditionals_match_closed_form"] = all_equal;
  doc["witness"] = wj;
  return {{"example2.json", doc.dump(2) + "\n"},
          {"example2_conditionals.csv", cond_csv.str()},
          {"example2_witness.csv", witness_csv},
          {"example2_hamiltonian.csv", ham.str()}};
}

std::string first_difference(const std::string& expected, const std::string& actual) {
  std::istringstream e(expected);
  std::istringstream a(actual);
  std::string le;
  std::string la;
  for (std::size_t line = 1;; ++line) {
    const bool ge = static_cast<bool>(std::getline(e, le));
    const bool ga = static_cast<bool>(std::getline(a, la));
    if (!ge && !ga) return "";
    if (!ge || !ga || le != la) {
      return "line " + std::to_string(line) + ":\n  - " + (ge ? le : "<end of file>") + "\n  + " +
             (ga ? la : "<end of file>");
    }
  }
}

int cmd_reproduce(Context& ctx, const std::string& example) {
  const auto& c = ctx.config;
  FileSet files;
  if (example == "example1") {
    files = reproduce_example1(c);
  } else if (example == "example2") {
    files = reproduce_example2(c);
  } else {
    throw ArgumentError("unknown example '" + example + "' (expected example1 or example2)");
  }
  if (c.get("check") == "true") {
    const fs::path dir = fs::path(c.get("goldens")) / example;
    bool ok = true;
    for (const auto& [name, body] : files) {
      const fs::path p = dir / name;
      std::string expected;
      try {
        expected = text::read_file(p.string());
      } catch (const ParseError&) {
        ctx.out << "missing golden " << p.string() << '\n';
        ok = false;
        continue;
      }
      const auto diff = first_difference(expected, body);
      if (diff.empty()) {
        ctx.out << "match    " << p.string() << '\n';
      } else {
        ctx.out << "MISMATCH " << p.string() << " at " << diff << '\n';
        ok = false;
      }
    }
    return ok ? kExitOk : kExitViolations;
  }
  const fs::path dir = fs::path(c.get("out")) / example;
  for (const auto& [name, body] : files) {
    write_file(dir / name, body);
    ctx.out << "wrote " << (dir / name).string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- energy and reconstruct

Volume volume_of(const ExperimentConfig& c, const Volume& window) {
  if (c.get("volume").empty()) return Volume{site_of(c, window)};
  return Volume::parse(c.get("volume"));
}

int cmd_energy(Context& ctx) {
  const auto& c = ctx.config;
  const ModelPtr m = model_from_descriptor(c.get("model"), mode_of(c));
  const Alphabet& a = m->alphabet();
  const Volume v = volume_of(c, m->window());
  const Configuration z = Configuration::parse(c.get("condition"), a);
  const auto kernel = finite_conditional(*m, v, z);
  const auto e = transition_energy(kernel);
  const Configuration gauge =
      c.get("gauge").empty() ? Configuration::constant(v, 0) : Configuration::parse(c.get("gauge"), a);
  const auto h = hamiltonian_from_energy(e, gauge);
  const bool exact = mode_of(c) == NumericMode::rational;

  std::ostringstream delta;
  delta << "volume " << v.str() << "\nalphabet " << a.str() << "\n# condition " << z.str(a) << "\n# quantity "
        << (exact ? "exp(delta(x,u)) as exact ratio" : "delta(x,u)") << "\n# rows x|u\n";
  const auto xs = enumerate_configurations(v, a);
  for (std::size_t x = 0; x < xs.size(); ++x) {
    for (std::size_t u = 0; u < xs.size(); ++u) {
      delta << xs[x].str(a) << '|' << xs[u].str(a) << '\t'
            << (exact ? e.ratio(x, u).str() : Scalar(e.value(x, u)).str()) << '\n';
    }
  }
  std::vector<Scalar> hv;
  for (std::size_t x = 0; x < h.size(); ++x) hv.push_back(exact ? h.weight(x) : Scalar(h.value(x)));
  const std::string hamiltonian = format_table(
      v, a, hv,
      {"# condition " + z.str(a), "# gauge " + gauge.str(a),
       std::string("# quantity ") + (exact ? "exp(-H(x)) as exact ratio" : "H(x)")});

  const bool round_trip_delta = tables_equal(gibbs_form_from_energy(e, gauge).probs(), kernel.probs());
  const bool round_trip_h = tables_equal(gibbs_form_from_hamiltonian(h).probs(), kernel.probs());
  ordered_json doc;
  doc["config"] = header_json(c);
  doc["model"] = m->describe();
  doc["volume"] = v.str();
  doc["condition"] = z.str(a);
  doc["gauge"] = gauge.str(a);
  doc["antisymmetric"] = check_antisymmetry(e);
  doc["cocycle"] = check_cocycle(e);
  doc["gibbs_form_from_energy_round_trip"] = round_trip_delta;
  doc["gibbs_form_from_hamiltonian_round_trip"] = round_trip_h;

  const fs::path out_dir = c.get("out");
  write_file(out_dir / "energy_delta.tbl", delta.str());
  write_file(out_dir / "energy_hamiltonian.tbl", hamiltonian);
  write_file(out_dir / "energy.json", doc.dump(2) + "\n");
  ctx.out << hamiltonian;
  const bool ok = round_trip_delta && round_trip_h && doc["antisymmetric"].get<bool>() && doc["cocycle"].get<bool>();
  return ok ? kExitOk : kExitViolations;
}

int cmd_reconstruct(Context& ctx, const std::string& table_path) {
  const auto& c = ctx.config;
  const std::string descriptor = table_path.empty() ? c.get("model") : "table:" + table_path;
  const ModelPtr m = model_from_descriptor(descriptor, mode_of(c));
  const Alphabet& a = m->alphabet();
  const Volume v = c.get("volume").empty() ? m->window() : Volume::parse(c.get("volume"));
  const Configuration z = Configuration::parse(c.get("condition"), a);
  std::optional<Configuration> reference;
  if (!c.get("reference").empty()) reference = Configuration::parse(c.get("reference"), a);
  std::vector<Site> order;
  for (const auto& s : text::split_top_level(c.get("order"), ',')) order.push_back(Site::parse(s));

  const auto rebuilt = reconstruct_from_one_point(one_point_kernels(m), a, v, z, reference, order);
  const auto direct = finite_conditional(*m, v, z);
  const bool equal = tables_equal(rebuilt.probs(), direct.probs(), m->tolerance());
  const std::string table = format_table(v, a, rebuilt.probs(), {"# condition " + z.str(a)});

  ordered_json doc;
  doc["config"] = header_json(c);
  doc["model"] = m->describe();
  doc["volume"] = v.str();
  doc["condition"] = z.str(a);
  doc["equal_to_direct"] = equal;
  doc["max_difference"] = sup_difference(rebuilt.probs(), direct.probs()).str();
  const fs::path out_dir = c.get("out");
  write_file(out_dir / "reconstruct.tbl", table);
  write_file(out_dir / "reconstruct.json", doc.dump(2) + "\n");
  ctx.out << table << (equal ? "matches" : "DIFFERS FROM") << " the directly computed conditional\n";
  return equal ? kExitOk : kExitViolations;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional structure of lattice random fields: validators, diagnostics and example reproductions",
               "gfl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> given;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& [key, value] : default_values()) {
    if (key == "check") continue;
    opts[key] = app.add_option("--" + key, given[key], "default: " + (value.empty() ? "(empty)" : value));
  }
  bool check = false;
  app.add_flag("--check", check, "compare reproduced reports against the goldens");
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; command-line flags override it");

  auto* validate = app.add_subcommand("validate", "check consistency axioms of a model; exit 1 on violations");
  auto* diagnose = app.add_subcommand("diagnose", "uniform-convergence battery; exit 0, 2 or 3 by verdict");
  auto* reproduce = app.add_subcommand("reproduce", "regenerate the worked-example reports");
  std::string example;
  reproduce->add_option("example", example, "example1 or example2")->required();
  auto* energy = app.add_subcommand("energy", "dump transition-energy and Hamiltonian tables");
  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild a kernel from one-point conditionals of a table");
  std::string table_path;
  reconstruct->add_option("table", table_path, "distribution table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (const char* cap = std::getenv("GFL_ENUM_CAP")) set_enumeration_cap(std::stoull(cap));
    Context ctx{ExperimentConfig{}, out, err};
    if (!config_path.empty()) ctx.config.load_file(config_path);
    for (const auto& [key, opt] : opts) {
      if (opt->count() > 0) ctx.config.set(key, given[key]);
    }
    if (check) ctx.config.set("check", "true");
    set_max_threads(static_cast<unsigned>(ctx.config.get_long("threads")));

    if (*validate) return cmd_validate(ctx);
    if (*diagnose) return cmd_diagnose(ctx);
    if (*reproduce) return cmd_reproduce(ctx, example);
    if (*energy) return cmd_energy(ctx);
    if (*reconstruct) return cmd_reconstruct(ctx, table_path);
  } catch (const std::exception& e) {
    err << "gfl: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace gfl::cli
