#include "gfl/models.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gfl/error.hpp"
#include "gfl/specifications.hpp"
#include "gfl/tables.hpp"
#include "gfl/text.hpp"

namespace gfl {

namespace {

bool in_open_unit_interval(const Scalar& v) { return v > Scalar(0) && v < Scalar(1); }

Scalar as_mode(const Scalar& v, NumericMode mode) {
  return mode == NumericMode::floating ? Scalar(v.to_double()) : v;
}

FiniteDistribution table_by_probability(const RandomFieldModel& m, const Volume& v) {
  std::vector<Scalar> probs;
  probs.reserve(configuration_count(v, m.alphabet()));
  for (const auto& c : enumerate_configurations(v, m.alphabet())) probs.push_back(m.probability(c));
  return FiniteDistribution(v, m.alphabet(), std::move(probs), m.tolerance());
}

}  // namespace

// ---------------------------------------------------------------- product

ProductField::ProductField(Volume window, Scalar p) : window_(std::move(window)), p_(std::move(p)) {
  if (p_ < Scalar(0) || p_ > Scalar(1)) throw ArgumentError("product field needs p in [0, 1], got " + p_.str());
}

std::string ProductField::describe() const {
  return "product:p=" + p_.str() + ",window=" + std::to_string(window_.size());
}

FiniteDistribution ProductField::marginal(const Volume& v) const {
  require_in_window(v);
  return table_by_probability(*this, v);
}

Scalar ProductField::probability(const Configuration& c) const {
  require_in_window(c.volume());
  const Scalar q = Scalar(1) - p_;
  Scalar out(1);
  for (Symbol s : c.symbols()) out *= (s == 1 ? p_ : q);
  return out;
}

ModelPtr bernoulli_product(const Volume& window, const Scalar& p) { return std::make_shared<ProductField>(window, p); }

// ---------------------------------------------------------------- Example 1

MarkovChainPair::MarkovChainPair(std::vector<Scalar> couplings, Scalar kappa, int sign)
    : c_(std::move(couplings)), kappa_(std::move(kappa)), sign_(sign) {
  if (sign_ != 1 && sign_ != -1) throw ArgumentError("sign must be +1 or -1");
  if (c_.empty()) throw ArgumentError("horizon must be at least 2");
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (!in_open_unit_interval(c_[j])) {
      throw ArgumentError("coupling c_" + std::to_string(j + 1) + " = " + c_[j].str() + " is not in (0, 1)");
    }
  }
  if (!in_open_unit_interval(kappa_)) throw ArgumentError("kappa = " + kappa_.str() + " is not in (0, 1)");
  const std::size_t n = c_.size() + 1;
  k_.assign(n, kappa_);
  for (std::size_t t = n - 1; t-- > 0;) k_[t] = c_[t] * k_[t + 1];
  window_ = Volume::interval(1, static_cast<int>(n));
}

NumericMode MarkovChainPair::mode() const {
  bool exact = kappa_.is_exact();
  for (const auto& c : c_) exact = exact && c.is_exact();
  return exact ? NumericMode::rational : NumericMode::floating;
}

std::string MarkovChainPair::describe() const {
  std::string s = std::string("example1") + (sign_ > 0 ? "+" : "-") + ":N=" + std::to_string(horizon()) + ",c=";
  bool uniform = true;
  for (const auto& c : c_) uniform = uniform && c == c_.front();
  if (uniform) {
    s += c_.front().str();
  } else {
    for (std::size_t j = 0; j < c_.size(); ++j) s += (j ? ";" : "") + c_[j].str();
  }
  return s + ",kappa=" + kappa_.str();
}

FiniteDistribution MarkovChainPair::marginal(const Volume& v) const {
  require_in_window(v);
  return table_by_probability(*this, v);
}

Scalar MarkovChainPair::probability(const Configuration& c) const {
  require_in_window(c.volume());
  if (c.empty()) return Scalar(1);
  // Forward sum over the chain up to the last constrained site.
  const int last = c.volume().sites().back()[0];
  auto allowed = [&](int site, Symbol s) {
    const auto i = c.volume().index_of(Site{site});
    return i < 0 || c[static_cast<std::size_t>(i)] == s;
  };
  Scalar f[2];
  for (Symbol s = 0; s < 2; ++s) f[s] = allowed(1, s) ? Scalar(1) : Scalar(0);
  for (int j = 1; j < last; ++j) {
    const Scalar& cj = coupling(j);
    Scalar g[2];
    for (Symbol b = 0; b < 2; ++b) {
      if (!allowed(j + 1, b)) {
        g[b] = Scalar(0);
        continue;
      }
      Scalar acc(0);
      for (Symbol a = 0; a < 2; ++a) {
        const int prod = alphabet_.numeric_value(a) * alphabet_.numeric_value(b);
        acc += f[a] * (Scalar(1) + cj * Scalar(prod)) / Scalar(2);
      }
      g[b] = acc;
    }
    f[0] = g[0];
    f[1] = g[1];
  }
  Scalar total(0);
  for (Symbol s = 0; s < 2; ++s) {
    total += f[s] * (Scalar(1) + Scalar(sign_ * alphabet_.numeric_value(s)) * k(last)) / Scalar(2);
  }
  return total;
}

std::pair<ModelPtr, ModelPtr> example1_pair(int horizon, const std::vector<Scalar>& couplings, const Scalar& kappa) {
  if (horizon < 2) throw ArgumentError("horizon must be at least 2");
  if (couplings.size() != static_cast<std::size_t>(horizon - 1)) {
    throw ArgumentError("expected " + std::to_string(horizon - 1) + " couplings, got " +
                        std::to_string(couplings.size()));
  }
  return {std::make_shared<MarkovChainPair>(couplings, kappa, +1),
          std::make_shared<MarkovChainPair>(couplings, kappa, -1)};
}

std::pair<ModelPtr, ModelPtr> example1_pair(int horizon, const Scalar& coupling, const Scalar& kappa) {
  if (horizon < 2) throw ArgumentError("horizon must be at least 2");
  return example1_pair(horizon, std::vector<Scalar>(static_cast<std::size_t>(horizon - 1), coupling), kappa);
}

Scalar example1_interior_conditional(const Scalar& c_prev, const Scalar& c_next, int y_prev, int x, int y_next) {
  return (Scalar(1) + c_prev * Scalar(y_prev * x)) * (Scalar(1) + c_next * Scalar(x * y_next)) /
         (Scalar(2) * (Scalar(1) + c_prev * c_next * Scalar(y_prev * y_next)));
}

Scalar example1_first_conditional(const Scalar& c1, int x, int y2) {
  return (Scalar(1) + c1 * Scalar(x * y2)) / Scalar(2);
}

// ---------------------------------------------------------------- Example 2

BernoulliMixture::BernoulliMixture(Scalar tau, Volume window) : tau_(std::move(tau)), window_(std::move(window)) {
  if (tau_ <= Scalar(0)) throw ArgumentError("tau must be positive, got " + tau_.str());
  exact_ = tau_.is_exact() && tau_.rational().get_den() == 1 && tau_.rational().get_num().fits_slong_p();
  if (exact_) tau_int_ = tau_.rational().get_num().get_si();
}

std::string BernoulliMixture::describe() const {
  return "example2:tau=" + tau_.str() + ",window=" + std::to_string(window_.size());
}

Scalar BernoulliMixture::weight(std::size_t ones, std::size_t sites) const {
  if (ones > sites) throw DomainError("more ones than sites");
  if (exact_) {
    const auto fact = [](unsigned long n) {
      mpz_class r;
      mpz_fac_ui(r.get_mpz_t(), n);
      return r;
    };
    const auto t = static_cast<unsigned long>(tau_int_);
    const mpz_class num = mpz_class(tau_int_) * fact(ones + t - 1) * fact(sites - ones);
    return Scalar::ratio(num, fact(sites + t));
  }
  const double t = tau_.to_double();
  const double k = static_cast<double>(ones);
  const double n = static_cast<double>(sites);
  return Scalar(t * std::exp(std::lgamma(k + t) + std::lgamma(n - k + 1) - std::lgamma(n + t + 1)));
}

FiniteDistribution BernoulliMixture::marginal(const Volume& v) const {
  require_in_window(v);
  return table_by_probability(*this, v);
}

Scalar BernoulliMixture::probability(const Configuration& c) const {
  require_in_window(c.volume());
  return weight(c.count(1), c.size());
}

ModelPtr example2_model(const Scalar& tau, const Volume& window) {
  return std::make_shared<BernoulliMixture>(tau, window);
}

Scalar example2_conditional(std::size_t ones, std::size_t sites, const Scalar& tau) {
  return (Scalar(static_cast<long>(ones)) + tau) / (Scalar(static_cast<long>(sites)) + tau + Scalar(1));
}

double example2_limiting_hamiltonian(const Scalar& p, int x) {
  if (x != 0 && x != 1) throw ArgumentError("symbol must be 0 or 1");
  if (p < Scalar(0) || p > Scalar(1)) throw ArgumentError("density must lie in [0, 1], got " + p.str());
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (p.is_zero()) return x == 0 ? 0.0 : inf;
  if (p == Scalar(1)) return x == 1 ? 0.0 : inf;
  return x == 1 ? -log(p) : -log(Scalar(1) - p);
}

// ---------------------------------------------------------------- Ising

Volume window_box(std::size_t dimension, int side) {
  if (dimension == 0 || dimension > kMaxDimension) throw ArgumentError("dimension out of range");
  if (side < 1) throw ArgumentError("window side must be positive");
  return Volume::box(Site(std::vector<int>(dimension, 0)), Site(std::vector<int>(dimension, side - 1)));
}

ModelPtr ising_demo(double beta, double h, std::size_t dimension, int side) {
  if (dimension != 1 && dimension != 2) throw ArgumentError("Ising demo supports d = 1 or 2");
  const Volume window = window_box(dimension, side);
  std::ostringstream label;
  label << "ising:beta=" << beta << ",d=" << dimension << ",window=" << side;
  if (h != 0.0) label << ",h=" << h;
  auto table = finite_volume_gibbs(ising_potential(beta, h, dimension), window, window, Configuration{});
  return std::make_shared<TableField>(std::move(table), label.str());
}

// ---------------------------------------------------------------- descriptors

ModelPtr model_from_descriptor(const std::string& descriptor, NumericMode mode) {
  const auto colon = descriptor.find(':');
  const std::string name(text::trim(descriptor.substr(0, colon)));
  const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

  if (name == "table") {
    const auto raw = read_table(std::string(text::trim(rest)));
    FiniteDistribution table(raw.volume, raw.alphabet, raw.values);
    if (mode == NumericMode::floating) {
      std::vector<Scalar> probs;
      for (const auto& p : raw.values) probs.emplace_back(p.to_double());
      table = FiniteDistribution(raw.volume, raw.alphabet, std::move(probs));
    }
    return std::make_shared<TableField>(std::move(table), descriptor);
  }

  std::map<std::string, std::string> params;
  for (const auto& item : text::split(rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("model parameter needs key=value: '" + item + "'");
    params[std::string(text::trim(item.substr(0, eq)))] = std::string(text::trim(item.substr(eq + 1)));
  }
  auto take = [&](const std::string& key, const std::string& fallback) {
    auto it = params.find(key);
    std::string v = it == params.end() ? fallback : it->second;
    if (it != params.end()) params.erase(it);
    return v;
  };
  auto finish = [&]() {
    if (!params.empty()) throw ParseError("unknown parameter '" + params.begin()->first + "' for model " + name);
  };
  auto to_int = [](const std::string& s) {
    const Scalar v = Scalar::parse(s);
    if (!v.is_exact() || v.rational().get_den() != 1) throw ParseError("expected an integer, got '" + s + "'");
    return static_cast<int>(v.rational().get_num().get_si());
  };

  if (name == "example1" || name == "example1+" || name == "example1-") {
    const int n = to_int(take("N", "8"));
    const std::string cs = take("c", "1/2");
    const Scalar kappa = as_mode(Scalar::parse(take("kappa", "1/2")), mode);
    finish();
    std::vector<Scalar> couplings;
    for (const auto& c : text::split(cs, ';')) couplings.push_back(as_mode(Scalar::parse(c), mode));
    if (couplings.size() == 1 && n > 2) couplings.assign(static_cast<std::size_t>(n - 1), couplings.front());
    auto [plus, minus] = example1_pair(n, couplings, kappa);
    return name == "example1-" ? minus : plus;
  }
  if (name == "example2") {
    const Scalar tau = as_mode(Scalar::parse(take("tau", "1")), mode);
    const int side = to_int(take("window", "12"));
    const int d = to_int(take("d", "1"));
    finish();
    return example2_model(tau, window_box(static_cast<std::size_t>(d), side));
  }
  if (name == "ising") {
    const double beta = Scalar::parse(take("beta", "0.4")).to_double();
    const double h = Scalar::parse(take("h", "0")).to_double();
    const int d = to_int(take("d", "1"));
    const int side = to_int(take("window", "11"));
    finish();
    return ising_demo(beta, h, static_cast<std::size_t>(d), side);
  }
  if (name == "product") {
    const Scalar p = as_mode(Scalar::parse(take("p", "1/2")), mode);
    const int side = to_int(take("window", "9"));
    const int d = to_int(take("d", "1"));
    finish();
    return bernoulli_product(window_box(static_cast<std::size_t>(d), side), p);
  }
  throw ParseError("unknown model '" + name + "'");
}

}  // namespace gfl
