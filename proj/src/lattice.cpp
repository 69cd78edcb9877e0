#include "gfl/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "gfl/error.hpp"

namespace gfl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::string buf(s);
  char* end = nullptr;
  const long v = std::strtol(buf.c_str(), &end, 10);
  if (buf.empty() || end != buf.c_str() + buf.size()) throw ParseError("bad integer '" + buf + "'");
  return static_cast<int>(v);
}

}  // namespace

// ---------------------------------------------------------------- Site

Site::Site(std::initializer_list<int> coords) : Site(std::span<const int>(coords.begin(), coords.size())) {}

Site::Site(std::span<const int> coords) {
  if (coords.empty() || coords.size() > kMaxDimension) {
    throw ArgumentError("site dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
  }
  std::copy(coords.begin(), coords.end(), coords_.begin());
  dim_ = static_cast<std::uint8_t>(coords.size());
}

Site Site::shifted(const Site& offset) const {
  if (offset.dim_ != dim_) throw ArgumentError("dimension mismatch");
  Site r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.coords_[i] += offset.coords_[i];
  return r;
}

Site Site::minus(const Site& other) const {
  if (other.dim_ != dim_) throw ArgumentError("dimension mismatch");
  Site r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.coords_[i] -= other.coords_[i];
  return r;
}

int Site::linf_distance(const Site& other) const {
  int d = 0;
  for (std::size_t i = 0; i < dim_; ++i) d = std::max(d, std::abs(coords_[i] - other.coords_[i]));
  return d;
}

int Site::l1_distance(const Site& other) const {
  int d = 0;
  for (std::size_t i = 0; i < dim_; ++i) d += std::abs(coords_[i] - other.coords_[i]);
  return d;
}

std::string Site::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

Site Site::parse(std::string_view text) {
  text = trim(text);
  if (text.size() < 3 || text.front() != '(' || text.back() != ')') {
    throw ParseError("site must look like (i,j,...): '" + std::string(text) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<int> coords;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    coords.push_back(parse_int(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Site(std::span<const int>(coords));
}

std::strong_ordering operator<=>(const Site& a, const Site& b) {
  if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
  for (std::size_t i = 0; i < a.dim_; ++i) {
    if (auto c = a.coords_[i] <=> b.coords_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Volume

Volume::Volume(std::initializer_list<Site> sites) : Volume(std::vector<Site>(sites)) {}

Volume::Volume(std::vector<Site> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  for (const auto& s : sites_) {
    if (s.dim() != sites_.front().dim()) throw ArgumentError("volume mixes lattice dimensions");
  }
}

Volume Volume::interval(int first, int last) {
  std::vector<Site> v;
  for (int i = first; i <= last; ++i) v.push_back(Site{i});
  return Volume(std::move(v));
}

Volume Volume::box(const Site& lo, const Site& hi) {
  if (lo.dim() != hi.dim()) throw ArgumentError("dimension mismatch");
  const std::size_t d = lo.dim();
  for (std::size_t i = 0; i < d; ++i) {
    if (hi[i] < lo[i]) return {};
  }
  std::vector<Site> v;
  std::vector<int> cur(lo.coords().begin(), lo.coords().end());
  while (true) {
    v.emplace_back(std::span<const int>(cur));
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (cur[i] < hi[i]) {
        ++cur[i];
        break;
      }
      cur[i] = lo[i];
      if (i == 0) return Volume(std::move(v));
    }
  }
}

bool Volume::contains(const Site& s) const { return std::binary_search(sites_.begin(), sites_.end(), s); }

std::ptrdiff_t Volume::index_of(const Site& s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || *it != s) return -1;
  return it - sites_.begin();
}

bool Volume::is_subset_of(const Volume& other) const {
  return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

bool Volume::is_disjoint_from(const Volume& other) const {
  auto a = sites_.begin();
  auto b = other.sites_.begin();
  while (a != sites_.end() && b != other.sites_.end()) {
    if (*a == *b) return false;
    if (*a < *b) ++a;
    else ++b;
  }
  return true;
}

Volume Volume::unite(const Volume& other) const {
  Volume r;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(r.sites_));
  return r;
}

Volume Volume::minus(const Volume& other) const {
  Volume r;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(r.sites_));
  return r;
}

Volume Volume::minus(const Site& s) const {
  Volume r = *this;
  auto it = std::lower_bound(r.sites_.begin(), r.sites_.end(), s);
  if (it != r.sites_.end() && *it == s) r.sites_.erase(it);
  return r;
}

Volume Volume::intersect(const Volume& other) const {
  Volume r;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(r.sites_));
  return r;
}

std::string Volume::str() const {
  if (sites_.empty()) return "{}";
  std::string s;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (i) s += ',';
    s += sites_[i].str();
  }
  return s;
}

Volume Volume::parse(std::string_view text) {
  text = trim(text);
  if (text.empty() || text == "{}") return {};
  std::vector<Site> sites;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('(', pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = text.find(')', open);
    if (close == std::string_view::npos) throw ParseError("unterminated site in '" + std::string(text) + "'");
    sites.push_back(Site::parse(text.substr(open, close - open + 1)));
    pos = close + 1;
  }
  if (sites.empty()) throw ParseError("no sites in '" + std::string(text) + "'");
  return Volume(std::move(sites));
}

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw ArgumentError("an alphabet needs at least two symbols");
  if (names_.size() > 255) throw ArgumentError("alphabet too large");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw ArgumentError("duplicate symbol '" + names_[i] + "'");
    }
  }
}

Alphabet Alphabet::binary() { return Alphabet({"0", "1"}); }
Alphabet Alphabet::spins() { return Alphabet({"-1", "+1"}); }

Symbol Alphabet::index_of(std::string_view name) const {
  name = trim(name);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Symbol>(i);
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].size() > 1 && names_[i].front() == '+' && std::string_view(names_[i]).substr(1) == name) {
      return static_cast<Symbol>(i);
    }
  }
  throw ParseError("unknown symbol '" + std::string(name) + "' for alphabet " + str());
}

int Alphabet::numeric_value(Symbol s) const { return parse_int(name(s)); }

std::string Alphabet::str() const {
  std::string s;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) s += ',';
    s += names_[i];
  }
  return s;
}

Alphabet Alphabet::parse(std::string_view text) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  text = trim(text);
  while (true) {
    const std::size_t comma = text.find(',', pos);
    names.emplace_back(trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Alphabet(std::move(names));
}

// ---------------------------------------------------------------- Configuration

Configuration::Configuration(Volume volume, std::vector<Symbol> symbols)
    : volume_(std::move(volume)), symbols_(std::move(symbols)) {
  if (volume_.size() != symbols_.size()) {
    throw DomainError("configuration has " + std::to_string(symbols_.size()) + " symbols for " +
                      std::to_string(volume_.size()) + " sites");
  }
}

Configuration Configuration::constant(Volume volume, Symbol s) {
  std::vector<Symbol> sym(volume.size(), s);
  return Configuration(std::move(volume), std::move(sym));
}

Symbol Configuration::at(const Site& s) const {
  const auto i = volume_.index_of(s);
  if (i < 0) throw DomainError("site " + s.str() + " is outside the configuration domain");
  return symbols_[static_cast<std::size_t>(i)];
}

std::size_t Configuration::count(Symbol s) const {
  return static_cast<std::size_t>(std::count(symbols_.begin(), symbols_.end(), s));
}

Configuration Configuration::with(const Site& s, Symbol value) const {
  const auto i = volume_.index_of(s);
  if (i < 0) throw DomainError("site " + s.str() + " is outside the configuration domain");
  Configuration c = *this;
  c.symbols_[static_cast<std::size_t>(i)] = value;
  return c;
}

std::string Configuration::str(const Alphabet& alphabet) const {
  std::string s;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) s += ';';
    s += volume_[i].str() + "=" + alphabet.name(symbols_[i]);
  }
  return s;
}

Configuration Configuration::parse(std::string_view text, const Alphabet& alphabet) {
  text = trim(text);
  std::vector<std::pair<Site, Symbol>> pairs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t semi = text.find(';', pos);
    if (semi == std::string_view::npos) semi = text.size();
    const auto item = trim(text.substr(pos, semi - pos));
    pos = semi + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected site=symbol, got '" + std::string(item) + "'");
    pairs.emplace_back(Site::parse(item.substr(0, eq)), alphabet.index_of(item.substr(eq + 1)));
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<Site> sites;
  std::vector<Symbol> symbols;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i && pairs[i].first == pairs[i - 1].first) {
      throw ParseError("site " + pairs[i].first.str() + " assigned twice");
    }
    sites.push_back(pairs[i].first);
    symbols.push_back(pairs[i].second);
  }
  return Configuration(Volume(std::move(sites)), std::move(symbols));
}

Configuration concat(const Configuration& a, const Configuration& b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  const auto& va = a.volume().sites();
  const auto& vb = b.volume().sites();
  std::vector<Site> sites;
  std::vector<Symbol> symbols;
  sites.reserve(va.size() + vb.size());
  symbols.reserve(va.size() + vb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < va.size() || j < vb.size()) {
    if (j == vb.size() || (i < va.size() && va[i] < vb[j])) {
      sites.push_back(va[i]);
      symbols.push_back(a[i++]);
    } else if (i == va.size() || vb[j] < va[i]) {
      sites.push_back(vb[j]);
      symbols.push_back(b[j++]);
    } else {
      throw DomainError("cannot concatenate: site " + va[i].str() + " is in both domains");
    }
  }
  return Configuration(Volume(std::move(sites)), std::move(symbols));
}

Configuration restrict(const Configuration& c, const Volume& target) {
  std::vector<Symbol> symbols;
  symbols.reserve(target.size());
  const auto& src = c.volume().sites();
  std::size_t i = 0;
  for (const auto& s : target) {
    while (i < src.size() && src[i] < s) ++i;
    if (i == src.size() || src[i] != s) {
      throw DomainError("cannot restrict: site " + s.str() + " is outside the configuration domain");
    }
    symbols.push_back(c[i]);
  }
  return Configuration(target, std::move(symbols));
}

// ---------------------------------------------------------------- enumeration

namespace {

std::uint64_t initial_cap() {
  if (const char* env = std::getenv("GFL_ENUM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::uint64_t{1} << 24;
}

std::uint64_t& cap_storage() {
  static std::uint64_t cap = initial_cap();
  return cap;
}

}  // namespace

std::uint64_t enumeration_cap() { return cap_storage(); }
void set_enumeration_cap(std::uint64_t cap) { cap_storage() = cap; }

std::uint64_t configuration_count(const Volume& volume, const Alphabet& alphabet) {
  const std::uint64_t cap = enumeration_cap();
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < volume.size(); ++i) {
    if (n > cap / alphabet.size()) {
      throw CapacityError("enumerating " + std::to_string(alphabet.size()) + "^" + std::to_string(volume.size()) +
                          " configurations exceeds the cap of " + std::to_string(cap));
    }
    n *= alphabet.size();
  }
  if (n > cap) throw CapacityError("configuration count " + std::to_string(n) + " exceeds the cap");
  return n;
}

std::uint64_t configuration_index(const Configuration& c, std::size_t alphabet_size) {
  std::uint64_t idx = 0;
  for (Symbol s : c.symbols()) idx = idx * alphabet_size + s;
  return idx;
}

Configuration configuration_at(const Volume& volume, std::size_t alphabet_size, std::uint64_t index) {
  std::vector<Symbol> symbols(volume.size());
  for (std::size_t i = volume.size(); i > 0; --i) {
    symbols[i - 1] = static_cast<Symbol>(index % alphabet_size);
    index /= alphabet_size;
  }
  return Configuration(volume, std::move(symbols));
}

std::vector<Configuration> enumerate_configurations(const Volume& volume, const Alphabet& alphabet) {
  const std::uint64_t n = configuration_count(volume, alphabet);
  std::vector<Configuration> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(configuration_at(volume, alphabet.size(), i));
  return out;
}

// ---------------------------------------------------------------- Filtration

Filtration::Filtration(Volume window, std::vector<Volume> stages)
    : window_(std::move(window)), stages_(std::move(stages)) {
  if (stages_.empty()) throw ArgumentError("a filtration needs at least one stage");
  for (std::size_t n = 0; n < stages_.size(); ++n) {
    if (stages_[n].empty()) throw ArgumentError("filtration stage " + std::to_string(n + 1) + " is empty");
    if (!stages_[n].is_subset_of(window_)) {
      throw ArgumentError("filtration stage " + std::to_string(n + 1) + " leaves the window");
    }
    if (n > 0 && (!stages_[n - 1].is_subset_of(stages_[n]) || stages_[n - 1].size() == stages_[n].size())) {
      throw ArgumentError("filtration stages " + std::to_string(n) + " and " + std::to_string(n + 1) +
                          " are not strictly increasing");
    }
  }
}

std::string Filtration::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t n = 0; n < stages_.size(); ++n) os << (n ? "," : "") << stages_[n].size();
  os << "]";
  return os.str();
}

Volume ball(const Site& center, int radius, const Volume& window) {
  std::vector<Site> v;
  for (const auto& s : window) {
    if (s.linf_distance(center) <= radius) v.push_back(s);
  }
  return Volume(std::move(v));
}

Filtration box_filtration(const Volume& window, const Site& center, std::span<const int> radii) {
  if (radii.empty()) throw ArgumentError("no radii given");
  std::vector<Volume> stages;
  for (std::size_t n = 0; n < radii.size(); ++n) {
    if (radii[n] < 0) throw ArgumentError("negative radius");
    if (n > 0 && radii[n] <= radii[n - 1]) throw ArgumentError("radii must be strictly increasing");
    stages.push_back(ball(center, radii[n], window));
  }
  return Filtration(window, std::move(stages));
}

// ---------------------------------------------------------------- NeighborhoodSystem

NeighborhoodSystem::NeighborhoodSystem(std::map<Site, Volume> neighbors) : neighbors_(std::move(neighbors)) {
  for (const auto& [t, nb] : neighbors_) {
    if (nb.contains(t)) throw ArgumentError("site " + t.str() + " is its own neighbor");
  }
}

NeighborhoodSystem NeighborhoodSystem::nearest_neighbor(const Volume& window) {
  std::map<Site, Volume> m;
  for (const auto& t : window) {
    std::vector<Site> nb;
    for (const auto& s : window) {
      if (s.l1_distance(t) == 1) nb.push_back(s);
    }
    m.emplace(t, Volume(std::move(nb)));
  }
  return NeighborhoodSystem(std::move(m));
}

const Volume& NeighborhoodSystem::neighbors(const Site& t) const {
  auto it = neighbors_.find(t);
  if (it == neighbors_.end()) throw DomainError("site " + t.str() + " has no neighborhood entry");
  return it->second;
}

bool NeighborhoodSystem::is_symmetric() const {
  for (const auto& [t, nb] : neighbors_) {
    for (const auto& s : nb) {
      auto it = neighbors_.find(s);
      if (it == neighbors_.end() || !it->second.contains(t)) return false;
    }
  }
  return true;
}

}  // namespace gfl
