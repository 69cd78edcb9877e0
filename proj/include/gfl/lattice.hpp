#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gfl {

inline constexpr std::size_t kMaxDimension = 4;

/// A point of Z^d.
class Site {
 public:
  Site() = default;
  Site(std::initializer_list<int> coords);
  explicit Site(std::span<const int> coords);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] int operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] std::span<const int> coords() const { return {coords_.data(), dim_}; }

  [[nodiscard]] Site shifted(const Site& offset) const;
  [[nodiscard]] Site minus(const Site& other) const;
  [[nodiscard]] int linf_distance(const Site& other) const;
  [[nodiscard]] int l1_distance(const Site& other) const;

  /// `(x,y,...)`
  [[nodiscard]] std::string str() const;
  static Site parse(std::string_view text);

  friend bool operator==(const Site& a, const Site& b) = default;
  friend std::strong_ordering operator<=>(const Site& a, const Site& b);

 private:
  std::array<int, kMaxDimension> coords_{};
  std::uint8_t dim_ = 0;
};

/// A finite set of sites, kept sorted lexicographically.
class Volume {
 public:
  Volume() = default;
  Volume(std::initializer_list<Site> sites);
  explicit Volume(std::vector<Site> sites);

  /// Contiguous one-dimensional volume {first, ..., last}.
  static Volume interval(int first, int last);
  /// All sites with coordinates in [lo_i, hi_i].
  static Volume box(const Site& lo, const Site& hi);

  [[nodiscard]] std::size_t size() const { return sites_.size(); }
  [[nodiscard]] bool empty() const { return sites_.empty(); }
  [[nodiscard]] const std::vector<Site>& sites() const { return sites_; }
  [[nodiscard]] const Site& operator[](std::size_t i) const { return sites_[i]; }
  [[nodiscard]] auto begin() const { return sites_.begin(); }
  [[nodiscard]] auto end() const { return sites_.end(); }

  [[nodiscard]] bool contains(const Site& s) const;
  /// Position of `s` in canonical order, or -1.
  [[nodiscard]] std::ptrdiff_t index_of(const Site& s) const;
  [[nodiscard]] bool is_subset_of(const Volume& other) const;
  [[nodiscard]] bool is_disjoint_from(const Volume& other) const;

  [[nodiscard]] Volume unite(const Volume& other) const;
  [[nodiscard]] Volume minus(const Volume& other) const;
  [[nodiscard]] Volume minus(const Site& s) const;
  [[nodiscard]] Volume intersect(const Volume& other) const;

  [[nodiscard]] std::string str() const;
  /// Accepts `(0),(1),(2)` or `{}` for the empty volume.
  static Volume parse(std::string_view text);

  friend bool operator==(const Volume& a, const Volume& b) = default;
  friend auto operator<=>(const Volume& a, const Volume& b) = default;

 private:
  std::vector<Site> sites_;
};

using Symbol = std::uint8_t;

/// Ordered finite state space with printable symbol names.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  static Alphabet binary();  // {0, 1}
  static Alphabet spins();   // {-1, +1}

  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] const std::string& name(Symbol s) const { return names_.at(s); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  /// Accepts the symbol name; `1` also matches `+1`.
  [[nodiscard]] Symbol index_of(std::string_view name) const;
  /// Numeric value of a symbol name when it is an integer (spins, occupation numbers).
  [[nodiscard]] int numeric_value(Symbol s) const;

  [[nodiscard]] std::string str() const;
  static Alphabet parse(std::string_view text);

  friend bool operator==(const Alphabet& a, const Alphabet& b) = default;

 private:
  std::vector<std::string> names_;
};

/// An assignment of symbols to the sites of a volume.
class Configuration {
 public:
  Configuration() = default;
  Configuration(Volume volume, std::vector<Symbol> symbols);
  /// Every site gets the same symbol.
  static Configuration constant(Volume volume, Symbol s);

  [[nodiscard]] const Volume& volume() const { return volume_; }
  [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }
  [[nodiscard]] std::size_t size() const { return symbols_.size(); }
  [[nodiscard]] bool empty() const { return symbols_.empty(); }
  [[nodiscard]] Symbol at(const Site& s) const;
  [[nodiscard]] Symbol operator[](std::size_t i) const { return symbols_[i]; }

  /// Number of sites carrying symbol `s`.
  [[nodiscard]] std::size_t count(Symbol s) const;

  [[nodiscard]] Configuration with(const Site& s, Symbol value) const;

  /// `(0,0)=+1;(0,1)=-1`
  [[nodiscard]] std::string str(const Alphabet& alphabet) const;
  static Configuration parse(std::string_view text, const Alphabet& alphabet);

  friend bool operator==(const Configuration& a, const Configuration& b) = default;
  friend auto operator<=>(const Configuration& a, const Configuration& b) = default;

 private:
  Volume volume_;
  std::vector<Symbol> symbols_;
};

/// Configuration on the union of two disjoint domains.
Configuration concat(const Configuration& a, const Configuration& b);
/// Restriction to a subvolume.
Configuration restrict(const Configuration& c, const Volume& target);

/// Maximum number of configurations any enumeration may produce.
/// Defaults to 2^24; the GFL_ENUM_CAP environment variable overrides it.
std::uint64_t enumeration_cap();
void set_enumeration_cap(std::uint64_t cap);

/// |A|^|V|, or throws CapacityError if it exceeds the cap.
std::uint64_t configuration_count(const Volume& volume, const Alphabet& alphabet);

/// Position of `c` in canonical order: the first site is the most significant digit.
std::uint64_t configuration_index(const Configuration& c, std::size_t alphabet_size);
Configuration configuration_at(const Volume& volume, std::size_t alphabet_size, std::uint64_t index);

/// All |A|^|V| configurations in canonical lexicographic order.
std::vector<Configuration> enumerate_configurations(const Volume& volume, const Alphabet& alphabet);

/// Strictly increasing sequence of volumes inside a window.
class Filtration {
 public:
  Filtration(Volume window, std::vector<Volume> stages);

  [[nodiscard]] const Volume& window() const { return window_; }
  [[nodiscard]] const std::vector<Volume>& stages() const { return stages_; }
  [[nodiscard]] std::size_t size() const { return stages_.size(); }
  [[nodiscard]] const Volume& operator[](std::size_t n) const { return stages_[n]; }
  [[nodiscard]] const Volume& last() const { return stages_.back(); }
  /// True when the final stage is the whole window.
  [[nodiscard]] bool exhausts_window() const { return stages_.back() == window_; }

  [[nodiscard]] std::string str() const;

 private:
  Volume window_;
  std::vector<Volume> stages_;
};

/// L-infinity ball of radius r around `center`, clipped to `window`.
Volume ball(const Site& center, int radius, const Volume& window);

/// Boxes of the given radii around `center`, clipped to `window`.
Filtration box_filtration(const Volume& window, const Site& center, std::span<const int> radii);

class NeighborhoodSystem {
 public:
  explicit NeighborhoodSystem(std::map<Site, Volume> neighbors);

  /// Sites at L1 distance one, inside the window.
  static NeighborhoodSystem nearest_neighbor(const Volume& window);

  [[nodiscard]] const Volume& neighbors(const Site& t) const;
  [[nodiscard]] bool is_symmetric() const;

 private:
  std::map<Site, Volume> neighbors_;
};

}  // namespace gfl
