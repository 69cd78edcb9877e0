#pragma once

#include <map>
#include <ostream>
#include <string>

#include "gfl/diagnostics.hpp"

namespace gfl::cli {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitError = 4;

/// Flat key=value settings. Every key has a default, and the full set that
/// determines an experiment is written into each report header.
class ExperimentConfig {
 public:
  ExperimentConfig();

  /// Lines `key = value`; `#` starts a comment.
  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  [[nodiscard]] const std::string& get(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] long get_long(const std::string& key) const;
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

  /// Settings that influence results; execution-only keys (out, threads, check) are left out.
  [[nodiscard]] std::map<std::string, std::string> header() const;
  /// `key = value` lines of the header, loadable by `load_file`.
  [[nodiscard]] std::string str() const;

 private:
  std::map<std::string, std::string> values_;
};

/// `geometric`, `linear`, `box:1,2,4`, `lopsided:1,2,3` or `stages:V1|V2|...`.
Filtration parse_filtration(const std::string& spec, const Volume& window, const Site& t);

/// `+`-separated items: `standard:K`, `constants`, `random:K`, `oscillating`,
/// `oscillating:lo,hi`, `density:p`, `explicit:<configuration>`.
BoundaryFamily parse_family(const std::string& spec, const Alphabet& alphabet, std::uint64_t seed);

/// Default site: the middle site of the window.
Site default_site(const Volume& window);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gfl::cli
