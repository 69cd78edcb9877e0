#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gfl/fields.hpp"

namespace gfl {

/// A probability table as read from text, before any validation.
struct RawTable {
  Volume volume;
  Alphabet alphabet;
  std::vector<Scalar> values;
};

/// Header lines `volume <sites>` and `alphabet <symbols>`, then one
/// `configuration<TAB>value` row per entry. Rows left out are zero.
RawTable parse_table(std::string_view body);
RawTable read_table(const std::string& path);

/// Rows in canonical order; exact ratios for rationals, 17 significant digits otherwise.
/// `extra_header` lines are written verbatim after the alphabet line.
std::string format_table(const Volume& volume, const Alphabet& alphabet, const std::vector<Scalar>& values,
                         const std::vector<std::string>& extra_header = {});

}  // namespace gfl
