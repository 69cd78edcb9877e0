#include "gfl/tables.hpp"

#include <optional>
#include <sstream>

#include "gfl/error.hpp"
#include "gfl/text.hpp"

namespace gfl {

RawTable parse_table(std::string_view body) {
  std::optional<Volume> volume;
  std::optional<Alphabet> alphabet;
  std::vector<std::optional<Scalar>> rows;
  std::size_t line_no = 0;
  for (const auto& line : text::content_lines(body)) {
    ++line_no;
    if (text::starts_with(line, "volume")) {
      volume = Volume::parse(std::string_view(line).substr(6));
      continue;
    }
    if (text::starts_with(line, "alphabet")) {
      alphabet = Alphabet::parse(std::string_view(line).substr(8));
      continue;
    }
    if (!volume || !alphabet) throw ParseError("table rows must follow the volume and alphabet lines");
    if (rows.empty()) rows.resize(configuration_count(*volume, *alphabet));
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("row " + std::to_string(line_no) + " has no tab: '" + line + "'");
    const auto c = Configuration::parse(std::string_view(line).substr(0, tab), *alphabet);
    if (c.volume() != *volume) throw ParseError("row configuration does not cover the volume: '" + line + "'");
    auto& slot = rows[configuration_index(c, alphabet->size())];
    if (slot) throw ParseError("duplicate row for " + c.str(*alphabet));
    slot = Scalar::parse(text::trim(std::string_view(line).substr(tab + 1)));
  }
  if (!volume || !alphabet) throw ParseError("table needs volume and alphabet lines");
  RawTable t{*volume, *alphabet, {}};
  t.values.resize(configuration_count(*volume, *alphabet), Scalar(0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]) t.values[i] = *rows[i];
  }
  return t;
}

RawTable read_table(const std::string& path) { return parse_table(text::read_file(path)); }

namespace {

std::string ratio_text(const Scalar& v) {
  if (!v.is_exact()) return v.str();
  const auto& q = v.rational();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace

std::string format_table(const Volume& volume, const Alphabet& alphabet, const std::vector<Scalar>& values,
                         const std::vector<std::string>& extra_header) {
  if (values.size() != configuration_count(volume, alphabet)) throw DomainError("table size does not match volume");
  std::ostringstream out;
  out << "volume " << volume.str() << '\n' << "alphabet " << alphabet.str() << '\n';
  for (const auto& h : extra_header) out << h << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << configuration_at(volume, alphabet.size(), i).str(alphabet) << '\t' << ratio_text(values[i]) << '\n';
  }
  return out.str();
}

}  // namespace gfl
