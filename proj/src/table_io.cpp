#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/io.hpp"
#include "d2dcoex/waveform.hpp"

namespace d2dcoex {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Column (1-based) of field `index` within `line`.
int column_of(std::string_view line, std::size_t index, char sep) {
  std::size_t col = 0;
  for (std::size_t i = 0; i < index; ++i) col = line.find(sep, col) + 1;
  return static_cast<int>(col) + 1;
}

double parse_double(std::string_view field, const std::string& source, int line, int column) {
  const std::string s(trim(field));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError(source, line, column, "expected a number, found '" + s + "'");
  return v;
}

long parse_int(std::string_view field, const std::string& source, int line, int column) {
  const std::string s(trim(field));
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError(source, line, column, "expected an integer, found '" + s + "'");
  return v;
}

}  // namespace

std::string format_table(const InterferenceTable& table) {
  std::string out = "# " + to_string(table.interferer()) + "," + to_string(table.victim()) + "," +
                    to_string(table.method()) + "," + std::to_string(table.half_span()) + ",";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g\n", table.reference_power());
  out += buf;
  for (int l = -table.half_span(); l <= table.half_span(); ++l) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", l, table(l));
    out += buf;
  }
  return out;
}

InterferenceTable parse_table(std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(source, 1, 1, "empty table file");

  const std::string_view header = trim(lines[0]);
  if (!header.starts_with("#")) throw ParseError(source, 1, 1, "expected '# interferer,victim,method,L,reference_power'");
  std::string_view body = header.substr(1);
  const auto fields = split(body, ',');
  if (fields.size() != 5)
    throw ParseError(source, 1, 1, "header must have 5 fields, found " + std::to_string(fields.size()));

  auto header_col = [&](std::size_t i) { return column_of(body, i, ',') + 1; };
  WaveformKind interferer, victim;
  TableMethod method;
  try {
    interferer = parse_waveform_kind(trim(fields[0]));
  } catch (const Error& e) {
    throw ParseError(source, 1, header_col(0), e.what());
  }
  try {
    victim = parse_waveform_kind(trim(fields[1]));
  } catch (const Error& e) {
    throw ParseError(source, 1, header_col(1), e.what());
  }
  try {
    method = parse_table_method(trim(fields[2]));
  } catch (const Error& e) {
    throw ParseError(source, 1, header_col(2), e.what());
  }
  const long half_span = parse_int(fields[3], source, 1, header_col(3));
  if (half_span < 1) throw ParseError(source, 1, header_col(3), "L must be at least 1");
  const double reference_power = parse_double(fields[4], source, 1, header_col(4));

  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(2 * half_span + 1));
  long expected = -half_span;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.starts_with("#")) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 2)
      throw ParseError(source, line_no, 1, "expected 'l,value', found " + std::to_string(cols.size()) + " fields");
    const long l = parse_int(cols[0], source, line_no, 1);
    if (l != expected)
      throw ParseError(source, line_no, 1,
                       "expected l=" + std::to_string(expected) + ", found l=" + std::to_string(l));
    const double v = parse_double(cols[1], source, line_no, column_of(line, 1, ','));
    if (v < 0.0 || !std::isfinite(v))
      throw ValidationError(source + ":" + std::to_string(line_no) + ": I(" + std::to_string(l) +
                            ") = " + std::string(trim(cols[1])) + " must be finite and nonnegative");
    coeffs.push_back(v);
    ++expected;
  }
  if (expected != half_span + 1)
    throw ParseError(source, static_cast<int>(lines.size()) + 1, 1,
                     "table ends before l=" + std::to_string(expected) + " (L=" + std::to_string(half_span) + ")");
  return InterferenceTable(interferer, victim, method, reference_power, std::move(coeffs));
}

void save_table(const InterferenceTable& table, const std::filesystem::path& path) {
  write_file_atomic(path, format_table(table));
}

InterferenceTable load_table(const std::filesystem::path& path) {
  return parse_table(read_file(path), path.string());
}

TableSet load_table_set(const std::filesystem::path& dir) {
  auto load = [&](Waveform a, Waveform b) {
    InterferenceTable t = load_table(dir / table_file_name(a, b));
    if (t.interferer().kind != a || t.victim().kind != b)
      throw ValidationError((dir / table_file_name(a, b)).string() + ": header pairing does not match the file name");
    return t;
  };
  return {load(Waveform::Ofdm, Waveform::Ofdm), load(Waveform::Ofdm, Waveform::FbmcOqam),
          load(Waveform::FbmcOqam, Waveform::Ofdm), load(Waveform::FbmcOqam, Waveform::FbmcOqam)};
}

void save_table_set(const TableSet& tables, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  OutputBatch batch;
  for (Waveform a : {Waveform::Ofdm, Waveform::FbmcOqam})
    for (Waveform b : {Waveform::Ofdm, Waveform::FbmcOqam})
      batch.add(dir / table_file_name(a, b), format_table(tables.get(a, b)));
  batch.commit();
}

}  // namespace d2dcoex
