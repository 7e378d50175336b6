#include "superdir/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <vector>

#include "superdir/errors.hpp"

namespace superdir::io {

namespace {

constexpr double kDegree = kPi / 180.0;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

/// Iterates the data rows of a CSV with a fixed header and column count.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view header) : in_(in) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (!trim(line).empty()) break;
    }
    if (trim(line) != header) {
      throw DataError("expected header '" + std::string(header) + "'", line_number_ ? line_number_ : 1);
    }
    columns_ = split(header).size();
  }

  /// Next non-blank row, or false at end of input.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, buffer_)) {
      ++line_number_;
      if (trim(buffer_).empty()) continue;
      fields = split(buffer_);
      if (fields.size() != columns_) {
        throw DataError("expected " + std::to_string(columns_) + " columns, found " +
                            std::to_string(fields.size()),
                        line_number_);
      }
      return true;
    }
    if (in_.bad()) throw DataError("read error", line_number_);
    return false;
  }

  std::size_t line() const noexcept { return line_number_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_number_ = 0;
  std::size_t columns_ = 0;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  // from_chars rejects a leading '+', which some exporters write
  const char* begin = (!token.empty() && token.front() == '+') ? token.data() + 1 : token.data();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw DataError("malformed number '" + std::string(token) + "'", line);
  }
  return value;
}

int parse_int(std::string_view token, std::size_t line) {
  int value = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw DataError("malformed integer '" + std::string(token) + "'", line);
  }
  return value;
}

FieldSampleSet read_field_csv(std::istream& in) {
  CsvReader reader(in, kFieldHeader);
  std::vector<Direction> directions;
  std::vector<cd> values;
  std::set<std::pair<double, double>> seen;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    const double theta_deg = parse_double(f[0], line);
    const double phi_deg = parse_double(f[1], line);
    if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
      throw DataError("theta_deg must lie in [0, 180]", line);
    }
    if (!std::isfinite(phi_deg)) throw DataError("phi_deg must be finite", line);
    if (!seen.emplace(theta_deg, phi_deg).second) throw DataError("repeated direction", line);
    directions.push_back({theta_deg * kDegree, phi_deg * kDegree});
    values.emplace_back(parse_double(f[2], line), parse_double(f[3], line));
    values.emplace_back(parse_double(f[4], line), parse_double(f[5], line));
  }
  if (directions.empty()) throw DataError("field file has no samples", reader.line());
  FieldSampleSet out;
  out.directions = std::move(directions);
  out.values = Eigen::Map<const Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return out;
}

void write_field_csv(std::ostream& out, const FieldSampleSet& samples) {
  samples.validate();
  out << kFieldHeader << '\n';
  for (int p = 0; p < samples.size(); ++p) {
    const auto& d = samples.directions[static_cast<std::size_t>(p)];
    const cd et = samples.theta_component(p);
    const cd ep = samples.phi_component(p);
    out << format_double(d.theta / kDegree) << ',' << format_double(d.phi / kDegree) << ','
        << format_double(et.real()) << ',' << format_double(et.imag()) << ','
        << format_double(ep.real()) << ',' << format_double(ep.imag()) << '\n';
  }
}

FieldSampleSet read_field_csv_file(const std::string& path) {
  auto in = open_in(path);
  try {
    return read_field_csv(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_field_csv_file(const std::string& path, const FieldSampleSet& samples) {
  auto out = open_out(path);
  write_field_csv(out, samples);
}

CouplingMatrix read_coupling_csv(std::istream& in) {
  CsvReader reader(in, kCouplingHeader);
  struct Entry {
    int row, col;
    cd value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  int size = 0;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    const int row = parse_int(f[0], line);
    const int col = parse_int(f[1], line);
    if (row < 1 || col < 1) throw DataError("row and col are 1-based", line);
    entries.push_back({row, col, {parse_double(f[2], line), parse_double(f[3], line)}, line});
    size = std::max({size, row, col});
  }
  if (entries.empty()) throw DataError("coupling file has no entries", reader.line());
  if (entries.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw DataError("coupling file lists " + std::to_string(entries.size()) + " entries for a " +
                    std::to_string(size) + "x" + std::to_string(size) + " matrix");
  }
  Eigen::MatrixXcd c(size, size);
  Eigen::MatrixXi filled = Eigen::MatrixXi::Zero(size, size);
  for (const auto& e : entries) {
    if (filled(e.row - 1, e.col - 1)++) throw DataError("repeated coupling entry", e.line);
    c(e.row - 1, e.col - 1) = e.value;
  }
  return CouplingMatrix::prescribed(std::move(c));
}

void write_coupling_csv(std::ostream& out, const CouplingMatrix& coupling) {
  out << kCouplingHeader << '\n';
  const auto& c = coupling.values();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      out << i + 1 << ',' << j + 1 << ',' << format_double(c(i, j).real()) << ','
          << format_double(c(i, j).imag()) << '\n';
    }
  }
}

CouplingMatrix read_coupling_csv_file(const std::string& path) {
  auto in = open_in(path);
  try {
    return read_coupling_csv(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_coupling_csv_file(const std::string& path, const CouplingMatrix& coupling) {
  auto out = open_out(path);
  write_coupling_csv(out, coupling);
}

WaveCoefficientSet read_coefficient_csv(std::istream& in) {
  CsvReader reader(in, kCoefficientHeader);
  std::vector<std::pair<SweIndex, cd>> entries;
  std::vector<std::string_view> f;
  int truncation = 0;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    const SweIndex idx{parse_int(f[0], line), parse_int(f[1], line), parse_int(f[2], line)};
    try {
      idx.validate();
    } catch (const IndexError& e) {
      throw DataError(e.what(), line);
    }
    entries.emplace_back(idx, cd(parse_double(f[3], line), parse_double(f[4], line)));
    truncation = std::max(truncation, idx.n);
  }
  if (entries.empty()) throw DataError("coefficient file has no entries", reader.line());
  if (entries.size() != static_cast<std::size_t>(mode_count(truncation))) {
    throw DataError("coefficient file lists " + std::to_string(entries.size()) + " modes, N = " +
                    std::to_string(truncation) + " needs " + std::to_string(mode_count(truncation)));
  }
  WaveCoefficientSet out;
  out.truncation = truncation;
  out.coefficients.resize(mode_count(truncation));
  std::vector<bool> filled(entries.size(), false);
  for (const auto& [idx, value] : entries) {
    const auto j = static_cast<std::size_t>(idx.flat());
    if (filled[j]) throw DataError("repeated mode (" + std::to_string(idx.s) + "," +
                                   std::to_string(idx.m) + "," + std::to_string(idx.n) + ")");
    filled[j] = true;
    out.coefficients[idx.flat()] = value;
  }
  return out;
}

void write_coefficient_csv(std::ostream& out, const WaveCoefficientSet& coefficients) {
  out << kCoefficientHeader << '\n';
  for (Eigen::Index j = 0; j < coefficients.coefficients.size(); ++j) {
    const auto idx = SweIndex::from_flat(static_cast<int>(j));
    const cd v = coefficients.coefficients[j];
    out << idx.s << ',' << idx.m << ',' << idx.n << ',' << format_double(v.real()) << ','
        << format_double(v.imag()) << '\n';
  }
}

std::map<std::string, std::pair<std::string, std::size_t>> read_key_values(std::istream& in) {
  std::map<std::string, std::pair<std::string, std::size_t>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw DataError("expected 'key = value'", number);
    const std::string key(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (key.empty()) throw DataError("empty key", number);
    if (!out.emplace(key, std::make_pair(value, number)).second) {
      throw DataError("duplicate key '" + key + "'", number);
    }
  }
  return out;
}

}  // namespace superdir::io
