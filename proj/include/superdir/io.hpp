#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "superdir/coupling.hpp"
#include "superdir/swe.hpp"

namespace superdir::io {

inline constexpr std::string_view kFieldHeader = "theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi";
inline constexpr std::string_view kCouplingHeader = "row,col,re,im";
inline constexpr std::string_view kCoefficientHeader = "s,m,n,re,im";

/// Shortest-safe round-trip representation (17 significant digits).
std::string format_double(double value);
/// Human-readable, 4 significant digits.
std::string format_short(double value);
/// Strict parse of a whole token; throws DataError tagged with `line`.
double parse_double(std::string_view token, std::size_t line);
int parse_int(std::string_view token, std::size_t line);

/// Field samples in decimal degrees. Angles are converted to radians on read
/// and back to degrees on write.
FieldSampleSet read_field_csv(std::istream& in);
void write_field_csv(std::ostream& out, const FieldSampleSet& samples);
FieldSampleSet read_field_csv_file(const std::string& path);
void write_field_csv_file(const std::string& path, const FieldSampleSet& samples);

/// Coupling matrix as `row,col,re,im`, 1-based indices, one row per entry.
/// Every entry of the square matrix must appear exactly once.
CouplingMatrix read_coupling_csv(std::istream& in);
void write_coupling_csv(std::ostream& out, const CouplingMatrix& coupling);
CouplingMatrix read_coupling_csv_file(const std::string& path);
void write_coupling_csv_file(const std::string& path, const CouplingMatrix& coupling);

/// Wave coefficients as `s,m,n,re,im` in SweIndex order; the truncation is
/// the largest n present and every mode up to it must appear.
WaveCoefficientSet read_coefficient_csv(std::istream& in);
void write_coefficient_csv(std::ostream& out, const WaveCoefficientSet& coefficients);

/// Flat `key = value` text with `#` comments. Duplicate keys and lines
/// without '=' are DataErrors.
std::map<std::string, std::pair<std::string, std::size_t>> read_key_values(std::istream& in);

}  // namespace superdir::io
