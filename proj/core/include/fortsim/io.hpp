#pragma once

// Text formats shared by the library and the command-line tool. Numbers are
// written with std::to_chars (shortest round-trip form, '.' decimal point,
// independent of the global locale); all files use '\n' line endings.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fortsim {

struct ScanDataset;
struct FitResult;

std::string format_number(double value);

// Whole-string parse; nullopt on trailing junk or an empty string.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);

// Flat "key = value" blocks, in insertion order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses "key = value" lines; '#' starts a comment line. Throws
// std::invalid_argument naming the line number on a malformed line.
KeyValues parse_key_values(std::string_view text);

std::string format_key_values(const KeyValues& kv, std::string_view prefix = "");

// Dataset CSV: metadata lines "# key = value", then the column header
// "x,x_unit,fraction,stderr" and one row per point.
void write_dataset_csv(std::ostream& out, const ScanDataset& data);
std::string dataset_to_csv(const ScanDataset& data);

// Reads back the metadata and points written by write_dataset_csv.
ScanDataset parse_dataset_csv(std::string_view text);

// "key = value" report mirroring FitResult.
KeyValues fit_report(const FitResult& fit);

}  // namespace fortsim
