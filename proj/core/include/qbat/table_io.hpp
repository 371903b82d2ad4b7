#pragma once

#include <string>

#include "qbat/sweep.hpp"

namespace qbat {

enum class TableFormat { Csv, Json };

/// Scientific-notation rendering with 17 significant digits, exponent
/// without sign-padding ("5.0000000000000000e-1"). Round-trips every finite
/// double exactly; non-finite values render as "nan"/"inf"/"-inf".
std::string format_double17(double v);

/// Inverse of format_double17 / generic float parsing.
double parse_double(const std::string& text);

/// CSV: one header row, comma separation, LF line endings, no metadata.
std::string to_csv(const SweepResult& result);
SweepResult from_csv(const std::string& text);

/// JSON object with "columns", "rows" and "meta" keys; numbers carry the
/// same 17-significant-digit fidelity, NaN cells serialize as null.
std::string to_json(const SweepResult& result);
SweepResult from_json(const std::string& text);

/// Writes the serialized table to `path`. Throws IoError on failure.
void write_table(const SweepResult& result, TableFormat format, const std::string& path);

/// True when the tables match bit-exactly (NaN compares equal to NaN).
bool tables_equal(const Table& a, const Table& b);

}  // namespace qbat
