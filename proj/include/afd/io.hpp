#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "afd/exponents.hpp"
#include "afd/field.hpp"
#include "afd/solver.hpp"

namespace afd {

/// Header lines start with '#': dimension, points, half_width, spacing, time.
/// Then a column header x1,...,xN,u and one row per node in storage order.
/// Numbers use %.17g so a round trip is exact.
void write_field_csv(std::ostream& os, const Field& f);
void write_field_csv(const std::filesystem::path& p, const Field& f);
Field read_field_csv(const std::filesystem::path& p);

/// One row per diagnostics record.
void write_diagnostics_csv(std::ostream& os, const RunDiagnostics& d);
void write_diagnostics_csv(const std::filesystem::path& p, const RunDiagnostics& d);
/// Inverse of write_diagnostics_csv; the exponents are not stored, so m is passed in.
RunDiagnostics read_diagnostics_csv(const std::filesystem::path& p, std::vector<double> m);

/// Git blob object id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_hash(const std::string& content);
std::string file_blob_hash(const std::filesystem::path& p);

nlohmann::json exponent_table(const ExponentSet& e);

void write_json(const std::filesystem::path& p, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& p);

}  // namespace afd
