#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "georev/analytics.hpp"
#include "georev/mechanisms.hpp"
#include "georev/verification.hpp"

namespace georev::report {

/// Schema tag stamped into every JSON document this library emits.
inline constexpr const char* kSchemaVersion = "georev-report/1";

/// Fixed 10-significant-digit formatting ("%.10g"); infinities print as
/// "inf"/"-inf". All CSV and JSON numbers go through this so identical runs
/// produce identical bytes.
std::string format_number(double v);

/// JSON value for a double: the number rounded to 10 significant digits, or
/// the string "inf"/"-inf" (JSON has no infinity literal).
nlohmann::ordered_json json_number(double v);

nlohmann::ordered_json to_json(const FunctionalResult& r);
nlohmann::ordered_json to_json(const RevenueEstimate& est);
nlohmann::ordered_json to_json(const ChainLink& link);
nlohmann::ordered_json to_json(const BoundReport& rep);

/// Document wrapper: {"schema_version": ..., "checks": [...]}.
nlohmann::ordered_json report_document(const std::vector<BoundReport>& reports);

/// One "bound,verdict,..." CSV line per report, with header.
std::string reports_to_csv(const std::vector<BoundReport>& reports);

}  // namespace georev::report
