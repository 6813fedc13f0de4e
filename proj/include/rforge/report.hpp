#ifndef RFORGE_REPORT_HPP
#define RFORGE_REPORT_HPP

#include <ostream>
#include <string>

#include <json.hpp>

#include "rforge/analysis.hpp"
#include "rforge/pipeline.hpp"

namespace rforge {

inline constexpr const char* kToolName = "ricci-forge";
inline constexpr const char* kToolVersion = "1.0.0";

// Every report shares the top-level shape
//   { tool_version, model, config, results, summary }
// so downstream plotting can treat all commands uniformly.
nlohmann::json wrap_report(const std::string& model, const nlohmann::json& config,
                           const nlohmann::json& results, const nlohmann::json& summary);

nlohmann::json grid_to_json(const GridSpec& g);
nlohmann::json to_json(const ScanReport& r);          // results part
nlohmann::json scan_summary_json(const ScanReport& r);
nlohmann::json to_json(const NullCurve& c);
nlohmann::json to_json(const SliceMetric& s);
nlohmann::json to_json(const SingularityVerdict& v);
nlohmann::json to_json(const ResidualReport& r);

// 17 significant digits: enough for exact double round-trips in CSV.
std::string fmt17(double v);

// CSV emitters; the first line documents the columns.
void write_csv(std::ostream& os, const ScanReport& r);
void write_csv(std::ostream& os, const NullCurve& c);
void write_csv(std::ostream& os, const SliceMetric& s);
void write_csv(std::ostream& os, const SingularityVerdict& v);
void write_csv(std::ostream& os, const std::vector<ResidualReport>& rs);

}  // namespace rforge

#endif
