#ifndef RDG_REPORT_HPP
#define RDG_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rdg {

struct ReportRow {
    std::string estimator;
    std::string label;        ///< law label, or empty when the report has a single law
    std::int64_t n = 0;
    std::string kind;         ///< "multi", "simple" or empty
    double estimate = 0.0;
    double se = 0.0;
    double target = 0.0;
    std::string target_source;
    std::int64_t reps = 0;
    double wall_seconds = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    /// Extra deterministic material (histograms, fit statistics).
    nlohmann::json details = nlohmann::json::object();

    /// First row matching all given non-empty keys; throws std::out_of_range.
    const ReportRow& row(std::string_view estimator, std::int64_t n = -1,
                         std::string_view kind = {}, std::string_view label = {}) const;
};

/// JSON document. Timing is left out unless requested so that reports with
/// equal configs are byte-identical.
std::string to_json(const ExperimentReport& report, bool timing = false);
/// Flat CSV; config echo and seed as leading `#` lines.
std::string to_csv(const ExperimentReport& report, bool timing = false);
/// Writes `<prefix>.json` and `<prefix>.csv`.
void write_report(const ExperimentReport& report, const std::filesystem::path& prefix,
                  bool timing = false);

} // namespace rdg

#endif
