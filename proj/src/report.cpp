#include "rdg/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdg {

const ReportRow& ExperimentReport::row(std::string_view estimator, std::int64_t n,
                                       std::string_view kind, std::string_view label) const {
    for (const auto& r : rows) {
        if (r.estimator != estimator)
            continue;
        if (n >= 0 && r.n != n)
            continue;
        if (!kind.empty() && r.kind != kind)
            continue;
        if (!label.empty() && r.label != label)
            continue;
        return r;
    }
    throw std::out_of_range("report '" + experiment + "' has no row '" + std::string(estimator) + "'");
}

namespace {

nlohmann::json number(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string csv_number(double x) {
    if (!std::isfinite(x))
        return "";
    std::ostringstream o;
    o.precision(17);
    o << x;
    return o.str();
}

} // namespace

std::string to_json(const ExperimentReport& report, bool timing) {
    nlohmann::json doc;
    doc["tool"] = "rdg";
    doc["version"] = RDG_VERSION;
    doc["experiment"] = report.experiment;
    doc["seed"] = report.seed;
    doc["config"] = report.config;
    auto& rows = doc["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json j{{"estimator", r.estimator}, {"label", r.label},   {"n", r.n},
                         {"kind", r.kind},           {"estimate", number(r.estimate)},
                         {"se", number(r.se)},       {"target", number(r.target)},
                         {"target_source", r.target_source}, {"reps", r.reps}};
        if (timing)
            j["wall_seconds"] = r.wall_seconds;
        rows.push_back(std::move(j));
    }
    doc["details"] = report.details;
    return doc.dump(2) + "\n";
}

std::string to_csv(const ExperimentReport& report, bool timing) {
    std::ostringstream o;
    o << "# tool=rdg version=" << RDG_VERSION << " experiment=" << report.experiment
      << " seed=" << report.seed << '\n';
    o << "# config=" << report.config.dump() << '\n';
    o << "estimator,label,n,kind,estimate,se,target,target_source,reps";
    if (timing)
        o << ",wall_seconds";
    o << '\n';
    for (const auto& r : report.rows) {
        o << csv_field(r.estimator) << ',' << csv_field(r.label) << ',' << r.n << ','
          << csv_field(r.kind) << ',' << csv_number(r.estimate) << ',' << csv_number(r.se) << ','
          << csv_number(r.target) << ',' << csv_field(r.target_source) << ',' << r.reps;
        if (timing)
            o << ',' << csv_number(r.wall_seconds);
        o << '\n';
    }
    return o.str();
}

void write_report(const ExperimentReport& report, const std::filesystem::path& prefix, bool timing) {
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + p.string() + "' for writing");
        f << text;
        if (!f)
            throw std::runtime_error("write to '" + p.string() + "' failed");
    };
    write(std::filesystem::path(prefix.string() + ".json"), to_json(report, timing));
    write(std::filesystem::path(prefix.string() + ".csv"), to_csv(report, timing));
}

} // namespace rdg
