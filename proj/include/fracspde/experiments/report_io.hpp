#pragma once

#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/experiments/study.hpp"

namespace fracspde::experiments {

/// 17 significant digits: round-trip exact for binary64.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// UTC timestamp of the form 20261016T120000Z.
inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

/// "<axis>_<noisekind>_H<h>_<timestamp>"
inline std::string report_stem(const ConvergenceStudy& study, const std::string& timestamp) {
    char h[32];
    std::snprintf(h, sizeof h, "%g", study.problem.hurst.value());
    return axis_name(study.axis) + "_" + noise_kind_name(study.problem.noise.kind()) + "_H" + h + "_" + timestamp;
}

inline std::string error_report_csv(const ErrorReport& report) {
    std::ostringstream out;
    out << "resolution,rms_error,std_error\n";
    for (std::size_t i = 0; i < report.resolutions.size(); ++i) {
        out << report.resolutions[i] << ',' << format_double(report.rms_errors[i]) << ','
            << format_double(report.std_errors[i]) << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json error_report_json(const ErrorReport& report, const ConvergenceStudy& study) {
    nlohmann::ordered_json j;
    j["axis"] = axis_name(study.axis);
    j["noise_kind"] = noise_kind_name(study.problem.noise.kind());
    j["hurst"] = study.problem.hurst.value();
    j["beta"] = study.problem.noise.beta();
    j["nonlinearity"] = nemytskii_name(study.problem.nonlinearity.kind);
    j["horizon"] = study.problem.horizon;
    j["operator"] = study.problem.op.description();
    j["fbm_method"] = std::string(to_string(study.problem.fbm_method));
    j["ladder"] = study.ladder;
    j["reference_resolution"] = study.reference_resolution;
    j[study.axis == StudyAxis::temporal ? "fixed_modes" : "fixed_steps"] = study.fixed_other;
    j["samples"] = study.samples;
    j["base_seed"] = study.base_seed;
    j["seed_policy"] = "sample s uses derive_seed(base_seed, s); mode k of a sample uses derive_seed(sample_seed, k)";
    j["noise_coupling"] = study.axis == StudyAxis::temporal
                              ? "coarse increments are exact block sums of the reference increments"
                              : "coarse runs use the first N noise modes of the reference";
    j["resolutions"] = report.resolutions;
    j["rms_errors"] = report.rms_errors;
    j["std_errors"] = report.std_errors;
    j["fitted_slope"] = report.fitted_slope;
    j["slope_confidence_halfwidth"] = report.slope_confidence_halfwidth;
    j["theoretical_slope"] = report.theoretical_slope;
    j["monotone"] = report.monotone;
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

/// Writes <stem>.csv and <stem>.json into out_dir; returns both paths.
inline std::vector<std::filesystem::path> write_error_report(const ErrorReport& report, const ConvergenceStudy& study,
                                                             const std::filesystem::path& out_dir,
                                                             const std::string& timestamp) {
    std::filesystem::create_directories(out_dir);
    const std::string stem = report_stem(study, timestamp);
    const auto csv = out_dir / (stem + ".csv");
    const auto json = out_dir / (stem + ".json");
    write_text_file(csv, error_report_csv(report));
    write_text_file(json, error_report_json(report, study).dump(2) + "\n");
    return {csv, json};
}

}  // namespace fracspde::experiments
