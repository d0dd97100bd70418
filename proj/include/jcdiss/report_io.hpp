// report_io.hpp: CSV and JSON serialization for the command-line driver.
//
// CSV numbers use "%.16e" (17 significant digits, lowercase exponent) and LF line endings.
// JSON encodes non-finite numbers as null.

#pragma once

#include "jcdiss/analysis.hpp"
#include "jcdiss/bath.hpp"
#include "jcdiss/evolve.hpp"
#include "jcdiss/generators.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace jcdiss {

std::string format_number(double x);

// header t,trace,min_eig,herm_defect,sz,n_phot,p_<label>...
std::string trajectory_csv(const Trajectory<double>& traj);

// first cell empty, first row offsets, then one row per temperature
std::string surface_csv(const Surface& s);

// one matrix row per line, each entry written as re,im
std::string matrix_csv(const CMatrix<double>& m);

struct SweepRow {
    double axis_value{0};
    std::string metric;
    double value{0};
};

// long format: axis_value,metric,value
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Creates parent directories as needed; throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

nlohmann::ordered_json json_number(double x);
nlohmann::ordered_json to_json(const SystemParams<double>& p);
nlohmann::ordered_json to_json(const BathModel& b);
nlohmann::ordered_json to_json(const ComparisonReport& r);
nlohmann::ordered_json to_json(const RabiFit& f);
nlohmann::ordered_json to_json(const RateSpreadReport& r);
nlohmann::ordered_json to_json(const TimescaleCheck& c);
nlohmann::ordered_json to_json(const KossakowskiReport<double>& r);

// Two-space indentation and a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace jcdiss
