#ifndef FINSLER_IO_HPP
#define FINSLER_IO_HPP

#include <string>

#include "finsler/harness.hpp"
#include "finsler/polar_norm.hpp"

namespace finsler {

// Shortest round-trip decimal representation (std::to_chars), so identical
// runs emit identical bytes.
std::string format_double(double x);

// CSV dump of a profile on a uniform grid: header t,f,df,d2f,d3f,margin and
// one newline-terminated row per grid point.
std::string curve_csv(const NormCurve& curve, int rows = 201);

// Versioned JSON report for a verification batch; layout documented in
// schemas/report.schema.v1.json.
extern const int kReportSchemaVersion;
std::string report_json(const BatchReport& report);

void write_file(const std::string& path, const std::string& bytes);

}  // namespace finsler

#endif
