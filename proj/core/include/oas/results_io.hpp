#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oas/experiment.hpp"

namespace oas {

inline constexpr const char* kCsvHeader =
    "scenario,algorithm,rho,m,subframe,mse_mean,mse_stderr,trials,seed,wall_time_ms";

// Reals are printed with 10 significant digits; lines end in LF.
void write_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

std::vector<ResultRow> read_csv(std::istream& is);
std::vector<ResultRow> read_csv(const std::string& path);

/// One whitespace-separated block per (scenario, algorithm, m) curve holding
/// the final-subframe rows ordered by rho, blocks separated by two blank
/// lines (gnuplot `index` friendly).
void write_plotdata(const std::vector<ResultRow>& rows, std::ostream& os);
void write_plotdata(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace oas
