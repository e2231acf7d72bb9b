#include "oas/results_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "oas/errors.hpp"

namespace oas {

namespace {

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

template <typename T>
T field_number(const std::string& text, int line, const char* name) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw IoError("csv line " + std::to_string(line) + ": bad " + name + " '" + text + "'");
  }
  return value;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

}  // namespace

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.scenario << ',' << r.algorithm << ',' << real(r.rho) << ',' << r.m << ','
       << r.subframe << ',' << real(r.mse_mean) << ',' << real(r.mse_stderr) << ',' << r.trials
       << ',' << r.seed << ',' << real(r.wall_time_ms) << '\n';
  }
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  auto out = open_out(path);
  write_csv(rows, out);
  finish(out, path);
}

std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw IoError("csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) {
      throw IoError("csv line " + std::to_string(line_no) + ": expected 10 fields");
    }
    ResultRow r;
    r.scenario = f[0];
    r.algorithm = f[1];
    r.rho = field_number<double>(f[2], line_no, "rho");
    r.m = field_number<std::size_t>(f[3], line_no, "m");
    r.subframe = field_number<std::size_t>(f[4], line_no, "subframe");
    r.mse_mean = field_number<double>(f[5], line_no, "mse_mean");
    r.mse_stderr = field_number<double>(f[6], line_no, "mse_stderr");
    r.trials = field_number<std::size_t>(f[7], line_no, "trials");
    r.seed = field_number<std::uint64_t>(f[8], line_no, "seed");
    r.wall_time_ms = field_number<double>(f[9], line_no, "wall_time_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  return read_csv(in);
}

void write_plotdata(const std::vector<ResultRow>& rows, std::ostream& os) {
  using CurveKey = std::tuple<std::string, std::string, std::size_t>;
  std::map<CurveKey, std::map<double, const ResultRow*>> curves;
  for (const auto& r : rows) {
    if (r.subframe != r.m) continue;  // final subframe only
    curves[{r.scenario, r.algorithm, r.m}][r.rho] = &r;
  }
  bool first = true;
  for (const auto& [key, points] : curves) {
    if (!first) os << "\n\n";
    first = false;
    const auto& [scenario, algorithm, m] = key;
    os << "# scenario=" << scenario << " algorithm=" << algorithm << " m=" << m << '\n';
    os << "# rho mse_mean mse_stderr\n";
    for (const auto& [rho, row] : points) {
      os << real(rho) << ' ' << real(row->mse_mean) << ' ' << real(row->mse_stderr) << '\n';
    }
  }
}

void write_plotdata(const std::vector<ResultRow>& rows, const std::string& path) {
  auto out = open_out(path);
  write_plotdata(rows, out);
  finish(out, path);
}

}  // namespace oas
