#include "coopqed/format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "coopqed/error.hpp"

namespace coopqed {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

double parse_field(const std::string& field, const std::filesystem::path& path) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw Error(ErrorCode::Io, "bad number '" + field + "' in " + path.string());
  }
  return value;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  auto out = open_for_write(path);
  out << "t,re_gL0,im_gL0,re_gC0,im_gC0,re_gR0,im_gR0,re_gL1,im_gL1,re_gC1,im_gC1,re_gR1,im_gR1\n";
  for (std::size_t i = 0; i < traj.times.size(); i += stride) {
    out << format_double(traj.times[i]);
    for (const cplx& g : traj.states[i].gamma) {
      out << ',' << format_double(g.real()) << ',' << format_double(g.imag());
    }
    out << '\n';
  }
  finish(out, path);
}

void write_measures_csv(const std::filesystem::path& path, const MeasureSeries& series, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  auto out = open_for_write(path);
  out << "t,C2,C3_literal,C3_residual,A\n";
  for (std::size_t i = 0; i < series.size(); i += stride) {
    out << format_double(series.times[i]) << ',' << format_double(series.c2[i]) << ','
        << format_double(series.c3_literal[i]) << ',' << format_double(series.c3_residual[i]) << ','
        << format_double(series.async[i]) << '\n';
  }
  finish(out, path);
}

MeasureSeries read_measures_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,C2,C3_literal,C3_residual,A") {
    throw Error(ErrorCode::Io, "unexpected measures header in " + path.string());
  }
  MeasureSeries series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 5> row{};
    std::size_t col = 0;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (col >= row.size()) throw Error(ErrorCode::Io, "too many columns in " + path.string());
      row[col++] = parse_field(field, path);
    }
    if (col != row.size()) throw Error(ErrorCode::Io, "too few columns in " + path.string());
    series.times.push_back(row[0]);
    series.c2.push_back(row[1]);
    series.c3_literal.push_back(row[2]);
    series.c3_residual.push_back(row[3]);
    series.async.push_back(row[4]);
  }
  return series;
}

}  // namespace coopqed
