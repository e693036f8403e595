#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pathbs/enhance.hpp"
#include "pathbs/grid.hpp"

namespace pathbs {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_strict(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("csv: unparsable ") + what + " '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument(std::string("csv: trailing junk in ") + what);
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("csv: non-finite ") + what);
  return v;
}

}  // namespace

SampledPath read_path_csv(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("read_path_csv: cannot open " + filename);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_path_csv: empty file");
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "t")
    throw std::invalid_argument("read_path_csv: header must be t,x1,...,xd");
  const std::size_t d = header.size() - 1;
  for (std::size_t i = 0; i < d; ++i)
    if (header[i + 1] != "x" + std::to_string(i + 1))
      throw std::invalid_argument("read_path_csv: header must be t,x1,...,xd");

  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != d + 1) throw std::invalid_argument("read_path_csv: ragged row");
    const double t = parse_strict(cells[0], "time");
    if (!times.empty()) {
      if (t == times.back()) throw std::invalid_argument("read_path_csv: duplicate time");
      if (t < times.back()) throw std::invalid_argument("read_path_csv: rows not sorted by t");
    }
    times.push_back(t);
    for (std::size_t i = 0; i < d; ++i) values.push_back(parse_strict(cells[i + 1], "value"));
  }
  return SampledPath(TimeGrid(std::move(times)), std::move(values), d);
}

void write_path_csv(const std::string& filename, const SampledPath& path) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("write_path_csv: cannot open " + filename);
  out << "t";
  for (std::size_t i = 1; i <= path.dimension(); ++i) out << ",x" << i;
  out << "\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << fmt(path.grid()[k]);
    for (std::size_t i = 0; i < path.dimension(); ++i) out << "," << fmt(path.at(k, i));
    out << "\n";
  }
}

void write_enhanced_csv(const std::string& trace_file, const std::string& bracket_file,
                        const EnhancedPath& ep) {
  write_path_csv(trace_file, ep.trace());
  std::ofstream out(bracket_file);
  if (!out) throw std::runtime_error("write_enhanced_csv: cannot open " + bracket_file);
  const std::size_t d = ep.dimension();
  out << "i,j";
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) out << ",b" << (a + 1) << (b + 1);
  out << "\n";
  const std::size_t n = ep.grid().size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      out << i << "," << j;
      const auto e = ep.bracket().at(i, j);
      for (std::size_t c = 0; c < d * d; ++c) out << "," << fmt(e[c]);
      out << "\n";
    }
}

EnhancedPath read_enhanced_csv(const std::string& trace_file, const std::string& bracket_file) {
  SampledPath trace = read_path_csv(trace_file);
  const std::size_t d = trace.dimension();
  std::ifstream in(bracket_file);
  if (!in) throw std::runtime_error("read_enhanced_csv: cannot open " + bracket_file);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_enhanced_csv: empty bracket file");
  TwoParamField bracket(trace.grid(), FieldShape::Matrix, d);
  const std::size_t n = trace.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2 + d * d)
      throw std::invalid_argument("read_enhanced_csv: ragged bracket row");
    const std::size_t i = static_cast<std::size_t>(parse_strict(cells[0], "index"));
    const std::size_t j = static_cast<std::size_t>(parse_strict(cells[1], "index"));
    if (i > j || j >= n) throw std::invalid_argument("read_enhanced_csv: bad index pair");
    auto e = bracket.at(i, j);
    for (std::size_t c = 0; c < d * d; ++c) e[c] = parse_strict(cells[2 + c], "bracket");
  }
  return EnhancedPath(std::move(trace), std::move(bracket));
}

}  // namespace pathbs
