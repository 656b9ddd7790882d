#include "core/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace carlgq {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  fail(ErrorCode::parse, "line " + std::to_string(line) + ": " + what);
}

// Next line that is neither blank nor a '#' comment; false at end of input.
bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CovarianceMatrix read_cm(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no))
    fail(ErrorCode::parse, "empty input: expected a mode count");

  long n_modes = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> n_modes) || (ls >> extra))
      parse_fail(line_no, "expected a single integer mode count, got '" +
                              line + "'");
  }
  if (n_modes < 1 || n_modes > 64)
    parse_fail(line_no, "mode count must be in 1..64, got " +
                            std::to_string(n_modes));

  const int dim = 2 * static_cast<int>(n_modes);
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (!next_content_line(in, line, line_no))
      fail(ErrorCode::parse, "unexpected end of input: expected " +
                                 std::to_string(dim) + " matrix rows, got " +
                                 std::to_string(r));
    std::istringstream ls(line);
    for (int c = 0; c < dim; ++c) {
      if (!(ls >> m(r, c)))
        parse_fail(line_no, "expected " + std::to_string(dim) +
                                " values in row " + std::to_string(r + 1) +
                                ", got " + std::to_string(c));
    }
    std::string extra;
    if (ls >> extra)
      parse_fail(line_no, "trailing content '" + extra + "' after " +
                              std::to_string(dim) + " values");
  }
  try {
    return CovarianceMatrix::from_matrix(m);
  } catch (const Error& e) {
    fail(ErrorCode::parse, std::string("invalid covariance matrix: ") +
                               e.what());
  }
}

CovarianceMatrix read_cm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  return read_cm(in);
}

void write_cm(std::ostream& out, const CovarianceMatrix& cm) {
  out << cm.modes() << "\n";
  for (int r = 0; r < cm.dim(); ++r) {
    for (int c = 0; c < cm.dim(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(cm.matrix()(r, c));
    }
    out << "\n";
  }
}

void write_cm_file(const std::string& path, const CovarianceMatrix& cm) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  write_cm(out, cm);
  out.flush();
  if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

}  // namespace carlgq
