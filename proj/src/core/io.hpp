#pragma once

#include "core/types.hpp"

#include <iosfwd>
#include <string>

namespace carlgq {

/// CM text format: first non-comment line is the mode count N, followed by
/// 2N lines of 2N whitespace-separated values, row major, full precision.
/// Lines starting with '#' are ignored.
CovarianceMatrix read_cm(std::istream& in);
CovarianceMatrix read_cm_file(const std::string& path);

void write_cm(std::ostream& out, const CovarianceMatrix& cm);
void write_cm_file(const std::string& path, const CovarianceMatrix& cm);

/// Shortest decimal that round-trips the double ("%.17g").
std::string format_double(double v);

}  // namespace carlgq
