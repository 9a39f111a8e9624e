#ifndef ANICV_PCR_IO_HPP
#define ANICV_PCR_IO_HPP

#include <iosfwd>
#include <string>

#include "anicv/geometry.hpp"

namespace anicv {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// PCR text format:
///   PCR1
///   xlines: <coords>
///   ylines: <coords>
///   values:
///   <one row of cell values per grid row, top row first>
/// Numbers are written with shortest round-trip precision, so
/// write -> read reproduces every double bit-exactly.
PcrImage read_pcr(std::istream& in);
PcrImage read_pcr_file(const std::string& path);
void write_pcr(std::ostream& out, const PcrImage& img);
void write_pcr_file(const std::string& path, const PcrImage& img);

/// Shortest decimal representation that parses back to exactly x.
std::string format_double(double x);

} // namespace anicv

#endif
