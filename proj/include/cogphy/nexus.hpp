#pragma once

#include <string>
#include <string_view>

#include "cogphy/binary_matrix.hpp"

namespace cogphy {

// Standard-datatype DATA block with SYMBOLS="01" MISSING=? GAP=-. Character
// labels go into CHARSTATELABELS and provenance into a bracketed comment, so
// read_nexus(write_nexus(m)) == m while other tools still read the file.
std::string write_nexus(const BinaryMatrix& m);

BinaryMatrix read_nexus(std::string_view text);

BinaryMatrix read_nexus_file(const std::string& path);

}  // namespace cogphy
