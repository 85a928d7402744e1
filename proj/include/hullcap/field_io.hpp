#pragma once

#include <string>

#include "hullcap/grid.hpp"

namespace hullcap {

// Binary dump: a text header terminated by the line "end", followed by the
// row-major cell values as little-endian IEEE-754 doubles and, when the grid
// carries a conformal factor, the factor values in the same layout.
//
//   HULLCAP-FIELD 1
//   kind scalar|mask
//   n 2
//   dims 256 256
//   h 0.00390625
//   origin -0.5 -0.5
//   conformal 0
//   end

std::string encode_field(const ScalarField& field);
std::string encode_mask(const RegionMask& mask);
ScalarField decode_field(const std::string& bytes);
RegionMask decode_mask(const std::string& bytes);

void write_field(const std::string& path, const ScalarField& field);
void write_mask(const std::string& path, const RegionMask& mask);
ScalarField read_field(const std::string& path);
RegionMask read_mask(const std::string& path);

/// One row per set cell: integer coordinates then cell-centre coordinates.
void write_mask_csv(const std::string& path, const RegionMask& mask);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace hullcap
