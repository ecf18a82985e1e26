#pragma once

#include "dctnet/types.hpp"

#include <string>
#include <vector>

namespace dctnet {

// Filter-bank container (.dctb), one bank per cascade layer. Layout:
//   magic "DCTB" | version u16 | layer_count u16
//   per layer: k u16 | filter_count u16 | scan policy u8
//   per layer, per filter in selection order: k*k coefficients,
//   little-endian 64-bit floats, row-major.
// The same container holds analytic and learned banks; the policy byte
// records which.
void save_bank_file(const std::string& path,
                    const std::vector<FilterBank>& layers);

std::vector<FilterBank> load_bank_file(const std::string& path);

// Human-readable header summary (layer sizes, policies) for inspection.
std::string describe_bank_file(const std::string& path);

}  // namespace dctnet
