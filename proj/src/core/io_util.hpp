#pragma once

#include <string>
#include <vector>

namespace oer {

/// Write text to `path` via a temp file in the same directory plus rename,
/// so readers never observe a half-written file.
void atomic_write_text(const std::string& path, const std::string& text);

std::string read_text_file(const std::string& path);

/// Type-7 (linear interpolation) quantile of an ascending-sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double q);

}  // namespace oer
