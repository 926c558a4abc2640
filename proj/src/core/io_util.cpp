#include "io_util.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "error.hpp"

namespace oer {

void atomic_write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      throw Error(ErrorCode::io,
                  "cannot create directory '" + dir.string() + "': " +
                      ec.message());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::io, "cannot open '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out)
      throw Error(ErrorCode::io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::io,
                "cannot move temp file onto '" + path + "': " + ec.message());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty())
    throw Error(ErrorCode::argument, "quantile of empty vector");
  if (!(q >= 0.0 && q <= 1.0))
    throw Error(ErrorCode::argument, "quantile level outside [0,1]");
  if (sorted.size() == 1) return sorted[0];
  double pos = q * static_cast<double>(sorted.size() - 1);
  double lo = std::floor(pos);
  std::size_t i = static_cast<std::size_t>(lo);
  if (i + 1 >= sorted.size()) return sorted.back();
  double frac = pos - lo;
  return sorted[i] + (sorted[i + 1] - sorted[i]) * frac;
}

}  // namespace oer
