#include "hullcap/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "hullcap/errors.hpp"

namespace hullcap {

namespace {

constexpr const char* kMagic = "HULLCAP-FIELD 1";

void append_doubles(std::string& out, const double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    auto bits = std::bit_cast<std::uint64_t>(data[i]);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.append(buf, 8);
  }
}

std::vector<double> take_doubles(const std::string& bytes, std::size_t& pos, std::size_t count) {
  if (bytes.size() < pos + 8 * count) throw InvalidArgument("field dump is truncated");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + pos + 8 * i, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    out[i] = std::bit_cast<double>(bits);
  }
  pos += 8 * count;
  return out;
}

std::string header(const Grid& g, const char* kind) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << kMagic << "\nkind " << kind << "\nn " << g.dim() << "\ndims";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << g.extent(a);
  os << "\nh " << g.spacing() << "\norigin";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << g.origin()[a];
  os << "\nconformal " << (g.conformal() ? 1 : 0) << "\nend\n";
  return os.str();
}

std::string encode(const Grid& g, const char* kind, const std::vector<double>& values) {
  std::string out = header(g, kind);
  append_doubles(out, values.data(), values.size());
  if (g.conformal()) append_doubles(out, g.phi_values().data(), g.size());
  return out;
}

struct Decoded {
  std::string kind;
  GridPtr grid;
  std::vector<double> values;
};

Decoded decode(const std::string& bytes) {
  std::size_t pos = 0;
  auto next_line = [&]() {
    const auto end = bytes.find('\n', pos);
    if (end == std::string::npos) throw InvalidArgument("field dump header is truncated");
    std::string line = bytes.substr(pos, end - pos);
    pos = end + 1;
    return line;
  };
  if (next_line() != kMagic) throw InvalidArgument("not a field dump (bad magic)");
  Decoded d;
  int n = 0;
  std::vector<int> dims;
  std::vector<double> origin;
  double h = 0.0;
  int conformal = 0;
  for (std::string line = next_line(); line != "end"; line = next_line()) {
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "kind") {
      is >> d.kind;
    } else if (key == "n") {
      is >> n;
    } else if (key == "dims") {
      for (int v; is >> v;) dims.push_back(v);
    } else if (key == "h") {
      is >> h;
    } else if (key == "origin") {
      for (double v; is >> v;) origin.push_back(v);
    } else if (key == "conformal") {
      is >> conformal;
    } else {
      throw InvalidArgument("field dump: unknown header key '" + key + "'");
    }
  }
  if (static_cast<int>(dims.size()) != n || static_cast<int>(origin.size()) != n) {
    throw InvalidArgument("field dump: header dimension mismatch");
  }
  auto grid = make_grid(dims, h, origin);
  d.values = take_doubles(bytes, pos, grid->size());
  if (conformal) grid = grid->with_conformal_factor(take_doubles(bytes, pos, grid->size()));
  if (pos != bytes.size()) throw InvalidArgument("field dump has trailing bytes");
  d.grid = grid;
  return d;
}

}  // namespace

std::string encode_field(const ScalarField& field) { return encode(*field.grid, "scalar", field.values); }

std::string encode_mask(const RegionMask& mask) {
  return encode(*mask.grid, "mask", mask.indicator().values);
}

ScalarField decode_field(const std::string& bytes) {
  auto d = decode(bytes);
  if (d.kind != "scalar") throw InvalidArgument("field dump holds a '" + d.kind + "', expected scalar");
  return ScalarField(d.grid, std::move(d.values));
}

RegionMask decode_mask(const std::string& bytes) {
  auto d = decode(bytes);
  if (d.kind != "mask") throw InvalidArgument("field dump holds a '" + d.kind + "', expected mask");
  std::vector<std::uint8_t> cells(d.values.size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = d.values[i] != 0.0 ? 1 : 0;
  return RegionMask(d.grid, std::move(cells));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

void write_field(const std::string& path, const ScalarField& field) { write_file(path, encode_field(field)); }
void write_mask(const std::string& path, const RegionMask& mask) { write_file(path, encode_mask(mask)); }
ScalarField read_field(const std::string& path) { return decode_field(read_file(path)); }
RegionMask read_mask(const std::string& path) { return decode_mask(read_file(path)); }

void write_mask_csv(const std::string& path, const RegionMask& mask) {
  const Grid& g = *mask.grid;
  std::ostringstream os;
  os << std::setprecision(17);
  static const char* axes[] = {"i", "j", "k"};
  static const char* pos[] = {"x", "y", "z"};
  for (int a = 0; a < g.dim(); ++a) os << axes[a] << ',';
  for (int a = 0; a < g.dim(); ++a) os << pos[a] << (a + 1 < g.dim() ? "," : "\n");
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!mask.cells[idx]) continue;
    const Index3 c = g.coords(idx);
    const Point3 p = g.center(idx);
    for (int a = 0; a < g.dim(); ++a) os << c[a] << ',';
    for (int a = 0; a < g.dim(); ++a) os << p[a] << (a + 1 < g.dim() ? "," : "\n");
  }
  write_file(path, os.str());
}

}  // namespace hullcap
