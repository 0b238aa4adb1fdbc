#include "nlslab/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "nlslab/grid.hpp"

namespace nlslab {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

namespace {

constexpr char kMagic[4] = {'N', 'L', 'S', 'F'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is, const std::filesystem::path& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("truncated field file " + path.string());
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridPtr make_grid(double half_length, std::uint64_t n, const std::filesystem::path& path) {
  try {
    return Grid::make(half_length, static_cast<std::size_t>(n));
  } catch (const std::exception& e) {
    throw FormatError("bad grid header in " + path.string() + ": " + e.what());
  }
}

Field read_binary(std::istream& is, const std::filesystem::path& path) {
  is.ignore(4);
  const auto version = get<std::uint32_t>(is, path);
  if (version != kFieldFileVersion)
    throw FormatError("unsupported field file version " + std::to_string(version) + " in " + path.string());
  const auto n = get<std::uint64_t>(is, path);
  const auto L = get<double>(is, path);
  const auto g = make_grid(L, n, path);
  Field u(g);
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double re = get<double>(is, path);
    const double im = get<double>(is, path);
    u[j] = cplx(re, im);
  }
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in " + path.string());
  return u;
}

Field read_csv(std::istream& is, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(is, line) || line != "# nlslab-field v1")
    throw FormatError("not an nlslab field file (or unknown version): " + path.string());
  double L = 0;
  unsigned long long n = 0;
  if (!std::getline(is, line) || std::sscanf(line.c_str(), "# half_length=%lf n=%llu", &L, &n) != 2)
    throw FormatError("missing grid header in " + path.string());
  if (!std::getline(is, line) || line != "x,re,im") throw FormatError("missing column header in " + path.string());
  const auto g = make_grid(L, n, path);
  Field u(g);
  for (std::size_t j = 0; j < g->size(); ++j) {
    if (!std::getline(is, line)) throw FormatError("truncated field file " + path.string());
    double x, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
      throw FormatError("bad row " + std::to_string(j) + " in " + path.string());
    if (std::abs(x - g->x(j)) > 1e-9 * (1.0 + L)) throw FormatError("x column disagrees with the grid header in " + path.string());
    u[j] = cplx(re, im);
  }
  return u;
}

}  // namespace

void write_field_binary(const Field& u, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot write " + path.string());
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kFieldFileVersion);
  put<std::uint64_t>(os, u.size());
  put<double>(os, u.grid().half_length());
  for (const auto& z : u.values()) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) throw FormatError("write failed for " + path.string());
}

void write_field_csv(const Field& u, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot write " + path.string());
  os << "# nlslab-field v1\n# half_length=" << fmt(u.grid().half_length()) << " n=" << u.size() << "\nx,re,im\n";
  for (std::size_t j = 0; j < u.size(); ++j)
    os << fmt(u.grid().x(j)) << ',' << fmt(u[j].real()) << ',' << fmt(u[j].imag()) << '\n';
  if (!os) throw FormatError("write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  char head[4] = {};
  is.read(head, 4);
  const bool binary = is.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0;
  is.clear();
  is.seekg(0);
  return binary ? read_binary(is, path) : read_csv(is, path);
}

}  // namespace nlslab
