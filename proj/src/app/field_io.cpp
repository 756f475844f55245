#include "rbe/app/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "rbe/errors.hpp"

namespace rbe::app {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

namespace {

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(path + ": truncated header");
  return v;
}

}  // namespace

void write_field(const std::string& path, const DistField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  const auto& q = f.grid().momentum();
  out.write(kFieldMagic, sizeof kFieldMagic);
  put<std::uint32_t>(out, kFieldVersion);
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, f.n_x());
  put<std::uint64_t>(out, q.n_radial());
  put<std::uint64_t>(out, q.n_polar());
  put<std::uint64_t>(out, q.n_azimuth());
  put<double>(out, q.pmax());
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) throw Error("write failed: " + path);
}

DistField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[sizeof kFieldMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kFieldMagic, sizeof magic) != 0)
    throw Error(path + ": not a field file");
  const auto version = take<std::uint32_t>(in, path);
  if (version != kFieldVersion) throw Error(path + ": unsupported version " + std::to_string(version));
  take<std::uint32_t>(in, path);
  const auto n_x = take<std::uint64_t>(in, path);
  const auto n_r = take<std::uint64_t>(in, path);
  const auto n_t = take<std::uint64_t>(in, path);
  const auto n_a = take<std::uint64_t>(in, path);
  const auto pmax = take<double>(in, path);
  constexpr std::uint64_t kMaxDim = 1u << 16;
  if (n_x > kMaxDim || n_r > kMaxDim || n_t > kMaxDim || n_a > kMaxDim)
    throw Error(path + ": implausible grid descriptors");

  auto grid = std::make_shared<const PhaseGrid>(n_x, MomentumQuadrature(pmax, n_r, n_t, n_a));
  std::vector<double> values(grid->size());
  if (!in.read(reinterpret_cast<char*>(values.data()),
               static_cast<std::streamsize>(values.size() * sizeof(double))))
    throw Error(path + ": truncated data");
  if (in.peek() != std::char_traits<char>::eof()) throw Error(path + ": trailing bytes");
  return DistField(std::move(grid), std::move(values));
}

void write_field_csv(const std::string& path, const DistField& f) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> out(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!out) throw Error("cannot open " + path + " for writing");
  const auto& q = f.grid().momentum();
  const auto& x = f.grid().x();
  std::fputs("x1,p1,p2,p3,f\n", out.get());
  for (std::size_t j = 0; j < f.n_x(); ++j)
    for (std::size_t i = 0; i < f.n_p(); ++i) {
      const Vec3& p = q.node(i);
      std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x[j], p.x, p.y, p.z, f(i, j));
    }
  if (std::ferror(out.get())) throw Error("write failed: " + path);
}

}  // namespace rbe::app
