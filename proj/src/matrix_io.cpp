#include "hhf/matrix_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hhf {

static_assert(std::endian::native == std::endian::little, "projector files assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'H', 'H', 'F', 'P', 'R', 'O', 'J', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("truncated projector file");
  return v;
}

}  // namespace

void write_projector(std::ostream& out, const ProjectorFile& f) {
  if (f.matrix.rows() != f.matrix.cols()) throw std::invalid_argument("projector must be square");
  out.write(kMagic, sizeof kMagic);
  put<std::int32_t>(out, f.d);
  put<std::int32_t>(out, f.L);
  put<double>(out, f.g);
  put<double>(out, f.delta);
  const auto n = static_cast<std::uint64_t>(f.matrix.rows());
  put<std::uint64_t>(out, n);
  for (Eigen::Index i = 0; i < f.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < f.matrix.cols(); ++j) {
      put<double>(out, f.matrix(i, j).real());
      put<double>(out, f.matrix(i, j).imag());
    }
  if (!out) throw std::runtime_error("failed to write projector file");
}

ProjectorFile read_projector(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("not a projector file");
  ProjectorFile f;
  f.d = get<std::int32_t>(in);
  f.L = get<std::int32_t>(in);
  f.g = get<double>(in);
  f.delta = get<double>(in);
  const auto n = get<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 14)) throw std::runtime_error("projector dimension too large");
  const auto m = static_cast<Eigen::Index>(n);
  f.matrix.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      f.matrix(i, j) = cplx(re, im);
    }
  return f;
}

void save_projector(const std::string& path, const ProjectorFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_projector(out, f);
}

ProjectorFile load_projector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_projector(in);
}

}  // namespace hhf
