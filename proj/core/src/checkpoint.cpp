#include "landau/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace landau::kinetic {

namespace {

constexpr char kMagic[8] = {'L', 'N', 'D', 'C', 'K', 'P', 'T', '1'};

template <typename U>
void put(std::ostream& os, U bits) {
  unsigned char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <typename U>
U get(std::istream& is) {
  unsigned char buf[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(U))) throw Error("checkpoint truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(buf[i]) << (8 * i);
  return bits;
}

void put_f64(std::ostream& os, double x) { put(os, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get<std::uint64_t>(is)); }
void put_f32(std::ostream& os, float x) { put(os, std::bit_cast<std::uint32_t>(x)); }
float get_f32(std::istream& is) { return std::bit_cast<float>(get<std::uint32_t>(is)); }

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const SimConfig& cfg, const SpectralState& state) {
  const Lattice L(cfg.dim, cfg.n_x, cfg.n_v, cfg.v_max);
  if (state.f_plus.size() != L.size() || state.f_minus.size() != L.size())
    throw DomainError("write_checkpoint: state does not match the config lattice");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.n_x));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.n_v));
  put_f64(os, cfg.v_max);
  put_f64(os, state.t);
  put_f64(os, cfg.epsilon);
  put<std::uint64_t>(os, L.size());
  for (const auto* f : {&state.f_plus, &state.f_minus})
    for (const cplx& c : *f) {
      put_f32(os, static_cast<float>(c.real()));
      put_f32(os, static_cast<float>(c.imag()));
    }
  if (!os) throw Error("write failed: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(path.string() + " is not a checkpoint");
  Checkpoint out;
  auto& h = out.header;
  h.version = get<std::uint32_t>(is);
  if (h.version != 1) throw Error("unsupported checkpoint version " + std::to_string(h.version));
  h.dim = get<std::uint32_t>(is);
  h.n_x = get<std::uint32_t>(is);
  h.n_v = get<std::uint32_t>(is);
  h.v_max = get_f64(is);
  h.t = get_f64(is);
  h.epsilon = get_f64(is);
  h.count = get<std::uint64_t>(is);
  std::uint64_t expect = 1;
  for (std::uint32_t i = 0; i < h.dim; ++i) expect *= static_cast<std::uint64_t>(h.n_x) * h.n_v;
  if ((h.dim != 1 && h.dim != 2) || h.count != expect) throw Error("checkpoint header inconsistent");
  out.state.t = h.t;
  for (auto* f : {&out.state.f_plus, &out.state.f_minus}) {
    f->resize(h.count);
    for (auto& c : *f) {
      const float re = get_f32(is);
      const float im = get_f32(is);
      c = cplx(re, im);
    }
  }
  return out;
}

}  // namespace landau::kinetic
