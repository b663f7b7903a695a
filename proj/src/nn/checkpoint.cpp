#include "marl/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "marl/common/errors.hpp"

namespace marl::nn {
namespace {

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      r = static_cast<U>((r << 8) | ((v >> (8 * i)) & 0xFF));
    }
    return r;
  } else {
    return v;
  }
}

template <typename U>
void put(std::ostream& out, U v) {
  v = to_little(v);
  char buf[sizeof(U)];
  std::memcpy(buf, &v, sizeof(U));
  out.write(buf, sizeof(U));
}

template <typename U>
U get(std::istream& in) {
  char buf[sizeof(U)];
  if (!in.read(buf, sizeof(U))) throw ConfigError("checkpoint truncated");
  U v;
  std::memcpy(&v, buf, sizeof(U));
  return to_little(v);  // byte swap is its own inverse
}

}  // namespace

void write_mlp(std::ostream& out, const Mlp& net) {
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.output_activation()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (std::size_t s : net.layer_sizes()) put<std::uint64_t>(out, s);
  for (double p : net.parameters()) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p));
  if (!out) throw ConfigError("failed to write network checkpoint");
}

Mlp read_mlp(std::istream& in) {
  char magic[sizeof(kCheckpointMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw ConfigError("not a network checkpoint (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto activation = get<std::uint32_t>(in);
  if (activation > 1) throw ConfigError("unknown output activation in checkpoint");
  const auto count = get<std::uint32_t>(in);
  if (count < 2 || count > 64) throw ConfigError("implausible layer count in checkpoint");
  std::vector<std::size_t> sizes(count);
  for (auto& s : sizes) {
    const auto v = get<std::uint64_t>(in);
    if (v == 0 || v > (1u << 20)) throw ConfigError("implausible layer size in checkpoint");
    s = static_cast<std::size_t>(v);
  }
  Mlp net(std::move(sizes), static_cast<OutputActivation>(activation));
  for (double& p : net.parameters()) p = std::bit_cast<double>(get<std::uint64_t>(in));
  return net;
}

void save_mlp(const std::filesystem::path& path, const Mlp& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_mlp(out, net);
}

Mlp load_mlp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_mlp(in);
}

}  // namespace marl::nn
