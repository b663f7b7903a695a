#pragma once

#include <filesystem>
#include <iosfwd>

#include "marl/nn/mlp.hpp"

namespace marl::nn {

// Binary network checkpoint, all integers and doubles little-endian:
//
//   offset 0   char[8]   magic "MARLMLP\0"
//   offset 8   u32       format version (1)
//   offset 12  u32       output activation (0 identity, 1 tanh)
//   offset 16  u32       number of layer sizes S (= layers + 1)
//   offset 20  u64[S]    layer sizes, input first
//   then       f64[P]    parameters, per layer: weights [in x out] row-major, then bias [out]
//
// Loading restores the parameters bit for bit.
inline constexpr char kCheckpointMagic[8] = {'M', 'A', 'R', 'L', 'M', 'L', 'P', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_mlp(std::ostream& out, const Mlp& net);
Mlp read_mlp(std::istream& in);

void save_mlp(const std::filesystem::path& path, const Mlp& net);
Mlp load_mlp(const std::filesystem::path& path);

}  // namespace marl::nn
