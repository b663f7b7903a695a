#include "kernels.hpp"

#include <vector>

namespace marl::nn::detail {
namespace {

// GCC/Clang vector extensions; with AVX-512 each vec8 is one zmm register.
typedef double vec8 __attribute__((vector_size(64)));
// Unaligned view of memory for loads and stores only. Accumulators use the
// plain type; a may_alias accumulator makes GCC spill it on every iteration.
typedef double vec8_mem __attribute__((vector_size(64), aligned(8), may_alias));

inline vec8 load8(const double* p) { return *reinterpret_cast<const vec8_mem*>(p); }
inline void store8(double* p, vec8 v) { *reinterpret_cast<vec8_mem*>(p) = v; }
// Written as "v < 0 ? 0 : v" so that NaN passes through instead of vanishing.
inline vec8 relu8(vec8 v) {
  const vec8 zero = {0, 0, 0, 0, 0, 0, 0, 0};
  return v < zero ? zero : v;
}

// R rows by 8*V columns held in registers across the whole inner loop.
// b, bias and c point at the tile's first column; ldb and ldc are row strides.
template <int R, int V>
inline void vector_tile(std::size_t inner, const double* a, std::size_t ars, std::size_t acs,
                        const double* b, std::size_t ldb, const double* bias, double* c,
                        std::size_t ldc, bool relu) {
  vec8 acc[R][V];
#pragma GCC unroll 8
  for (int v = 0; v < V; ++v) {
    const vec8 init = bias ? load8(bias + 8 * v) : vec8{0, 0, 0, 0, 0, 0, 0, 0};
#pragma GCC unroll 8
    for (int r = 0; r < R; ++r) acc[r][v] = init;
  }
  for (std::size_t k = 0; k < inner; ++k) {
    vec8 w[V];
#pragma GCC unroll 8
    for (int v = 0; v < V; ++v) w[v] = load8(b + k * ldb + 8 * v);
#pragma GCC unroll 8
    for (int r = 0; r < R; ++r) {
      const double x = a[r * ars + k * acs];
#pragma GCC unroll 8
      for (int v = 0; v < V; ++v) acc[r][v] += x * w[v];
    }
  }
#pragma GCC unroll 8
  for (int r = 0; r < R; ++r) {
#pragma GCC unroll 8
    for (int v = 0; v < V; ++v) {
      store8(c + r * ldc + 8 * v, relu ? relu8(acc[r][v]) : acc[r][v]);
    }
  }
}

// Columns past the last multiple of 8, repacked zero-padded to width 8.
struct PackedTail {
  std::size_t first = 0;  // first tail column
  std::size_t width = 0;  // valid tail columns, 0..7
  const double* b = nullptr;     // [inner x 8]
  const double* bias = nullptr;  // [8] or null
};

template <int R>
void row_block(std::size_t inner, std::size_t cols, const double* a, std::size_t ars,
               std::size_t acs, const double* b, const double* bias, double* c, bool relu,
               const PackedTail& tail) {
  std::size_t j = 0;
  // Narrow row blocks get wider column tiles so that enough independent
  // accumulator chains hide the FMA latency.
  if constexpr (R == 1) {
    for (; j + 64 <= cols; j += 64) {
      vector_tile<1, 8>(inner, a, ars, acs, b + j, cols, bias ? bias + j : nullptr, c + j, cols, relu);
    }
    for (; j + 32 <= cols; j += 32) {
      vector_tile<1, 4>(inner, a, ars, acs, b + j, cols, bias ? bias + j : nullptr, c + j, cols, relu);
    }
  }
  if constexpr (R == 2) {
    for (; j + 32 <= cols; j += 32) {
      vector_tile<2, 4>(inner, a, ars, acs, b + j, cols, bias ? bias + j : nullptr, c + j, cols, relu);
    }
  }
  for (; j + 16 <= cols; j += 16) {
    vector_tile<R, 2>(inner, a, ars, acs, b + j, cols, bias ? bias + j : nullptr, c + j, cols, relu);
  }
  for (; j + 8 <= cols; j += 8) {
    vector_tile<R, 1>(inner, a, ars, acs, b + j, cols, bias ? bias + j : nullptr, c + j, cols, relu);
  }
  if (tail.width > 0) {
    double out[R * 8];
    vector_tile<R, 1>(inner, a, ars, acs, tail.b, 8, tail.bias, out, 8, relu);
    for (int r = 0; r < R; ++r) {
      for (std::size_t t = 0; t < tail.width; ++t) c[r * cols + tail.first + t] = out[r * 8 + t];
    }
  }
}

template <int R>
void row_blocks(std::size_t rows, std::size_t inner, std::size_t cols, const double* a,
                std::size_t ars, std::size_t acs, const double* b, const double* bias, double* c,
                bool relu, const PackedTail& tail, std::size_t& i) {
  for (; i + R <= rows; i += R) {
    row_block<R>(inner, cols, a + i * ars, ars, acs, b, bias, c + i * cols, relu, tail);
  }
}

// One output column: contiguous dot products, vectorised along the inner axis.
void single_column(std::size_t rows, std::size_t inner, const double* a, std::size_t ars,
                   const double* b, const double* bias, double* c, bool relu) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* x = a + i * ars;
    vec8 acc = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t k = 0;
    for (; k + 8 <= inner; k += 8) acc += load8(x + k) * load8(b + k);
    double s = 0.0;
    for (int l = 0; l < 8; ++l) s += acc[l];
    for (; k < inner; ++k) s += x[k] * b[k];
    if (bias) s += bias[0];
    c[i] = (relu && s < 0.0) ? 0.0 : s;
  }
}

}  // namespace

void gemm(std::size_t rows, std::size_t inner, std::size_t cols, const double* a,
          std::size_t a_row_stride, std::size_t a_col_stride, const double* b,
          const double* bias, double* c, bool relu) {
  if (cols == 1 && a_col_stride == 1) {
    single_column(rows, inner, a, a_row_stride, b, bias, c, relu);
    return;
  }
  PackedTail tail;
  tail.first = cols - cols % 8;
  tail.width = cols % 8;
  thread_local std::vector<double> packed;
  if (tail.width > 0) {
    packed.assign(inner * 8 + 8, 0.0);
    for (std::size_t k = 0; k < inner; ++k) {
      for (std::size_t t = 0; t < tail.width; ++t) packed[k * 8 + t] = b[k * cols + tail.first + t];
    }
    tail.b = packed.data();
    if (bias) {
      for (std::size_t t = 0; t < tail.width; ++t) packed[inner * 8 + t] = bias[tail.first + t];
      tail.bias = packed.data() + inner * 8;
    }
  }
  std::size_t i = 0;
  // Long inner loops stream B from L2; taller tiles halve that traffic.
  if (inner >= 256) row_blocks<8>(rows, inner, cols, a, a_row_stride, a_col_stride, b, bias, c, relu, tail, i);
  row_blocks<4>(rows, inner, cols, a, a_row_stride, a_col_stride, b, bias, c, relu, tail, i);
  const double* ap = a + i * a_row_stride;
  double* cp = c + i * cols;
  switch (rows - i) {
    case 3: row_block<3>(inner, cols, ap, a_row_stride, a_col_stride, b, bias, cp, relu, tail); break;
    case 2: row_block<2>(inner, cols, ap, a_row_stride, a_col_stride, b, bias, cp, relu, tail); break;
    case 1: row_block<1>(inner, cols, ap, a_row_stride, a_col_stride, b, bias, cp, relu, tail); break;
    default: break;
  }
}

}  // namespace marl::nn::detail
