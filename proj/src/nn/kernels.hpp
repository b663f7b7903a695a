#pragma once

#include <cstddef>

namespace marl::nn::detail {

// c[rows x cols] = A * B (+ bias broadcast over rows), optional ReLU.
// A is addressed as a[i * a_row_stride + k * a_col_stride] so a transposed
// operand needs no copy. B is row-major [inner x cols]; c is row-major.
// Every output row is computed with the same arithmetic regardless of how
// many rows are processed together.
void gemm(std::size_t rows, std::size_t inner, std::size_t cols, const double* a,
          std::size_t a_row_stride, std::size_t a_col_stride, const double* b,
          const double* bias, double* c, bool relu);

}  // namespace marl::nn::detail
