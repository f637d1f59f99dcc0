#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "stiefelsdp/linalg.hpp"

// Standard-form conic program:
//
//   minimize    c . x
//   subject to  A x = b
//               x in K1 x K2 x ... (PSD cones in svec form, plus free blocks)
//
// PSD blocks are stored scaled-vectorized, so the cones are self dual
// under the plain Euclidean inner product.

namespace stiefel {

enum class BlockKind { free_vars, psd };

struct ConeBlock {
  BlockKind kind = BlockKind::psd;
  Index order = 0;  // matrix order for psd, plain length for free_vars
  std::string label;

  Index dim() const {
    return kind == BlockKind::psd ? svec_len(order) : order;
  }
};

struct ConicProgram {
  std::vector<ConeBlock> blocks;
  Eigen::SparseMatrix<double> eq_matrix;
  Vector eq_rhs;
  Vector objective;

  Index num_vars() const {
    Index n = 0;
    for (const auto& b : blocks) n += b.dim();
    return n;
  }
  Index num_rows() const { return eq_rhs.size(); }

  std::vector<Index> offsets() const {
    std::vector<Index> off(blocks.size() + 1, 0);
    for (size_t k = 0; k < blocks.size(); ++k)
      off[k + 1] = off[k] + blocks[k].dim();
    return off;
  }

  // Index of the unique block with the given label.
  size_t block_index(std::string_view label) const;
};

// Documented JSON form of a program, for inspection and debugging.
void dump_program(const ConicProgram& prog, const std::string& path);

}  // namespace stiefel
