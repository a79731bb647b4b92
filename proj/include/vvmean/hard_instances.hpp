#pragma once

#include <optional>
#include <string_view>

#include "vvmean/discrete_function.hpp"
#include "vvmean/exponent.hpp"
#include "vvmean/rng.hpp"

namespace vvmean {

/// L equal blocks of columns: block j (0-based) covers columns
/// j*floor(N2/L) .. (j+1)*floor(N2/L) - 1. Columns past L*floor(N2/L)
/// belong to no block.
class BlockPartition {
 public:
  BlockPartition(index_t n2, index_t l);

  index_t cols() const { return n2_; }
  index_t count() const { return l_; }
  index_t block_size() const { return block_size_; }
  index_t covered_cols() const { return l_ * block_size_; }

  /// 0-based block of a 0-based column, or nullopt for tail columns.
  std::optional<index_t> block_of(index_t col) const {
    if (col < 0 || col >= covered_cols()) return std::nullopt;
    return col / block_size_;
  }

  index_t first_col(index_t block) const { return block * block_size_; }

 private:
  index_t n2_;
  index_t l_;
  index_t block_size_;
};

BlockPartition blocks(index_t n2, index_t l);

/// Block count used by the sign-cloud and spike families: floor(4n/N1) + 1.
index_t block_count_additive(index_t n, index_t n1);

/// Block count used by the product and single-row families:
/// 4*ceil(4n/N1) + 1. Requires n >= N1.
index_t block_count_product(index_t n, index_t n1);

enum class Family { mu1, mu2, mu3, mu4, witness, custom };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Which adversarial distribution to draw from, and the shape parameters it
/// is tuned against.
struct InstanceSpec {
  Family family = Family::mu1;
  Exponent p{2.0};
  index_t n = 1;    // budget the instance is tuned against
  index_t n1 = 1;
  index_t n2 = 1;

  /// Admissibility: positive dimensions and, for the mu families,
  /// 1 <= n < N1*N2/21. Throws std::domain_error otherwise.
  void validate() const;
};

/// Independent fair signs per (row, block); entries in {-1, 0, +1}, tail
/// columns zero. ||f||_p <= 1 for every p.
DiscreteFunction draw_mu1(const InstanceSpec& spec, Stream& s);

/// A single signed spike: one (row, block) rectangle of amplitude
/// N1^(1/p) * N2^(1/p) * |D_j|^(-1/p), picked uniformly with a fair sign.
/// ||f||_p = 1 exactly for p < inf.
DiscreteFunction draw_mu2(const InstanceSpec& spec, Stream& s);

/// Product family: every row independently a signed block indicator of
/// amplitude N2^(1/p) * |D_j|^(-1/p). ||f||_p = 1 exactly for p < inf.
/// Requires n >= N1.
DiscreteFunction draw_mu3(const InstanceSpec& spec, Stream& s);

/// One uniformly chosen active row carrying N1^(1/p) times a sign pattern
/// over all blocks; every other row is zero. Requires n >= N1.
DiscreteFunction draw_mu4(const InstanceSpec& spec, Stream& s);

}  // namespace vvmean
