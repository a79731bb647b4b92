#include "vvmean/hard_instances.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vvmean {

BlockPartition::BlockPartition(index_t n2, index_t l) : n2_(n2), l_(l) {
  if (n2 < 1) throw std::invalid_argument("BlockPartition: n2 must be positive");
  if (l < 1 || l > n2) throw std::domain_error("BlockPartition: need 1 <= L <= N2");
  block_size_ = n2 / l;
}

BlockPartition blocks(index_t n2, index_t l) { return BlockPartition(n2, l); }

index_t block_count_additive(index_t n, index_t n1) {
  if (n < 1 || n1 < 1) throw std::invalid_argument("block_count_additive: need n, N1 >= 1");
  return 4 * n / n1 + 1;
}

index_t block_count_product(index_t n, index_t n1) {
  if (n1 < 1) throw std::invalid_argument("block_count_product: need N1 >= 1");
  if (n < n1) throw std::invalid_argument("block_count_product: requires n >= N1");
  const index_t c = (4 * n + n1 - 1) / n1;  // ceil(4n/N1)
  return 4 * c + 1;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::mu1: return "mu1";
    case Family::mu2: return "mu2";
    case Family::mu3: return "mu3";
    case Family::mu4: return "mu4";
    case Family::witness: return "witness";
    case Family::custom: return "custom";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "mu1") return Family::mu1;
  if (name == "mu2") return Family::mu2;
  if (name == "mu3") return Family::mu3;
  if (name == "mu4") return Family::mu4;
  if (name == "witness") return Family::witness;
  if (name == "custom") return Family::custom;
  throw std::domain_error("unknown instance family '" + std::string(name) + "'");
}

void InstanceSpec::validate() const {
  if (n1 < 1 || n2 < 1) throw std::domain_error("InstanceSpec: dimensions must be positive");
  const bool mu = family == Family::mu1 || family == Family::mu2 || family == Family::mu3 ||
                  family == Family::mu4;
  if (mu) {
    if (n < 1 || 21 * n >= n1 * n2) {
      throw std::domain_error("InstanceSpec: mu families require 1 <= n < N1*N2/21");
    }
  }
}

namespace {

void fill_row_block(std::vector<double>& values, index_t n2, index_t row, const BlockPartition& part,
                    index_t block, double value) {
  const index_t start = part.first_col(block);
  for (index_t t = 0; t < part.block_size(); ++t) {
    values[static_cast<std::size_t>(row * n2 + start + t)] = value;
  }
}

}  // namespace

DiscreteFunction draw_mu1(const InstanceSpec& spec, Stream& s) {
  spec.validate();
  const BlockPartition part = blocks(spec.n2, block_count_additive(spec.n, spec.n1));
  std::vector<double> values(static_cast<std::size_t>(spec.n1 * spec.n2), 0.0);
  // Sign draw order: rows outer, blocks inner.
  for (index_t i = 0; i < spec.n1; ++i) {
    for (index_t j = 0; j < part.count(); ++j) {
      fill_row_block(values, spec.n2, i, part, j, static_cast<double>(s.bernoulli_sign()));
    }
  }
  return DiscreteFunction(spec.n1, spec.n2, std::move(values));
}

DiscreteFunction draw_mu2(const InstanceSpec& spec, Stream& s) {
  spec.validate();
  const BlockPartition part = blocks(spec.n2, block_count_additive(spec.n, spec.n1));
  const double ip = spec.p.reciprocal();
  const double amp = std::pow(static_cast<double>(spec.n1), ip) *
                     std::pow(static_cast<double>(spec.n2), ip) *
                     std::pow(static_cast<double>(part.block_size()), -ip);
  // Draw order: row, block, sign.
  const index_t i = s.uniform_index(spec.n1) - 1;
  const index_t j = s.uniform_index(part.count()) - 1;
  const double a = static_cast<double>(s.bernoulli_sign());
  std::vector<double> values(static_cast<std::size_t>(spec.n1 * spec.n2), 0.0);
  fill_row_block(values, spec.n2, i, part, j, a * amp);
  return DiscreteFunction(spec.n1, spec.n2, std::move(values));
}

DiscreteFunction draw_mu3(const InstanceSpec& spec, Stream& s) {
  spec.validate();
  const BlockPartition part = blocks(spec.n2, block_count_product(spec.n, spec.n1));
  const double ip = spec.p.reciprocal();
  const double amp = std::pow(static_cast<double>(spec.n2), ip) *
                     std::pow(static_cast<double>(part.block_size()), -ip);
  std::vector<double> values(static_cast<std::size_t>(spec.n1 * spec.n2), 0.0);
  // Per row: block index, then sign.
  for (index_t i = 0; i < spec.n1; ++i) {
    const index_t j = s.uniform_index(part.count()) - 1;
    const double a = static_cast<double>(s.bernoulli_sign());
    fill_row_block(values, spec.n2, i, part, j, a * amp);
  }
  return DiscreteFunction(spec.n1, spec.n2, std::move(values));
}

DiscreteFunction draw_mu4(const InstanceSpec& spec, Stream& s) {
  spec.validate();
  const BlockPartition part = blocks(spec.n2, block_count_product(spec.n, spec.n1));
  const double amp = std::pow(static_cast<double>(spec.n1), spec.p.reciprocal());
  std::vector<double> values(static_cast<std::size_t>(spec.n1 * spec.n2), 0.0);
  // Active row first, then one sign per block.
  const index_t i = s.uniform_index(spec.n1) - 1;
  for (index_t j = 0; j < part.count(); ++j) {
    fill_row_block(values, spec.n2, i, part, j, amp * static_cast<double>(s.bernoulli_sign()));
  }
  return DiscreteFunction(spec.n1, spec.n2, std::move(values));
}

}  // namespace vvmean
