#include "qrl/env/sequence.hpp"

#include <limits>

#include "qrl/errors.hpp"

namespace qrl {

namespace {
constexpr std::uint64_t kMaxSpace = std::uint64_t{1} << 62;
}

SequenceSpace::SequenceSpace(std::vector<std::uint32_t> arities) : arities_(std::move(arities)) {
  if (arities_.empty()) throw ContractViolation("sequence space needs at least one step");
  prefix_offsets_.reserve(arities_.size() + 1);
  std::uint64_t level = 1;
  std::uint64_t offset = 0;
  for (std::uint32_t a : arities_) {
    if (a == 0) throw ContractViolation("step arity must be positive");
    prefix_offsets_.push_back(offset);
    offset += level;
    if (level > kMaxSpace / a) throw ContractViolation("sequence space exceeds 2^62 sequences");
    level *= a;
    if (a > max_arity_) max_arity_ = a;
    if (a != 2) binary_ = false;
  }
  prefix_offsets_.push_back(offset);
  size_ = level;
}

SequenceSpace SequenceSpace::binary(std::size_t length) {
  return SequenceSpace(std::vector<std::uint32_t>(length, 2));
}

void SequenceSpace::validate(const ActionSequence& a) const {
  if (a.size() != arities_.size()) {
    throw ContractViolation("action sequence length " + std::to_string(a.size()) +
                            " does not match epoch length " + std::to_string(arities_.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= arities_[i]) {
      throw ContractViolation("action " + std::to_string(a[i]) + " at step " + std::to_string(i) +
                              " exceeds arity " + std::to_string(arities_[i]));
    }
  }
}

std::uint64_t SequenceSpace::index_of(std::span<const std::uint32_t> steps) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) index = index * arities_[i] + steps[i];
  return index;
}

void SequenceSpace::sequence_at(std::uint64_t index, ActionSequence& out) const {
  if (index >= size_) throw ContractViolation("sequence index out of range");
  out.steps.resize(arities_.size());
  for (std::size_t i = arities_.size(); i-- > 0;) {
    out.steps[i] = static_cast<std::uint32_t>(index % arities_[i]);
    index /= arities_[i];
  }
}

ActionSequence SequenceSpace::sequence_at(std::uint64_t index) const {
  ActionSequence out;
  sequence_at(index, out);
  return out;
}

std::uint64_t SequenceSpace::prefix_id(std::span<const std::uint32_t> prefix) const {
  return 1 + prefix_offsets_[prefix.size()] + index_of(prefix);
}

std::string to_bitstring(const ActionSequence& a) {
  std::string out;
  out.reserve(a.size());
  for (std::uint32_t s : a.steps) {
    if (s > 1) throw ContractViolation("to_bitstring needs a binary sequence");
    out.push_back(s ? '1' : '0');
  }
  return out;
}

ActionSequence from_bitstring(std::string_view bits) {
  ActionSequence a;
  a.steps.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw ContractViolation("bit string may only contain 0 and 1");
    a.steps.push_back(c == '1' ? 1u : 0u);
  }
  return a;
}

}  // namespace qrl
