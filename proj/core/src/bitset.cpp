#include "polytheta/bitset.hpp"

#include <bit>

#include "polytheta/error.hpp"

namespace polytheta {

namespace {
constexpr std::size_t kWordBits = 64;
}

Bitset::Bitset(std::size_t size) : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

void Bitset::set(std::size_t pos) {
  if (pos >= size_) throw DomainError("bitset index out of range");
  words_[pos / kWordBits] |= std::uint64_t{1} << (pos % kWordBits);
}

bool Bitset::test(std::size_t pos) const {
  if (pos >= size_) throw DomainError("bitset index out of range");
  return (words_[pos / kWordBits] >> (pos % kWordBits)) & 1U;
}

void Bitset::or_shifted(const Bitset& src, std::size_t shift) {
  if (src.size_ != size_) throw DomainError("bitset size mismatch");
  if (shift >= size_) return;
  const std::size_t word_shift = shift / kWordBits;
  const std::size_t bit_shift = shift % kWordBits;
  const std::size_t n = words_.size();
  if (bit_shift == 0) {
    for (std::size_t w = n; w-- > word_shift;) words_[w] |= src.words_[w - word_shift];
  } else {
    for (std::size_t w = n; w-- > word_shift;) {
      const std::size_t s = w - word_shift;
      std::uint64_t v = src.words_[s] << bit_shift;
      if (s > 0) v |= src.words_[s - 1] >> (kWordBits - bit_shift);
      words_[w] |= v;
    }
  }
  clear_tail();
}

void Bitset::clear_tail() noexcept {
  const std::size_t rem = size_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

std::size_t Bitset::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool Bitset::all() const noexcept { return count() == size_; }

std::optional<std::size_t> Bitset::first_unset() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t inv = ~words_[w];
    if (inv != 0) {
      const std::size_t pos = w * kWordBits + static_cast<std::size_t>(std::countr_zero(inv));
      if (pos < size_) return pos;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> Bitset::unset_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t inv = ~words_[w];
    while (inv != 0) {
      const std::size_t pos = w * kWordBits + static_cast<std::size_t>(std::countr_zero(inv));
      if (pos >= size_) break;
      out.push_back(pos);
      inv &= inv - 1;
    }
  }
  return out;
}

std::optional<std::size_t> Bitset::first_difference(const Bitset& other) const {
  if (other.size_ != size_) throw DomainError("bitset size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t x = words_[w] ^ other.words_[w];
    if (x != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(x));
  }
  return std::nullopt;
}

}  // namespace polytheta
