#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace polytheta {

/// Fixed-size bitset over [0, size) with the shift-or primitive used by the
/// sumset sieves.
class Bitset {
 public:
  explicit Bitset(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  void set(std::size_t pos);
  bool test(std::size_t pos) const;

  /// this |= (src << shift), bits shifted past size() are dropped.
  void or_shifted(const Bitset& src, std::size_t shift);

  std::size_t count() const noexcept;
  bool all() const noexcept;
  std::optional<std::size_t> first_unset() const noexcept;
  std::vector<std::size_t> unset_positions() const;
  /// Least position where the two bitsets differ; sizes must match.
  std::optional<std::size_t> first_difference(const Bitset& other) const;

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  void clear_tail() noexcept;

  std::size_t size_;
  std::vector<std::uint64_t> words_;
};

}  // namespace polytheta
