#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mwf {

enum class Signature : std::uint8_t { Euclidean3, Minkowski4 };

/// Flat coordinate chart with a diagonal metric. Orientation is the coordinate order.
class Chart {
 public:
  static Chart euclidean3() { return Chart(Signature::Euclidean3); }
  static Chart minkowski4() { return Chart(Signature::Minkowski4); }
  static std::optional<Chart> from_name(std::string_view name);

  Signature signature() const noexcept { return sig_; }
  int dimension() const noexcept { return sig_ == Signature::Euclidean3 ? 3 : 4; }
  std::string_view name() const noexcept { return sig_ == Signature::Euclidean3 ? "euclidean3" : "minkowski4"; }

  /// Coordinate name at 0-based position i: x1..x3 (Euclidean3) or x0..x3 (Minkowski4).
  std::string coordinate(int i) const;
  std::optional<int> coordinate_index(std::string_view name) const;

  /// Diagonal entry g_ii (equal to g^ii for a diagonal +-1 metric).
  int metric_sign(int i) const noexcept { return (sig_ == Signature::Minkowski4 && i > 0) ? -1 : 1; }

  /// Chart coordinates plus the time parameter `t`.
  bool allows_variable(std::string_view name) const;

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  explicit Chart(Signature s) : sig_(s) {}
  Signature sig_;
};

}  // namespace mwf
