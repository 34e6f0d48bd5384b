#include "mwf/forms/chart.hpp"

namespace mwf {

std::optional<Chart> Chart::from_name(std::string_view name) {
  if (name == "euclidean3") return euclidean3();
  if (name == "minkowski4") return minkowski4();
  return std::nullopt;
}

std::string Chart::coordinate(int i) const {
  const int first = sig_ == Signature::Euclidean3 ? 1 : 0;
  return "x" + std::to_string(first + i);
}

std::optional<int> Chart::coordinate_index(std::string_view name) const {
  if (name.size() != 2 || name[0] != 'x' || name[1] < '0' || name[1] > '3') return std::nullopt;
  const int k = name[1] - '0';
  const int first = sig_ == Signature::Euclidean3 ? 1 : 0;
  if (k < first) return std::nullopt;
  return k - first;
}

bool Chart::allows_variable(std::string_view name) const { return name == "t" || coordinate_index(name).has_value(); }

}  // namespace mwf
