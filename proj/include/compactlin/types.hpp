#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace compactlin {

// Variable indices are 1-based everywhere: x_1 .. x_n.
using Index = int;

// Key of an assignment set A_k as it appears in the instance file.
using SetId = int;

// Unordered product x_i * x_j, stored normalized with i <= j.
struct Pair {
  Index i = 0;
  Index j = 0;

  friend auto operator<=>(const Pair&, const Pair&) = default;
};

// Maps (i, j) onto the normalized pair (min, max).
constexpr Pair normalize_pair(Index i, Index j) noexcept {
  return i <= j ? Pair{i, j} : Pair{j, i};
}

std::string to_string(const Pair& p);

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

std::string_view to_string(Sense sense);

}  // namespace compactlin
