#pragma once

#include <cstdint>
#include <vector>

namespace carnot::detail {

/// A right-nested bracket word [a_1, [a_2, ..., [a_{L-1}, a_L]]] over the
/// letters {x, y}, with its coefficient in log(exp(x) exp(y)).
struct BchTerm {
  int length;
  /// bit p set means letter p (0-based from the outside) is y.
  std::uint32_t letters;
  double coeff;
};

/// Terms of total length <= max_length (<= 6), sorted by length.
const std::vector<BchTerm>& bch_terms(int max_length);

}  // namespace carnot::detail
