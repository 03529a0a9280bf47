#include "bch.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

namespace carnot::detail {

namespace {

constexpr int kMaxLength = 6;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational& operator+=(const Rational& o) {
    num = num * o.den + o.num * den;
    den *= o.den;
    const auto g = std::gcd(num, den);
    if (g != 0) {
      num /= g;
      den /= g;
    }
    return *this;
  }
};

constexpr std::array<std::int64_t, kMaxLength + 1> kFactorial = {1, 1, 2, 6, 24, 120, 720};

// Dynkin's form of the BCH series:
//   log(e^x e^y) = sum_n (-1)^(n-1)/n sum_{r_i+s_i>0}
//       [x^r1 y^s1 ... x^rn y^sn] / ((sum_i r_i+s_i) prod_i r_i! s_i!)
// with right-nested brackets. Coefficients are accumulated per word.
void enumerate(int pairs, int length, std::uint32_t letters, std::int64_t factorials,
               std::map<std::pair<int, std::uint32_t>, Rational>& acc) {
  for (int r = 0; length + r <= kMaxLength; ++r) {
    for (int s = (r == 0 ? 1 : 0); length + r + s <= kMaxLength; ++s) {
      std::uint32_t word = letters;
      for (int p = 0; p < s; ++p) word |= 1u << (length + r + p);
      const int len = length + r + s;
      const int n = pairs + 1;
      const std::int64_t fact = factorials * kFactorial[static_cast<std::size_t>(r)] *
                                kFactorial[static_cast<std::size_t>(s)];
      acc[{len, word}] += Rational{n % 2 == 1 ? 1 : -1, static_cast<std::int64_t>(n) * len * fact};
      enumerate(n, len, word, fact, acc);
    }
  }
}

std::vector<BchTerm> build_terms() {
  std::map<std::pair<int, std::uint32_t>, Rational> acc;
  enumerate(0, 0, 0u, 1, acc);
  std::vector<BchTerm> terms;
  for (const auto& [key, q] : acc) {
    const auto [len, word] = key;
    if (q.num == 0) continue;
    // [a, a] = 0 kills words whose two innermost letters agree
    if (len >= 2 && (((word >> (len - 1)) & 1u) == ((word >> (len - 2)) & 1u))) continue;
    terms.push_back({len, word, static_cast<double>(q.num) / static_cast<double>(q.den)});
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const BchTerm& a, const BchTerm& b) { return a.length < b.length; });
  return terms;
}

}  // namespace

const std::vector<BchTerm>& bch_terms(int max_length) {
  static const std::vector<BchTerm> all = build_terms();
  static std::array<std::vector<BchTerm>, kMaxLength + 1> truncated = [] {
    std::array<std::vector<BchTerm>, kMaxLength + 1> out;
    for (int l = 0; l <= kMaxLength; ++l) {
      for (const auto& t : all) {
        if (t.length <= l) out[static_cast<std::size_t>(l)].push_back(t);
      }
    }
    return out;
  }();
  return truncated[static_cast<std::size_t>(std::clamp(max_length, 0, kMaxLength))];
}

}  // namespace carnot::detail
