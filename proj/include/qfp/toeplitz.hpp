#pragma once

// Random Toeplitz linear code over GF(2), mapping n input bits to m codeword
// bits. The m x n generator has entries T[i][j] = diag[i - j + n - 1], so it
// is fixed by the n + m - 1 bits of diag.

#include <qfp/bits.hpp>
#include <qfp/errors.hpp>

#include <bit>
#include <cstdint>
#include <random>
#include <utility>

namespace qfp {

struct ToeplitzCode {
  std::size_t n = 0;
  std::size_t m = 0;
  BitVector diag;
  std::uint64_t seed = 0;

  static ToeplitzCode from_diagonal(std::size_t n, std::size_t m, BitVector diag,
                                    std::uint64_t seed = 0) {
    detail::require(n >= 1, "toeplitz: n must be >= 1");
    detail::require(m >= n, "toeplitz: need m >= n");
    detail::require(m % 2 == 0, "toeplitz: m must be even (bits are consumed in pairs)");
    detail::require(diag.size() == n + m - 1, "toeplitz: diagonal must hold n + m - 1 bits");
    return ToeplitzCode{n, m, std::move(diag), seed};
  }

  static ToeplitzCode random(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    detail::require(n >= 1 && m >= n, "toeplitz: need 1 <= n <= m");
    return from_diagonal(n, m, BitVector::random(n + m - 1, rng), seed);
  }

  bool entry(std::size_t i, std::size_t j) const { return diag.get(i + n - 1 - j); }

  /// E(x) = T x over GF(2). Output bit i is the parity of diag[i, i + n)
  /// against x read back to front.
  BitVector encode(const BitVector& x) const {
    detail::require(x.size() == n, "toeplitz: input length must equal n");
    const BitVector x_rev = x.reversed();
    const auto& xw = x_rev.words();
    BitVector out(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t w = 0; w < xw.size(); ++w) acc ^= diag.window(i + 64 * w) & xw[w];
      if (std::popcount(acc) & 1) out.set(i, true);
    }
    return out;
  }
};

}  // namespace qfp
