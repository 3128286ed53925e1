#pragma once

#include <vector>

#include "catbound/quantum.hpp"
#include "oracles.hpp"

namespace testing {

inline std::vector<oracle::C> flat(const catbound::BipartiteKet& k) {
  const auto e = k.amp().entries();
  return {e.begin(), e.end()};
}

inline oracle::Mat2 mat(const catbound::CatDensity& r) {
  return {{{r(0, 0), r(0, 1)}, {r(1, 0), r(1, 1)}}};
}

inline catbound::BipartiteKet ket_from_flat(const std::vector<oracle::C>& v, std::size_t d) {
  catbound::CMatrix m(2, d);
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t e = 0; e < d; ++e) m(q, e) = v[q * d + e];
  return catbound::BipartiteKet::normalize(std::move(m));
}

inline double max_diff(const catbound::CMatrix& a, const catbound::CMatrix& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

}  // namespace testing
