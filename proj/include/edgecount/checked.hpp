#pragma once

#include <stdexcept>

namespace edgecount::detail {

template <typename T>
T checked_add(T a, T b) {
  T out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("integer overflow in graph functional");
  return out;
}

template <typename T>
T checked_mul(T a, T b) {
  T out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in graph functional");
  return out;
}

}  // namespace edgecount::detail
