#include "iondfs/quadrature.hpp"

namespace iondfs {

std::size_t even_intervals(double length, double step) {
  auto n = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
  if (n < 2) n = 2;
  if (n % 2 == 1) ++n;
  return n;
}

}  // namespace iondfs
