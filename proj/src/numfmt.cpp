#include "slhkit/numfmt.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>

namespace slh {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also collapses -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string format_complex(const std::complex<double>& v) {
  const double re = v.real();
  const double im = v.imag();
  auto imag_product = [](double b) -> std::string {
    if (b == 1.0) return "i";
    if (b == -1.0) return "-i";
    return format_double(b) + "*i";
  };
  if (im == 0.0) return format_double(re);
  if (re == 0.0) return imag_product(im);
  std::string s = "(" + format_double(re);
  if (im > 0.0) {
    s += "+" + imag_product(im);
  } else {
    s += "-" + imag_product(-im);
  }
  return s + ")";
}

}  // namespace slh
