#pragma once

#include <complex>
#include <string>

namespace slh {

// Shortest decimal string that round-trips to exactly `v` (1 -> "1",
// 0.25 -> "0.25", 1e-06 stays scientific).  Negative zero prints as "0".
std::string format_double(double v);

// Renders a complex coefficient for use inside a '*'-joined product:
//   (2,0)  -> "2"        (0,1)   -> "i"       (0,-2) -> "-2*i"
//   (1,1)  -> "(1+i)"    (1,-2)  -> "(1-2*i)"
std::string format_complex(const std::complex<double>& v);

}  // namespace slh
