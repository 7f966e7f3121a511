#include <random>

#include "slhkit/master_eq.hpp"
#include "slhkit/operator_expr.hpp"

namespace slh {

bool equal_numeric(const OperatorExpr& a, const OperatorExpr& b,
                   const NumericEqualitySpec& spec) {
  const SpaceLayout layout = SpaceLayout::infer({a, b}, spec.boson_dim);

  std::map<std::string, bool> symbols;
  a.collect_symbols(symbols);
  b.collect_symbols(symbols);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int s = 0; s < spec.samples; ++s) {
    Bindings bindings;
    for (const auto& [name, real_domain] : symbols) {
      const double re = unit(rng);
      // draw both components regardless, so the stream stays aligned no
      // matter how domains are split between the two expressions
      const double im = unit(rng);
      bindings[name] = real_domain ? Complex(re, 0.0) : Complex(re, im);
    }
    const Eigen::MatrixXcd ma = to_matrix(a, layout, bindings);
    const Eigen::MatrixXcd mb = to_matrix(b, layout, bindings);
    const double scale = std::max({1.0, ma.norm(), mb.norm()});
    if ((ma - mb).norm() > spec.tolerance * scale) return false;
  }
  return true;
}

}  // namespace slh
