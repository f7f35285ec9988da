#include "calderlab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "calderlab/kernels.hpp"

namespace calderlab {

double eval_c1(double xi, double xi1) { return kernels::c1_sgn_point(xi, xi1); }

double eval_c1_indicator(double xi, double xi1) { return kernels::c1_indicator_point(xi, xi1); }

double eval_primitive(double xi, double xi1) {
  if (xi1 >= 0.0) return std::clamp(xi + xi1, 0.0, xi1);
  return -std::min(std::max(xi, 0.0), -xi1);
}

namespace {

void require_nonzero(double a, double b, const char* what) {
  if (a == 0.0 || b == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument(std::string(what) + ": parameters a and b must be finite and nonzero");
}

}  // namespace

double eval_gen22(double a, double b, double xi, double xi1) {
  require_nonzero(a, b, "eval_gen22");
  return eval_c1(xi, a * xi1) * eval_c1(xi, b * xi1);
}

double eval_circular(double a, double b, double xi1, double xi2) {
  require_nonzero(a, b, "eval_circular");
  return eval_c1(xi1, b * xi2) * eval_c1(xi2, a * xi1);
}

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::c1_sgn: return "c1_sgn";
    case SymbolKind::c1_indicator: return "c1_indicator";
    case SymbolKind::gen22_product: return "gen22_product";
    case SymbolKind::circular: return "circular";
    case SymbolKind::double_commutator: return "double_commutator";
    case SymbolKind::constant: return "constant";
    case SymbolKind::separable_sgn: return "separable_sgn";
  }
  return "?";
}

ArgumentMap operator*(const ArgumentMap& a, const ArgumentMap& b) {
  const auto& x = a.m;
  const auto& y = b.m;
  return ArgumentMap{{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                      x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]}};
}

SymbolDescriptor SymbolDescriptor::c1_sgn() { return SymbolDescriptor(SymbolKind::c1_sgn); }
SymbolDescriptor SymbolDescriptor::c1_indicator() {
  return SymbolDescriptor(SymbolKind::c1_indicator);
}
SymbolDescriptor SymbolDescriptor::gen22(double a, double b) {
  require_nonzero(a, b, "gen22");
  SymbolDescriptor d(SymbolKind::gen22_product);
  d.a_ = a;
  d.b_ = b;
  return d;
}
SymbolDescriptor SymbolDescriptor::circular(double a, double b) {
  require_nonzero(a, b, "circular");
  SymbolDescriptor d(SymbolKind::circular);
  d.a_ = a;
  d.b_ = b;
  return d;
}
SymbolDescriptor SymbolDescriptor::double_commutator() {
  return SymbolDescriptor(SymbolKind::double_commutator);
}
SymbolDescriptor SymbolDescriptor::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("constant symbol must be finite");
  SymbolDescriptor d(SymbolKind::constant);
  d.c_ = c;
  return d;
}
SymbolDescriptor SymbolDescriptor::separable_sgn(int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("separable_sgn axis must be 1 or 2");
  SymbolDescriptor d(SymbolKind::separable_sgn);
  d.axis_ = axis;
  return d;
}

SymbolDescriptor SymbolDescriptor::with_arguments(const ArgumentMap& outer) const {
  SymbolDescriptor d = *this;
  d.map_ = map_ * outer;
  return d;
}

std::string SymbolDescriptor::formula() const {
  std::ostringstream os;
  switch (kind_) {
    case SymbolKind::c1_sgn: os << "int_0^1 sgn(u + t v) dt"; break;
    case SymbolKind::c1_indicator: os << "int_0^1 1_{R+}(u + t v) dt"; break;
    case SymbolKind::gen22_product:
      os << "c1(u, " << a_ << " v) * c1(u, " << b_ << " v)";
      break;
    case SymbolKind::circular: os << "c1(u, " << b_ << " v) * c1(v, " << a_ << " u)"; break;
    case SymbolKind::double_commutator: os << "c1(u, v)^2"; break;
    case SymbolKind::constant: os << c_; break;
    case SymbolKind::separable_sgn: os << "-i sgn(" << (axis_ == 1 ? "u" : "v") << ")"; break;
  }
  if (!map_.is_identity()) {
    const auto& m = map_.m;
    os << " at (u, v) = (" << m[0] << "u + " << m[1] << "v, " << m[2] << "u + " << m[3] << "v)";
  }
  return os.str();
}

double SymbolDescriptor::base_real(double u, double v) const {
  switch (kind_) {
    case SymbolKind::c1_sgn: return eval_c1(u, v);
    case SymbolKind::c1_indicator: return eval_c1_indicator(u, v);
    case SymbolKind::gen22_product: return eval_c1(u, a_ * v) * eval_c1(u, b_ * v);
    case SymbolKind::circular: return eval_c1(u, b_ * v) * eval_c1(v, a_ * u);
    case SymbolKind::double_commutator: {
      const double c = eval_c1(u, v);
      return c * c;
    }
    case SymbolKind::constant: return c_;
    case SymbolKind::separable_sgn: return 0.0;
  }
  return 0.0;
}

namespace {

inline void map_point(const ArgumentMap& map, double u, double v, double& x, double& y) {
  if (map.is_identity()) {
    x = u;
    y = v;
    return;
  }
  const auto& m = map.m;
  x = m[0] * u + m[1] * v;
  y = m[2] * u + m[3] * v;
}

}  // namespace

std::complex<double> SymbolDescriptor::operator()(double u, double v) const {
  double x, y;
  map_point(map_, u, v, x, y);
  if (kind_ == SymbolKind::separable_sgn)
    return {0.0, -kernels::sgn(axis_ == 1 ? x : y)};
  return base_real(x, y);
}

double SymbolDescriptor::real_value(double u, double v) const {
  if (kind_ == SymbolKind::separable_sgn)
    throw std::invalid_argument("separable_sgn is not real-valued");
  double x, y;
  map_point(map_, u, v, x, y);
  return base_real(x, y);
}

void SymbolDescriptor::real_row(double u, std::span<const double> v, std::span<double> out) const {
  if (v.size() != out.size()) throw std::invalid_argument("real_row: size mismatch");
  if (kind_ == SymbolKind::separable_sgn)
    throw std::invalid_argument("separable_sgn is not real-valued");
  const std::size_t n = v.size();
  if (kind_ == SymbolKind::constant) {
    std::fill(out.begin(), out.end(), c_);
    return;
  }
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) map_point(map_, u, v[i], x[i], y[i]);
  const auto& k = kernels::active();
  switch (kind_) {
    case SymbolKind::c1_sgn: k.c1_sgn(x.data(), y.data(), out.data(), n); return;
    case SymbolKind::c1_indicator: k.c1_indicator(x.data(), y.data(), out.data(), n); return;
    case SymbolKind::double_commutator:
      k.c1_sgn(x.data(), y.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) out[i] *= out[i];
      return;
    case SymbolKind::gen22_product: {
      std::vector<double> ya(n), tmp(n);
      for (std::size_t i = 0; i < n; ++i) ya[i] = a_ * y[i];
      k.c1_sgn(x.data(), ya.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) ya[i] = b_ * y[i];
      k.c1_sgn(x.data(), ya.data(), tmp.data(), n);
      for (std::size_t i = 0; i < n; ++i) out[i] *= tmp[i];
      return;
    }
    case SymbolKind::circular: {
      std::vector<double> s(n), tmp(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = b_ * y[i];
      k.c1_sgn(x.data(), s.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) s[i] = a_ * x[i];
      k.c1_sgn(y.data(), s.data(), tmp.data(), n);
      for (std::size_t i = 0; i < n; ++i) out[i] *= tmp[i];
      return;
    }
    default:
      for (std::size_t i = 0; i < n; ++i) out[i] = base_real(x[i], y[i]);
  }
}

namespace {

// Midpoint rule for int_0^1 sgn(u + t v) dt: node values are u + (i+1/2) v / M,
// whose sign equals that of u M + (i+1/2) v.
double oracle_c1(double u, double v, std::int64_t nodes) {
  const auto c = kernels::active().sign_counts(u * static_cast<double>(nodes), v, nodes);
  return static_cast<double>(c.positive - c.negative) / static_cast<double>(nodes);
}

double oracle_indicator(double u, double v, std::int64_t nodes) {
  const auto c = kernels::active().sign_counts(u * static_cast<double>(nodes), v, nodes);
  return static_cast<double>(nodes + c.positive - c.negative) / (2.0 * static_cast<double>(nodes));
}

}  // namespace

double quadrature_oracle(const SymbolDescriptor& m, double u, double v, std::int64_t nodes) {
  if (nodes < 10) throw std::invalid_argument("quadrature_oracle needs at least 10 nodes");
  double x, y;
  map_point(m.arguments(), u, v, x, y);
  switch (m.kind()) {
    case SymbolKind::c1_sgn: return oracle_c1(x, y, nodes);
    case SymbolKind::c1_indicator: return oracle_indicator(x, y, nodes);
    case SymbolKind::gen22_product:
      return oracle_c1(x, m.a() * y, nodes) * oracle_c1(x, m.b() * y, nodes);
    case SymbolKind::double_commutator: {
      const double c = oracle_c1(x, y, nodes);
      return c * c;
    }
    case SymbolKind::circular:
      return oracle_c1(x, m.b() * y, nodes) * oracle_c1(y, m.a() * x, nodes);
    case SymbolKind::constant:
    case SymbolKind::separable_sgn:
      break;
  }
  throw std::invalid_argument(std::string("quadrature_oracle: kind ") + to_string(m.kind()) +
                              " has no defining integral");
}

namespace {

std::pair<double, double> point_arguments(const SymbolDescriptor& m, const FrequencyPoint& p) {
  if (m.kind() == SymbolKind::circular) {
    if (!p.xi2) throw std::invalid_argument("circular symbol is evaluated at (xi1, xi2); xi2 missing");
    return {p.xi1, *p.xi2};
  }
  return {p.xi, p.xi1};
}

}  // namespace

double quadrature_oracle(const SymbolDescriptor& m, const FrequencyPoint& p, std::int64_t nodes) {
  const auto [u, v] = point_arguments(m, p);
  return quadrature_oracle(m, u, v, nodes);
}

std::complex<double> evaluate(const SymbolDescriptor& m, const FrequencyPoint& p) {
  const auto [u, v] = point_arguments(m, p);
  return m(u, v);
}

}  // namespace calderlab
