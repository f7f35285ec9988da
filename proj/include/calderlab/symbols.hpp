#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace calderlab {

// int_0^1 sgn(xi + t xi1) dt, sgn(0) = 0.
double eval_c1(double xi, double xi1);
// int_0^1 1_{R+}(xi + t xi1) dt, with 1_{R+}(0) = 1/2.
double eval_c1_indicator(double xi, double xi1);
// Oriented integral int_0^{xi1} 1_{R+}(xi + t) dt.
double eval_primitive(double xi, double xi1);
// eval_c1(xi, a xi1) * eval_c1(xi, b xi1).
double eval_gen22(double a, double b, double xi, double xi1);
// eval_c1(xi1, b xi2) * eval_c1(xi2, a xi1).
double eval_circular(double a, double b, double xi1, double xi2);

enum class SymbolKind {
  c1_sgn,
  c1_indicator,
  gen22_product,
  circular,
  double_commutator,
  constant,
  separable_sgn,
};

const char* to_string(SymbolKind kind);

// Integer linear substitution of the two arguments:
// (u, v) -> (m[0] u + m[1] v, m[2] u + m[3] v).
struct ArgumentMap {
  std::array<int, 4> m{1, 0, 0, 1};
  bool is_identity() const { return m == std::array<int, 4>{1, 0, 0, 1}; }
  bool operator==(const ArgumentMap&) const = default;
};

// Matrix product: substituting b into a symbol already wrapped by a gives a * b.
ArgumentMap operator*(const ArgumentMap& a, const ArgumentMap& b);

class SymbolDescriptor {
 public:
  static SymbolDescriptor c1_sgn();
  static SymbolDescriptor c1_indicator();
  static SymbolDescriptor gen22(double a, double b);
  static SymbolDescriptor circular(double a, double b);
  static SymbolDescriptor double_commutator();
  static SymbolDescriptor constant(double c);
  // -i sgn of the chosen argument (axis 1 or 2).
  static SymbolDescriptor separable_sgn(int axis);

  SymbolKind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  int axis() const { return axis_; }
  const ArgumentMap& arguments() const { return map_; }
  bool is_real() const { return kind_ != SymbolKind::separable_sgn; }
  std::string formula() const;

  // Value at (u, v) after the argument substitution.
  std::complex<double> operator()(double u, double v) const;
  // Real part only; faster path for real symbols.
  double real_value(double u, double v) const;

  // Batch evaluation along a line: out[i] = real_value(u, v[i]).  Uses the
  // active kernel table for the c1 kinds.
  void real_row(double u, std::span<const double> v, std::span<double> out) const;

  SymbolDescriptor with_arguments(const ArgumentMap& outer) const;

  bool operator==(const SymbolDescriptor&) const = default;

 private:
  SymbolDescriptor(SymbolKind k) : kind_(k) {}
  double base_real(double u, double v) const;

  SymbolKind kind_;
  double a_ = 1.0;
  double b_ = 1.0;
  double c_ = 1.0;
  int axis_ = 1;
  ArgumentMap map_{};
};

// Evaluation point. For the circular kind the arguments are (xi1, xi2);
// for the other kinds they are (xi, xi1).
struct FrequencyPoint {
  double xi = 0.0;
  double xi1 = 0.0;
  std::optional<double> xi2;
};

// Midpoint rule with M nodes for the defining alpha (and beta) integrals.
double quadrature_oracle(const SymbolDescriptor& m, const FrequencyPoint& p, std::int64_t nodes);
double quadrature_oracle(const SymbolDescriptor& m, double u, double v, std::int64_t nodes);

std::complex<double> evaluate(const SymbolDescriptor& m, const FrequencyPoint& p);

}  // namespace calderlab
