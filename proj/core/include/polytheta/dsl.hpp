#pragma once

// Text syntax for theta expressions and polygonal sums.
//
//   expression := term ('+' term)*  |  '0'
//   term       := [int '*'] ['q' ['^' int] '*'] factor ('*' factor)*
//   factor     := atom ['^' int]
//   atom       := 'f(' arg ',' arg ')' | name '(' arg ')'     name: phi psi X Y
//   arg        := '1' | 'q' ['^' int]
//
//   sum        := pterm ('+' pterm)*
//   pterm      := [int ['*']] 'p' ['_'] int
//               | [int ['*']] 'x(' int 'x' ('+'|'-') int ')/2'
//
// Whitespace is ignored between tokens. All parse functions are pure.

#include <cstddef>
#include <string>
#include <string_view>

#include "polytheta/error.hpp"
#include "polytheta/polygonal.hpp"
#include "polytheta/theta.hpp"

namespace polytheta {

/// 1-based line and columns; col_end is the last column of the token.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t col_start = 1;
  std::size_t col_end = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message);

  const SourceSpan& span() const noexcept { return span_; }
  /// Message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

/// Where the first character of the text sits in its enclosing file, so
/// diagnostics from catalog lines point at the right column.
struct TextOrigin {
  std::size_t line = 1;
  std::size_t column = 1;
};

ThetaExpression parse_theta_expression(std::string_view text, TextOrigin origin = {});
/// A single product term; '+' is a syntax error.
ProductTerm parse_product_term(std::string_view text, TextOrigin origin = {});
PolygonalSum parse_polygonal_sum(std::string_view text, TextOrigin origin = {});

/// Exact, order-preserving text forms; parse(serialize(v)) == v. Named atoms
/// are used where the atom matches phi, psi, X or Y, consecutive equal atoms
/// are grouped with '^', and multiplier 1 and shift 0 are omitted.
std::string serialize(const ThetaAtom& a);
std::string serialize(const ProductTerm& t);
std::string serialize(const ThetaExpression& e);
/// "c*pm" when the term is exactly c*p_m, otherwise "c*x(Ax+B)/2".
std::string serialize(const QuadTerm& t);
std::string serialize(const PolygonalSum& s);

}  // namespace polytheta
