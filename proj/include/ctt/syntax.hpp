#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ctt/cts.hpp"
#include "ctt/slm.hpp"
#include "ctt/type.hpp"

namespace ctt {

/// Declared CTS variables: name -> (type, rank).
struct CtsDecl {
  Type type;
  int rank;
};
using CtsContext = std::map<std::string, CtsDecl>;

/// Context key whose declaration is given to undeclared bare variables.
inline constexpr const char* kDefaultDecl = "*";

Type parse_type(std::string_view text);

/// Parses a lambda-mu term. Free variables take their type from an inline
/// `x:TY` annotation, from `ctx`, from a leading `{x:TY, ...}` header, or from
/// a leading `TY:` default; anything else is unbound.
Term parse_slm(std::string_view text, const TypeContext& ctx = {});

/// Parses a CTS subterm. Variables are declared `x:TY@k` on first use and may
/// appear bare afterwards; `ctx` supplies outside declarations and receives
/// the new ones.
Cts parse_cts(std::string_view text, CtsContext& ctx);
Cts parse_cts(std::string_view text);

struct RenderOptions {
  /// Print commutative children sorted by their rendering.
  bool sort_children = false;
  /// Annotate the first occurrence of each free CTS variable with `:TY@k`.
  bool annotate_vars = true;
};

std::string render(const Type& t);
std::string render(const Term& t);
std::string render(const Cts& t, const RenderOptions& opts = {});

/// Joins two rendered operands the way every printer in the toolkit does:
/// `", "` when either side is an operator node, `","` otherwise.
std::string operand_separator(bool left_is_op, bool right_is_op);

}  // namespace ctt
