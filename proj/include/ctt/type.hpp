#pragma once

#include <memory>
#include <string>

namespace ctt {

/// Simple types: base names, arrows and the absurdity type `bot`.
/// `~s` is sugar for `(s -> bot)` and is expanded on construction.
class Type {
 public:
  enum class Kind { Base, Arrow, Bot };
  struct Node {
    Kind kind = Kind::Bot;
    std::string name;
    std::shared_ptr<const Node> dom;
    std::shared_ptr<const Node> cod;
  };

  static Type base(std::string name);
  static Type arrow(Type dom, Type cod);
  static Type bot();
  static Type neg(Type t) { return arrow(std::move(t), bot()); }

  Kind kind() const { return node_->kind; }
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_bot() const { return kind() == Kind::Bot; }
  /// True for `s -> bot`.
  bool is_negation() const { return is_arrow() && cod().is_bot(); }

  const std::string& name() const { return node_->name; }
  Type dom() const { return Type(node_->dom); }
  Type cod() const { return Type(node_->cod); }

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b);

 private:
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Type& t);

}  // namespace ctt
