#include "ctt/type.hpp"

#include "ctt/error.hpp"

namespace ctt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::Type: return "type";
    case ErrorKind::Unbound: return "unbound";
    case ErrorKind::NonFunctorOccurrence: return "non-functor-occurrence";
    case ErrorKind::RankOverflow: return "rank-overflow";
    case ErrorKind::Unassigned: return "unassigned";
    case ErrorKind::Cap: return "cap";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Model: return "model";
  }
  return "?";
}

Type Type::base(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Base;
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::arrow(Type dom, Type cod) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->dom = std::move(dom.node_);
  n->cod = std::move(cod.node_);
  return Type(std::move(n));
}

Type Type::bot() {
  static const Type b = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bot;
    return Type(std::move(n));
  }();
  return b;
}

namespace {

int compare(const Type::Node* a, const Type::Node* b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case Type::Kind::Bot: return 0;
    case Type::Kind::Base: return a->name.compare(b->name);
    case Type::Kind::Arrow: {
      int c = compare(a->dom.get(), b->dom.get());
      return c != 0 ? c : compare(a->cod.get(), b->cod.get());
    }
  }
  return 0;
}

}  // namespace

bool operator==(const Type& a, const Type& b) {
  return compare(a.node_.get(), b.node_.get()) == 0;
}

bool operator<(const Type& a, const Type& b) {
  return compare(a.node_.get(), b.node_.get()) < 0;
}

std::string to_string(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Bot: return "bot";
    case Type::Kind::Base: return t.name();
    case Type::Kind::Arrow:
      if (t.is_negation()) return "~" + to_string(t.dom());
      return "(" + to_string(t.dom()) + " -> " + to_string(t.cod()) + ")";
  }
  return "?";
}

}  // namespace ctt
