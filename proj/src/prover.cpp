#include "ctt/prover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ctt/error.hpp"

namespace ctt {

// ---------------------------------------------------------------------------
// Sequents

namespace {

void add_unique(std::vector<Cts>& v, const Cts& c) {
  if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
}

bool same_set(const std::vector<Cts>& a, const std::vector<Cts>& b) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  for (const auto& x : b)
    if (std::find(a.begin(), a.end(), x) == a.end()) return false;
  return true;
}

bool contains(const std::vector<Cts>& v, const Cts& c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

std::vector<Cts> without(const std::vector<Cts>& v, const Cts& c) {
  std::vector<Cts> out;
  for (const auto& x : v)
    if (x != c) out.push_back(x);
  return out;
}

std::vector<Cts> with(std::vector<Cts> v, std::initializer_list<Cts> more) {
  for (const auto& c : more) add_unique(v, c);
  return v;
}

// Splits at top-level occurrences of `sep` (outside (), [] and {}).
std::vector<std::string> split_top(std::string_view text, std::string_view sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (depth == 0 && text.compare(i, sep.size(), sep) == 0) {
      out.emplace_back(text.substr(start, i - start));
      start = i + sep.size();
      i = start - 1;
    }
  }
  out.emplace_back(text.substr(start));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Cts> parse_members(const std::string& text, CtsContext& ctx) {
  std::vector<Cts> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split_top(text, ",")) {
    std::string m = trim(part);
    if (m.empty()) throw Error(ErrorKind::Syntax, "empty sequent member");
    out.push_back(parse_cts(m, ctx));
  }
  return out;
}

}  // namespace

Sequent Sequent::make(std::vector<Cts> ante, std::vector<Cts> succ) {
  Sequent s;
  for (const auto* side : {&ante, &succ})
    for (const auto& c : *side)
      if (!c.type().is_bot())
        throw Error(ErrorKind::Type, "sequent member " + render(c) + " has type " +
                                         to_string(c.type()) + ", not bot");
  for (const auto& c : ante) add_unique(s.ante, c);
  for (const auto& c : succ) add_unique(s.succ, c);
  return s;
}

bool Sequent::same_as(const Sequent& o) const {
  return same_set(ante, o.ante) && same_set(succ, o.succ);
}

Sequent parse_sequent(std::string_view text, CtsContext& ctx) {
  auto sides = split_top(text, "=>");
  if (sides.size() != 2) throw Error(ErrorKind::Syntax, "a sequent needs exactly one '=>'");
  auto ante = parse_members(sides[0], ctx);
  auto succ = parse_members(sides[1], ctx);
  return Sequent::make(std::move(ante), std::move(succ));
}

Sequent parse_sequent(std::string_view text) {
  CtsContext ctx;
  return parse_sequent(text, ctx);
}

std::string render(const Sequent& s) {
  auto side = [](const std::vector<Cts>& v) {
    std::string out;
    for (const auto& c : v) {
      if (!out.empty()) out += ", ";
      out += render(c);
    }
    return out;
  };
  std::string a = side(s.ante), b = side(s.succ);
  return a + (a.empty() ? "=>" : " =>") + (b.empty() ? "" : " " + b);
}

// ---------------------------------------------------------------------------
// Rule ids and positions

namespace {

const char* op_name(CtsOp op) {
  switch (op) {
    case CtsOp::Neg: return "neg";
    case CtsOp::And: return "and";
    case CtsOp::Or: return "or";
    case CtsOp::All: return "all";
    case CtsOp::Ex: return "ex";
  }
  return "?";
}

std::optional<CtsOp> op_of(const Cts& c) {
  switch (c.kind()) {
    case Cts::Kind::Neg: return CtsOp::Neg;
    case Cts::Kind::Conj: return CtsOp::And;
    case Cts::Kind::Disj: return CtsOp::Or;
    case Cts::Kind::BigConj: return CtsOp::All;
    case Cts::Kind::BigDisj: return CtsOp::Ex;
    default: return std::nullopt;
  }
}

}  // namespace

std::string to_string(const CtsRuleId& r) {
  if (r.form == RuleForm::Ax) return "Ax";
  std::string s = std::string(op_name(r.op)) + (r.side == Side::Left ? "L" : "R");
  if (r.form == RuleForm::SubstR) s += "r";
  if (r.form == RuleForm::SubstL) s += "l";
  return s;
}

std::vector<CtsRuleId> all_cts_rules() {
  std::vector<CtsRuleId> out{CtsRuleId{}};
  for (auto form : {RuleForm::Intro, RuleForm::SubstR, RuleForm::SubstL})
    for (auto op : {CtsOp::Neg, CtsOp::And, CtsOp::Or, CtsOp::All, CtsOp::Ex})
      for (auto side : {Side::Left, Side::Right}) out.push_back({form, op, side});
  return out;
}

CtsRuleId parse_rule_id(const std::string& s) {
  for (const auto& r : all_cts_rules())
    if (to_string(r) == s) return r;
  throw Error(ErrorKind::Syntax, "unknown CTS rule '" + s + "'");
}

const char* to_string(Direction d) { return d == Direction::Down ? "down" : "up"; }

std::string to_string(const Position& p) {
  if (p.member < 0) return "-";
  std::string out = std::to_string(p.member);
  for (int i : p.path) out += "." + std::to_string(i);
  return out;
}

Position parse_position(const std::string& s) {
  Position p;
  if (s == "-" || s.empty()) return p;
  std::size_t start = 0;
  bool first = true;
  while (start <= s.size()) {
    std::size_t dot = s.find('.', start);
    std::string part = s.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::Syntax, "bad position '" + s + "'");
    int v = std::stoi(part);
    if (first) p.member = v;
    else p.path.push_back(v);
    first = false;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Substitution rules

namespace {

bool free_in(const std::string& name, const Cts& t) {
  for (const auto& v : free_vars(t))
    if (v.name == name) return true;
  return false;
}

Distribution fail(std::string msg) { return {std::nullopt, std::move(msg)}; }

}  // namespace

Distribution distribute(const Cts& u, const CtsRuleId& rule) {
  std::string name = to_string(rule);
  if (!rule.double_line()) return fail(name + " is not a substitution rule");
  if (!u.is_app()) return fail(name + " needs an application at the position");
  bool right = rule.form == RuleForm::SubstR;
  const Cts& x = right ? u.arg() : u.fun();
  const Cts& other = right ? u.fun() : u.arg();
  if (op_of(x) != rule.op)
    return fail(name + " needs a " + op_name(rule.op) + " node in " +
                (right ? "argument" : "functor") + " position");
  int h = other.rank();
  int k = x.op_rank();
  if (right && h + 1 > k)
    return fail(name + " requires h+1 <= k, got h=" + std::to_string(h) + ", k=" +
                std::to_string(k));
  if (!right && h > k)
    return fail(name + " requires h <= k, got h=" + std::to_string(h) + ", k=" +
                std::to_string(k));
  auto ap = [&](const Cts& part) { return right ? Cts::app(other, part) : Cts::app(part, other); };
  try {
    switch (rule.op) {
      case CtsOp::Neg: return {Cts::neg(k, ap(x.child(0))), ""};
      case CtsOp::And: return {Cts::conj(k, ap(x.child(0)), ap(x.child(1))), ""};
      case CtsOp::Or: return {Cts::disj(k, ap(x.child(0)), ap(x.child(1))), ""};
      case CtsOp::All:
      case CtsOp::Ex:
        if (free_in(x.name(), other))
          return fail(name + " requires the index " + x.name() + " not free in the " +
                      (right ? "functor" : "argument"));
        return {Cts::big_family(x.kind(), k, x.name(), x.index_type(), x.atom_rank(),
                                ap(x.body())),
                ""};
    }
  } catch (const Error& e) {
    return fail(name + ": " + e.what());
  }
  return fail(name + ": unknown operator");
}

namespace {

const std::vector<Cts>& side_of(const Sequent& s, Side side) {
  return side == Side::Left ? s.ante : s.succ;
}

Sequent replace_member(const Sequent& s, Side side, std::size_t i, const Cts& by) {
  std::vector<Cts> a = s.ante, b = s.succ;
  (side == Side::Left ? a : b).at(i) = by;
  return Sequent::make(std::move(a), std::move(b));
}

bool valid_path(const Cts& t, const std::vector<int>& path) {
  const Cts* cur = &t;
  for (int i : path) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->children().size()) return false;
    cur = &cur->child(static_cast<std::size_t>(i));
  }
  return true;
}

void all_paths(const Cts& t, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    cur.push_back(static_cast<int>(i));
    all_paths(t.child(i), cur, out);
    cur.pop_back();
  }
}

RuleCheck bad(std::string msg) { return {false, std::move(msg)}; }

RuleCheck check_subst_at(const Sequent& concl, const Sequent& prem, const CtsRuleId& rule,
                         Direction dir, std::size_t member, const std::vector<int>& path) {
  std::string name = to_string(rule);
  const auto& cs = side_of(concl, rule.side);
  if (member >= cs.size())
    return bad(name + ": position member " + std::to_string(member) + " out of range");
  const Cts& c = cs[member];
  if (!valid_path(c, path)) return bad(name + ": no subterm at the position");
  if (dir == Direction::Down) {
    Distribution d = distribute(subterm_at(c, path), rule);
    if (!d.result) return bad(d.violation);
    Sequent expect = replace_member(concl, rule.side, member, replace_at(c, path, *d.result));
    if (!prem.same_as(expect))
      return bad(name + ": premise is not the conclusion with the redex distributed");
    return {};
  }
  const Cts& target = subterm_at(c, path);
  std::string violation = name + " (up): no premise member distributes to the conclusion";
  const auto& ps = side_of(prem, rule.side);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!valid_path(ps[i], path)) continue;
    const Cts& u = subterm_at(ps[i], path);
    if (!u.is_app() || u.type() != target.type()) continue;
    // Other members may not accept the target at this path.
    std::optional<Cts> filled;
    try {
      filled = replace_at(ps[i], path, target);
    } catch (const Error&) {
      continue;
    }
    Distribution d = distribute(u, rule);
    if (!d.result) {
      if (*filled == c) violation = d.violation;
      continue;
    }
    if (*d.result != target) continue;
    if (replace_member(prem, rule.side, i, *filled).same_as(concl)) return {};
  }
  return bad(violation);
}

// Matches `m` against `pat` with the free index `x` as a hole; `t` receives
// the common filling.
bool match_instance(const Cts& pat, const std::string& x, const Cts& m, std::optional<Cts>& t) {
  if (pat.is_var() && pat.name() == x) {
    if (m.type() != pat.type()) return false;
    if (t) return *t == m;
    t = m;
    return true;
  }
  if (pat.kind() != m.kind() || pat.type() != m.type() || pat.op_rank() != m.op_rank())
    return false;
  if (pat.is_var()) return pat == m;
  if (pat.is_big()) {
    if (pat.name() != m.name() || pat.index_type() != m.index_type() ||
        pat.atom_rank() != m.atom_rank())
      return false;
    if (pat.name() == x) return pat == m;
  }
  if (pat.children().size() != m.children().size()) return false;
  for (std::size_t i = 0; i < pat.children().size(); ++i)
    if (!match_instance(pat.child(i), x, m.child(i), t)) return false;
  return true;
}

std::set<std::string> sequent_names(const Sequent& s) {
  std::set<std::string> out;
  for (const auto* side : {&s.ante, &s.succ})
    for (const auto& c : *side)
      for (const auto& v : free_vars(c)) out.insert(v.name);
  return out;
}

RuleCheck check_intro(const Sequent& concl, const std::vector<Sequent>& prems,
                      const CtsRuleId& rule, const Cts& p) {
  std::string name = to_string(rule);
  bool left = rule.side == Side::Left;
  const auto& gc = concl.ante;
  const auto& dc = concl.succ;
  std::size_t want = 1;
  if ((rule.op == CtsOp::And && !left) || (rule.op == CtsOp::Or && left)) want = 2;
  if (prems.size() != want)
    return bad(name + " needs " + std::to_string(want) + " premise(s), got " +
               std::to_string(prems.size()));
  // The principal member may or may not be kept in the premises.
  std::vector<std::vector<Cts>> rests;
  const auto& principal_side = left ? gc : dc;
  rests.push_back(without(principal_side, p));
  rests.push_back(principal_side);

  auto matches = [&](const std::vector<Sequent>& expect) {
    for (std::size_t i = 0; i < expect.size(); ++i)
      if (!prems[i].same_as(expect[i])) return false;
    return true;
  };
  auto mk = [](std::vector<Cts> a, std::vector<Cts> b) {
    return Sequent::make(std::move(a), std::move(b));
  };

  if (rule.op == CtsOp::Neg || rule.op == CtsOp::And || rule.op == CtsOp::Or) {
    const Cts& a = p.child(0);
    for (const auto& rest : rests) {
      std::vector<Sequent> expect;
      if (rule.op == CtsOp::Neg) {
        expect.push_back(left ? mk(rest, with(dc, {a})) : mk(with(gc, {a}), rest));
      } else {
        const Cts& b = p.child(1);
        bool split = want == 2;
        if (left && !split) expect.push_back(mk(with(rest, {a, b}), dc));
        if (left && split) {
          expect.push_back(mk(with(rest, {a}), dc));
          expect.push_back(mk(with(rest, {b}), dc));
        }
        if (!left && split) {
          expect.push_back(mk(gc, with(rest, {a})));
          expect.push_back(mk(gc, with(rest, {b})));
        }
        if (!left && !split) expect.push_back(mk(gc, with(rest, {a, b})));
      }
      if (matches(expect)) return {};
    }
    return bad(name + ": premises do not match the rule for " + render(p));
  }

  // Big operators: a witness subterm (all-left, ex-right) or a fresh
  // eigenvariable (all-right, ex-left).
  bool eigen = (rule.op == CtsOp::All) != left;
  const Sequent& prem = prems[0];
  const auto& grown = left ? prem.ante : prem.succ;
  std::string violation = name + ": no premise member is an instance of " + render(p);
  for (const auto& m : grown) {
    std::optional<Cts> t;
    if (!match_instance(p.body(), p.name(), m, t)) continue;
    if (t && t->rank() > p.atom_rank()) {
      violation = name + " requires the instance rank <= " + std::to_string(p.atom_rank()) +
                  ", got " + std::to_string(t->rank());
      continue;
    }
    if (eigen && t) {
      if (!t->is_var()) {
        violation = name + " requires a variable instance, got " + render(*t);
        continue;
      }
      if (sequent_names(concl).count(t->name())) {
        violation = name + " requires the eigenvariable " + t->name() +
                    " not free in the conclusion";
        continue;
      }
    }
    for (const auto& rest : rests) {
      Sequent expect = left ? mk(with(rest, {m}), dc) : mk(gc, with(rest, {m}));
      if (prem.same_as(expect)) return {};
    }
  }
  return bad(violation);
}

}  // namespace

RuleCheck check_rule_instance(const Sequent& concl, const std::vector<Sequent>& prems,
                              const CtsRuleId& rule, Direction dir, const Position& pos) {
  std::string name = to_string(rule);
  if (rule.form == RuleForm::Ax) {
    if (!prems.empty()) return bad("Ax has no premises");
    if (pos.member >= 0) {
      if (static_cast<std::size_t>(pos.member) >= concl.ante.size())
        return bad("Ax: position member out of range");
      if (contains(concl.succ, concl.ante[static_cast<std::size_t>(pos.member)])) return {};
      return bad("Ax requires the same term on both sides");
    }
    for (const auto& a : concl.ante)
      if (contains(concl.succ, a)) return {};
    return bad("Ax requires the same term on both sides");
  }
  if (rule.form == RuleForm::Intro) {
    const auto& members = side_of(concl, rule.side);
    std::string violation = name + ": no " + op_name(rule.op) + " member on the " +
                            (rule.side == Side::Left ? "left" : "right");
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (pos.member >= 0 && static_cast<std::size_t>(pos.member) != i) continue;
      if (op_of(members[i]) != rule.op) continue;
      RuleCheck r = check_intro(concl, prems, rule, members[i]);
      if (r.ok) return r;
      violation = r.violation;
    }
    return bad(violation);
  }
  if (prems.size() != 1) return bad(name + " needs exactly one premise");
  if (!same_set(rule.side == Side::Left ? concl.succ : concl.ante,
                rule.side == Side::Left ? prems[0].succ : prems[0].ante))
    return bad(name + ": the other side of the sequent must not change");
  if (pos.member >= 0)
    return check_subst_at(concl, prems[0], rule, dir, static_cast<std::size_t>(pos.member),
                          pos.path);
  const auto& members = side_of(concl, rule.side);
  std::string violation = name + ": no redex found";
  for (std::size_t i = 0; i < members.size(); ++i) {
    std::vector<std::vector<int>> paths;
    std::vector<int> cur;
    all_paths(members[i], cur, paths);
    for (const auto& p : paths) {
      RuleCheck r = check_subst_at(concl, prems[0], rule, dir, i, p);
      if (r.ok) return r;
      if (r.violation.find("requires") != std::string::npos) violation = r.violation;
    }
  }
  return bad(violation);
}

// ---------------------------------------------------------------------------
// Derivations

namespace {

DerivationCheck check_node(const Derivation& d, std::vector<int>& path) {
  std::vector<Sequent> prems;
  for (const auto& p : d.premises) prems.push_back(p.conclusion);
  RuleCheck r = check_rule_instance(d.conclusion, prems, d.rule, d.dir, d.pos);
  if (!r.ok) return {false, d.id, path, r.violation};
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    DerivationCheck c = check_node(d.premises[i], path);
    if (!c.ok) return c;
    path.pop_back();
  }
  return {};
}

}  // namespace

DerivationCheck check_derivation(const Derivation& d) {
  std::vector<int> path;
  return check_node(d, path);
}

int height(const Derivation& d) {
  int h = 0;
  for (const auto& p : d.premises) h = std::max(h, height(p));
  return h + 1;
}

int size(const Derivation& d) {
  int n = 1;
  for (const auto& p : d.premises) n += size(p);
  return n;
}

Derivation parse_derivation(std::string_view text) {
  CtsContext ctx;
  std::map<std::string, Derivation> nodes;
  std::optional<std::string> last;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail_at = [&](const std::string& msg) {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    if (l.rfind("decl ", 0) == 0) {
      parse_cts(trim(l.substr(5)), ctx);
      continue;
    }
    if (l.rfind("node ", 0) != 0) fail_at("expected 'node' or 'decl'");
    std::size_t concl_at = l.find(" concl=");
    std::size_t prem_at = l.rfind(" premises=");
    if (concl_at == std::string::npos || prem_at == std::string::npos || prem_at < concl_at)
      fail_at("node needs concl= and premises=");
    std::istringstream head(l.substr(5, concl_at - 5));
    Derivation d;
    head >> d.id;
    if (d.id.empty()) fail_at("node needs an id");
    if (nodes.count(d.id)) fail_at("duplicate node id " + d.id);
    bool have_rule = false;
    std::string field;
    while (head >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) fail_at("bad field '" + field + "'");
      std::string key = field.substr(0, eq), val = field.substr(eq + 1);
      try {
        if (key == "rule") {
          d.rule = parse_rule_id(val);
          have_rule = true;
        } else if (key == "dir") {
          if (val != "down" && val != "up") fail_at("dir must be down or up");
          d.dir = val == "down" ? Direction::Down : Direction::Up;
        } else if (key == "pos") {
          d.pos = parse_position(val);
        } else {
          fail_at("unknown field '" + key + "'");
        }
      } catch (const Error& e) {
        if (std::string(e.what()).rfind("line ", 0) == 0) throw;
        fail_at(e.what());
      }
    }
    if (!have_rule) fail_at("node needs rule=");
    try {
      d.conclusion = parse_sequent(l.substr(concl_at + 7, prem_at - concl_at - 7), ctx);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(lineno) + ": " + e.what());
    }
    std::string prem_list = trim(l.substr(prem_at + 10));
    if (prem_list != "-" && !prem_list.empty()) {
      for (const auto& id : split_top(prem_list, ",")) {
        auto it = nodes.find(trim(id));
        if (it == nodes.end()) fail_at("premise " + trim(id) + " is not defined above");
        d.premises.push_back(it->second);
      }
    }
    last = d.id;
    nodes.emplace(d.id, std::move(d));
  }
  if (!last) throw Error(ErrorKind::Syntax, "derivation has no nodes");
  return nodes.at(*last);
}

namespace {

void emit(const Derivation& d, int& counter, std::ostringstream& os, std::string& id_out) {
  std::vector<std::string> ids;
  for (const auto& p : d.premises) {
    std::string id;
    emit(p, counter, os, id);
    ids.push_back(id);
  }
  id_out = "n" + std::to_string(++counter);
  os << "node " << id_out << " rule=" << to_string(d.rule) << " dir=" << to_string(d.dir)
     << " pos=" << to_string(d.pos) << " concl=" << render(d.conclusion) << " premises=";
  if (ids.empty()) os << "-";
  for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? "," : "") << ids[i];
  os << "\n";
}

}  // namespace

std::string render(const Derivation& d) {
  std::ostringstream os;
  int counter = 0;
  std::string root;
  emit(d, counter, os, root);
  return os.str();
}

// ---------------------------------------------------------------------------
// Proof search

namespace {

struct Redex {
  std::vector<int> path;
  CtsRuleId rule;
};

// Innermost application whose functor or argument operator can move out.
std::optional<Redex> find_redex(const Cts& t, std::vector<int>& path, Side side) {
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    path.push_back(static_cast<int>(i));
    if (auto r = find_redex(t.child(i), path, side)) return r;
    path.pop_back();
  }
  if (!t.is_app()) return std::nullopt;
  const Cts& f = t.fun();
  const Cts& a = t.arg();
  if (f.is_boolean() && a.rank() <= f.op_rank())
    return Redex{path, {RuleForm::SubstL, *op_of(f), side}};
  if (a.is_boolean() && f.rank() + 1 <= a.op_rank())
    return Redex{path, {RuleForm::SubstR, *op_of(a), side}};
  return std::nullopt;
}

class Prover {
 public:
  std::optional<Derivation> search(const Sequent& s, int depth) {
    if (depth <= 0) return std::nullopt;
    // Substitution phase.
    for (Side side : {Side::Left, Side::Right}) {
      const auto& members = side_of(s, side);
      for (std::size_t i = 0; i < members.size(); ++i) {
        std::vector<int> path;
        auto r = find_redex(members[i], path, side);
        if (!r) continue;
        Distribution d = distribute(subterm_at(members[i], r->path), r->rule);
        if (!d.result) continue;
        Sequent prem = replace_member(s, side, i, replace_at(members[i], r->path, *d.result));
        auto sub = search(prem, depth - 1);
        if (!sub) return std::nullopt;
        return node(r->rule, Position{static_cast<int>(i), r->path}, s, {std::move(*sub)});
      }
    }
    for (std::size_t i = 0; i < s.ante.size(); ++i)
      if (contains(s.succ, s.ante[i])) return node({}, Position{static_cast<int>(i), {}}, s, {});
    // Invertible introduction rules.
    for (Side side : {Side::Left, Side::Right}) {
      const auto& members = side_of(s, side);
      for (std::size_t i = 0; i < members.size(); ++i) {
        auto op = op_of(members[i]);
        if (!op) continue;
        bool eigen = (*op == CtsOp::All) == (side == Side::Right);
        if ((*op == CtsOp::All || *op == CtsOp::Ex) && !eigen) continue;
        return intro(s, side, i, *op, depth);
      }
    }
    // Witness rules, keeping the principal member.
    for (Side side : {Side::Left, Side::Right}) {
      const auto& members = side_of(s, side);
      for (std::size_t i = 0; i < members.size(); ++i) {
        auto op = op_of(members[i]);
        if (op != CtsOp::All && op != CtsOp::Ex) continue;
        const Cts& p = members[i];
        for (const auto& w : witnesses(s, p)) {
          Cts inst = substitute_var(p.body(), p.name(), w);
          const auto& grown = side_of(s, side);
          if (contains(grown, inst)) continue;
          Sequent prem = side == Side::Left ? Sequent::make(with(s.ante, {inst}), s.succ)
                                            : Sequent::make(s.ante, with(s.succ, {inst}));
          if (auto sub = search(prem, depth - 1))
            return node({RuleForm::Intro, *op, side}, Position{static_cast<int>(i), {}}, s,
                        {std::move(*sub)});
        }
      }
    }
    return std::nullopt;
  }

 private:
  static Derivation node(CtsRuleId rule, Position pos, const Sequent& s,
                         std::vector<Derivation> prems) {
    Derivation d;
    d.rule = rule;
    d.dir = Direction::Down;
    d.pos = std::move(pos);
    d.conclusion = s;
    d.premises = std::move(prems);
    return d;
  }

  std::vector<Cts> witnesses(const Sequent& s, const Cts& p) {
    std::vector<Cts> out;
    for (const auto* side : {&s.ante, &s.succ})
      for (const auto& c : *side)
        for (const auto& v : free_vars(c))
          if (v.type == p.index_type() && v.rank <= p.atom_rank()) {
            Cts w = Cts::var(v.name, v.type, v.rank);
            if (!contains(out, w)) out.push_back(w);
          }
    if (out.empty()) out.push_back(Cts::var(fresh(s, p.name()), p.index_type(), p.atom_rank()));
    return out;
  }

  static std::string fresh(const Sequent& s, const std::string& base) {
    auto names = sequent_names(s);
    std::string n = base;
    while (names.count(n)) n += "'";
    return n;
  }

  std::optional<Derivation> intro(const Sequent& s, Side side, std::size_t i, CtsOp op,
                                  int depth) {
    bool left = side == Side::Left;
    const Cts& p = side_of(s, side)[i];
    std::vector<Cts> gc = left ? without(s.ante, p) : s.ante;
    std::vector<Cts> dc = left ? s.succ : without(s.succ, p);
    std::vector<Sequent> prems;
    switch (op) {
      case CtsOp::Neg:
        prems.push_back(left ? Sequent::make(gc, with(dc, {p.child(0)}))
                             : Sequent::make(with(gc, {p.child(0)}), dc));
        break;
      case CtsOp::And:
        if (left) {
          prems.push_back(Sequent::make(with(gc, {p.child(0), p.child(1)}), dc));
        } else {
          prems.push_back(Sequent::make(gc, with(dc, {p.child(0)})));
          prems.push_back(Sequent::make(gc, with(dc, {p.child(1)})));
        }
        break;
      case CtsOp::Or:
        if (left) {
          prems.push_back(Sequent::make(with(gc, {p.child(0)}), dc));
          prems.push_back(Sequent::make(with(gc, {p.child(1)}), dc));
        } else {
          prems.push_back(Sequent::make(gc, with(dc, {p.child(0), p.child(1)})));
        }
        break;
      case CtsOp::All:
      case CtsOp::Ex: {
        Cts y = Cts::var(fresh(s, p.name()), p.index_type(), p.atom_rank());
        Cts inst = substitute_var(p.body(), p.name(), y);
        prems.push_back(left ? Sequent::make(with(gc, {inst}), dc)
                             : Sequent::make(gc, with(dc, {inst})));
        break;
      }
    }
    std::vector<Derivation> subs;
    for (const auto& pr : prems) {
      auto sub = search(pr, depth - 1);
      if (!sub) return std::nullopt;
      subs.push_back(std::move(*sub));
    }
    return node({RuleForm::Intro, op, side}, Position{static_cast<int>(i), {}}, s,
                std::move(subs));
  }
};

}  // namespace

std::optional<Derivation> prove(const Sequent& goal, int depth) {
  if (depth < 1) throw Error(ErrorKind::Syntax, "search depth must be at least 1");
  Prover p;
  return p.search(goal, depth);
}

std::vector<ModelConfig> standard_family() {
  std::vector<ModelConfig> out;
  for (int n = 1; n <= 3; ++n) {
    ModelConfig m;
    m.base_sizes = {{"e", n}};
    out.push_back(m);
  }
  return out;
}

}  // namespace ctt
