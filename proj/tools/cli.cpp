#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "ctt/domain.hpp"
#include "ctt/error.hpp"
#include "ctt/model_io.hpp"
#include "ctt/prover.hpp"
#include "ctt/rewrite.hpp"
#include "ctt/semantics.hpp"
#include "ctt/syntax.hpp"
#include "ctt/ucts.hpp"

namespace ctt::cli {

namespace {

struct Outcome {
  std::string status = "ok";
  std::string payload;
  std::vector<std::string> diagnostics;
  int code = kOk;
};

Outcome negative(std::string payload, std::vector<std::string> diags = {}) {
  return {"fail", std::move(payload), std::move(diags), kNegative};
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Cap:
    case ErrorKind::RankOverflow: return kCap;
    case ErrorKind::NonFunctorOccurrence: return kNegative;
    default: return kUsage;
  }
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') out += "\\n";
    else if (c == '\t') out += "\\t";
    else if (c == '\\') out += "\\\\";
    else out += c;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Syntax, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline text, or the contents of a file for `@path`.
std::string input(const std::string& arg) {
  std::string s = arg.size() > 1 && arg[0] == '@' ? read_file(arg.substr(1)) : arg;
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

struct ModelOpts {
  std::string model_path;
  std::vector<std::string> bases;
  int rank_cap = -1;

  void add(CLI::App* app) {
    app->add_option("--model", model_path, "model file (base/rankcap/const lines)");
    app->add_option("--base", bases, "base type size, e.g. e=3 (repeatable)");
    app->add_option("--rankcap", rank_cap, "rank cap override");
  }
  bool given() const { return !model_path.empty() || !bases.empty(); }

  ModelConfig build(const std::map<std::string, int>& fallback = {}) const {
    ModelConfig m;
    if (!model_path.empty()) m = load_model(input_path());
    else m.base_sizes = fallback;
    for (const auto& b : bases) {
      auto eq = b.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorKind::Syntax, "--base expects NAME=SIZE, got '" + b + "'");
      int n = 0;
      try {
        std::size_t used = 0;
        n = std::stoi(b.substr(eq + 1), &used);
        if (used != b.size() - eq - 1) throw std::invalid_argument(b);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Syntax, "--base expects NAME=SIZE, got '" + b + "'");
      }
      m.base_sizes[b.substr(0, eq)] = n;
    }
    if (rank_cap >= 0) m.rank_cap = rank_cap;
    m.validate();
    return m;
  }

  std::string input_path() const {
    return model_path.size() > 1 && model_path[0] == '@' ? model_path.substr(1) : model_path;
  }
};

void collect_bases(const Type& t, std::map<std::string, int>& out, int size) {
  if (t.is_base()) out.emplace(t.name(), size);
  if (t.is_arrow()) {
    collect_bases(t.dom(), out, size);
    collect_bases(t.cod(), out, size);
  }
}

void collect_bases(const Cts& c, std::map<std::string, int>& out, int size) {
  collect_bases(c.type(), out, size);
  if (c.is_var()) return;
  if (c.is_big()) collect_bases(c.index_type(), out, size);
  for (const auto& k : c.children()) collect_bases(k, out, size);
}

CtsContext context_from(const ModelConfig& m) {
  CtsContext ctx;
  for (const auto& [name, v] : m.constants) ctx.insert_or_assign(name, CtsDecl{v.type(), 0});
  return ctx;
}

TypeContext types_from(const ModelConfig& m) {
  TypeContext ctx;
  for (const auto& [name, v] : m.constants) ctx.insert_or_assign(name, v.type());
  return ctx;
}

/// Sequent text with `|-` accepted for `=>`.
std::string sequent_text(std::string s) {
  for (auto p = s.find("|-"); p != std::string::npos; p = s.find("|-", p)) s.replace(p, 2, "=>");
  return s;
}

Sequent parse_goal(const std::string& text, CtsContext ctx) {
  ctx.emplace(kDefaultDecl, CtsDecl{Type::bot(), 0});
  return parse_sequent(sequent_text(text), ctx);
}

enum class Lang { Auto, Slm, Cts, Ucts, Sequent };

Lang parse_lang(const std::string& s) {
  if (s == "auto") return Lang::Auto;
  if (s == "slm") return Lang::Slm;
  if (s == "cts") return Lang::Cts;
  if (s == "ucts") return Lang::Ucts;
  if (s == "sequent") return Lang::Sequent;
  throw Error(ErrorKind::Syntax, "unknown --lang '" + s + "' (auto, slm, cts, ucts, sequent)");
}

Lang detect(const std::string& text, const ModelConfig& m) {
  if (text.find("=>") != std::string::npos || text.find("|-") != std::string::npos)
    return Lang::Sequent;
  bool ranked = text.find('[') != std::string::npos || text.find('@') != std::string::npos;
  try {
    parse_slm(text, types_from(m));
    return Lang::Slm;
  } catch (const Error&) {
    CtsContext ctx = context_from(m);
    try {
      parse_cts(text, ctx);
    } catch (const Error&) {
      // Report the error of the language the text looks like.
      if (!ranked) return Lang::Slm;
    }
    return Lang::Cts;
  }
}

std::string cts_summary(const Cts& c) {
  return to_string(c.type()) + " @" + std::to_string(c.rank()) + " " + to_string(classify(c));
}

std::string free_list(const FreeVarSet& fv) {
  std::string s;
  for (const auto& [n, t] : fv) s += (s.empty() ? "" : ", ") + n + ":" + to_string(t);
  return s;
}

Assignment assignments(const std::vector<std::string>& items,
                       const std::function<std::optional<Type>(const std::string&)>& type_of,
                       const ModelConfig& m) {
  Assignment rho;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::Syntax, "--assign expects NAME=LITERAL, got '" + item + "'");
    std::string name = item.substr(0, eq);
    auto ty = type_of(name);
    if (!ty) throw Error(ErrorKind::Unbound, "--assign: " + name + " is not free in the input");
    rho.insert_or_assign(name, parse_elem(item.substr(eq + 1), *ty, m));
  }
  return rho;
}

/// `{{a},{b,c}}` over the individuals of `sigma`.
std::vector<std::vector<bool>> parse_sets(const std::string& text, const ModelConfig& m,
                                          const Type& sigma) {
  auto atoms = rank0_atoms(m, sigma);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < atoms->size(); ++i) index[render((*atoms)[i])] = i;
  std::vector<std::vector<bool>> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= text.size() || text[i] != c)
      throw Error(ErrorKind::Syntax, std::string("set literal: expected '") + c + "' at offset " +
                                         std::to_string(i));
    ++i;
  };
  expect('{');
  skip();
  while (i < text.size() && text[i] != '}') {
    expect('{');
    std::vector<bool> member(atoms->size(), false);
    skip();
    while (i < text.size() && text[i] != '}') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string name = text.substr(i, j - i);
      auto it = index.find(name);
      if (name.empty() || it == index.end())
        throw Error(ErrorKind::Syntax, "set literal: '" + name + "' is not an individual of " +
                                           to_string(sigma));
      member[it->second] = true;
      i = j;
      skip();
      if (i < text.size() && text[i] == ',') ++i;
      skip();
    }
    expect('}');
    out.push_back(member);
    skip();
    if (i < text.size() && text[i] == ',') ++i;
    skip();
  }
  expect('}');
  skip();
  if (i != text.size()) throw Error(ErrorKind::Syntax, "set literal: trailing input");
  return out;
}

const char* kGloss1 = "Adam and Bob both love Carol, or they both love Diane";
const char* kGloss2 = "Adam loves either Carol or Diane, and so does Bob";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ctt: typed lambda-mu terms, ranked Boolean domains and the CTS sequent calculus",
               "ctt"};
  app.require_subcommand(1);
  app.fallthrough();
  bool machine = false;
  app.add_flag("--machine", machine, "one tab-separated record per input: status, command, payload, diagnostics");

  std::string text, lang = "auto", strategy = "lo", elaborate, rule = "all", element, type_name,
                    reading = "both", topic;
  int fuel = kDefaultFuel, depth = 30, trials = 100;
  std::uint64_t seed = 0;
  bool trace = false;
  std::vector<std::string> assigns;
  ModelOpts model;

  auto* parse = app.add_subcommand("parse", "parse and re-print a term, subterm or sequent");
  parse->add_option("input", text, "text or @file")->required();
  parse->add_option("--lang", lang, "auto, slm, cts, ucts or sequent");
  parse->add_option("--elaborate", elaborate,
                    "ucts: outermost-increasing, uniform(k) or annotations");

  auto* check = app.add_subcommand("check", "type-check (lambda-mu) or rank-check (CTS)");
  check->add_option("input", text, "text or @file")->required();
  check->add_option("--lang", lang, "auto, slm, cts, ucts or sequent");

  auto* norm = app.add_subcommand("normalize", "rewrite a lambda-mu term to normal form");
  norm->add_option("input", text, "text or @file")->required();
  norm->add_option("--fuel", fuel, "step budget");
  norm->add_option("--strategy", strategy, "lo (leftmost-outermost) or li (leftmost-innermost)");
  norm->add_flag("--trace", trace, "list every step");

  auto* canon = app.add_subcommand("canon", "canonical form of a CTS subterm");
  canon->add_option("input", text, "text or @file")->required();
  model.add(canon);

  auto* eval = app.add_subcommand("eval", "denotation in a finite model");
  eval->add_option("input", text, "text or @file")->required();
  eval->add_option("--lang", lang, "auto, slm or cts");
  eval->add_option("--assign", assigns, "NAME=LITERAL (repeatable)");
  model.add(eval);

  auto* entail = app.add_subcommand("entail", "semantic validity of a sequent 'G |- D'");
  entail->add_option("input", text, "text or @file")->required();
  model.add(entail);

  auto* cproof = app.add_subcommand("check-proof", "check a derivation file");
  cproof->add_option("input", text, "path, @file or inline text")->required();

  auto* prove_cmd = app.add_subcommand("prove", "bounded proof search for a sequent");
  prove_cmd->add_option("input", text, "text or @file")->required();
  prove_cmd->add_option("--depth", depth, "search depth");

  auto* iso = app.add_subcommand("iso", "type reduction: a set of sets (or ~~s table) as a rank-1 element");
  iso->add_option("--element", element, "e.g. {{a},{b,c}} or a table literal")->required();
  iso->add_option("--type", type_name, "base type s (default: the only base type)");
  model.add(iso);

  auto* harness = app.add_subcommand("harness", "randomized soundness checks");
  harness->add_option("--rule", rule, "rule1..rule12, beta, ..., a CTS rule id, cts or all");
  harness->add_option("--trials", trials, "instances per rule");
  harness->add_option("--seed", seed, "random seed (CTT_SEED overrides)");
  model.add(harness);

  auto* demo = app.add_subcommand("demo", "built-in demonstrations");
  demo->add_option("topic", topic, "scope")->required();
  demo->add_option("--reading", reading, "1, 2 or both");

  std::string command = "ctt";
  auto emit = [&](const Outcome& o) {
    if (machine) {
      std::string diags;
      for (const auto& d : o.diagnostics) diags += (diags.empty() ? "" : "; ") + d;
      out << "status=" << o.status << "\tcommand=" << command << "\tpayload=" << escape(o.payload)
          << "\tdiagnostics=" << escape(diags) << "\n";
    } else {
      if (!o.payload.empty()) out << o.payload << "\n";
      for (const auto& d : o.diagnostics) err << d << "\n";
    }
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    if (machine) out << "status=fail\tcommand=ctt\tpayload=\tdiagnostics=" << escape(e.what()) << "\n";
    return kUsage;
  }

  try {
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    Outcome o;
    if (command == "parse" || command == "check") {
      std::string src = input(text);
      Lang l = parse_lang(lang);
      if (l == Lang::Auto) l = detect(src, ModelConfig{});
      switch (l) {
        case Lang::Slm: {
          Term t = parse_slm(src);
          FreeVarSet fv = free_vars(t);
          TypeContext ctx(fv.begin(), fv.end());
          Type ty = typecheck_slm(t, ctx);
          o.payload = command == "parse" ? render(t) + " : " + to_string(ty) : "ok : " + to_string(ty);
          if (!fv.empty()) o.diagnostics.push_back("free " + free_list(fv));
          break;
        }
        case Lang::Cts: {
          Cts c = parse_cts(src);
          o.payload = command == "parse" ? render(c) + " : " + cts_summary(c) : "ok : " + cts_summary(c);
          break;
        }
        case Lang::Ucts: {
          Ucts u = parse_ucts(src);
          if (!elaborate.empty()) {
            Cts c = elaborate_ranks(u, parse_elaboration(elaborate));
            o.payload = render(c) + " : " + cts_summary(c);
          } else {
            o.payload = (command == "parse" ? render(u) + " : " : "ok : ") + to_string(u.value_type());
          }
          break;
        }
        default: {
          Sequent s = parse_goal(src, {});
          o.payload = command == "parse" ? render(s) : "ok : sequent";
        }
      }
    } else if (command == "normalize") {
      Term t = parse_slm(input(text));
      if (fuel < 0) throw Error(ErrorKind::Syntax, "--fuel must be >= 0");
      Normalized n = normalize(t, parse_strategy(strategy), fuel);
      o.payload = render(n.term);
      if (trace)
        for (const auto& s : n.trace.steps)
          o.diagnostics.push_back(std::string(to_string(s.rule)) + " at " + to_string(s.position) +
                                  ": " + render(s.before) + " -> " + render(s.after));
      o.diagnostics.push_back("steps " + std::to_string(n.trace.steps.size()));
      if (n.status == NormalizeStatus::FuelExhausted) {
        o.status = "unknown";
        o.code = kCap;
        o.diagnostics.push_back("fuel exhausted after " + std::to_string(fuel) + " steps");
      }
    } else if (command == "canon") {
      CtsContext ctx;
      ModelConfig base = model.given() ? model.build() : ModelConfig{};
      ctx = context_from(base);
      Cts c = parse_cts(input(text), ctx);
      std::map<std::string, int> sizes = base.base_sizes;
      if (!model.given()) collect_bases(c, sizes, 3);
      ModelConfig m = model.given() ? base : model.build(sizes);
      Elem e = canonicalize(c, m);
      o.payload = render(e, machine);
      o.diagnostics.push_back("input " + std::string(to_string(classify(c))));
    } else if (command == "eval") {
      std::string src = input(text);
      ModelConfig m = model.build({{"e", 2}});
      Lang l = parse_lang(lang);
      if (l == Lang::Auto) l = detect(src, m);
      if (l == Lang::Slm) {
        Term t = parse_slm(src, types_from(m));
        FreeVarSet fv = free_vars(t);
        Assignment rho = assignments(
            assigns,
            [&](const std::string& n) -> std::optional<Type> {
              for (const auto& [fn, ft] : fv)
                if (fn == n) return ft;
              return std::nullopt;
            },
            m);
        o.payload = render(eval_slm(t, m, rho));
      } else if (l == Lang::Cts) {
        CtsContext ctx = context_from(m);
        Cts c = parse_cts(src, ctx);
        auto fv = ctt::free_vars(c);
        Assignment rho = assignments(
            assigns,
            [&](const std::string& n) -> std::optional<Type> {
              for (const auto& v : fv)
                if (v.name == n) return v.type;
              return std::nullopt;
            },
            m);
        o.payload = render(eval_cts(c, m, rho));
      } else {
        throw Error(ErrorKind::Syntax, "eval takes a lambda-mu term or a CTS subterm");
      }
    } else if (command == "entail") {
      ModelConfig m = model.given() ? model.build() : ModelConfig{};
      Sequent s = parse_goal(input(text), context_from(m));
      std::vector<ModelConfig> family;
      if (model.given()) family.push_back(m);
      else family = standard_family();
      Verdict v = sequent_valid(s.ante, s.succ, family);
      if (v.valid) {
        o.payload = "valid";
      } else {
        o = negative("invalid");
        if (v.counterexample)
          o.diagnostics.push_back("counterexample model " + std::to_string(v.counterexample->first) +
                                  " " + v.counterexample->second);
      }
    } else if (command == "check-proof") {
      std::string src = text;
      if (src.size() > 1 && src[0] == '@') src = read_file(src.substr(1));
      else if (src.find('\n') == std::string::npos && std::ifstream(src).good()) src = read_file(src);
      Derivation d = parse_derivation(src);
      DerivationCheck r = check_derivation(d);
      if (r.ok) {
        o.payload = "ok height=" + std::to_string(height(d)) + " size=" + std::to_string(size(d));
        o.diagnostics.push_back("proves " + render(d.conclusion));
      } else {
        std::string path;
        for (int i : r.path) path += (path.empty() ? "" : ".") + std::to_string(i);
        o = negative("fail node=" + r.node + " path=" + (path.empty() ? "root" : path),
                     {r.violation});
      }
    } else if (command == "prove") {
      Sequent goal = parse_goal(input(text), {});
      auto d = prove(goal, depth);
      if (d) {
        o.payload = render(*d);
        while (!o.payload.empty() && o.payload.back() == '\n') o.payload.pop_back();
        o.diagnostics.push_back("height " + std::to_string(height(*d)) + ", size " +
                                std::to_string(size(*d)));
      } else {
        o = negative("", {"no derivation within depth " + std::to_string(depth)});
      }
    } else if (command == "iso") {
      ModelConfig m = model.build();
      if (m.base_sizes.empty()) throw Error(ErrorKind::Syntax, "iso needs --base NAME=SIZE or --model");
      Type sigma = type_name.empty() ? Type::base(m.base_sizes.begin()->first) : parse_type(type_name);
      if (type_name.empty() && m.base_sizes.size() > 1)
        throw Error(ErrorKind::Syntax, "several base types: choose one with --type");
      std::string el = input(element);
      auto first = el.find_first_not_of(" \t");
      bool sets = first != std::string::npos && el[first] == '{';
      Elem r = sets ? iso_from_sets(m, sigma, parse_sets(el, m, sigma))
                    : iso_i(parse_elem(el, Type::neg(Type::neg(sigma)), m), m);
      o.payload = render(r, machine);
    } else if (command == "harness") {
      if (const char* env = std::getenv("CTT_SEED")) {
        try {
          seed = std::stoull(env);
        } catch (const std::exception&) {
          throw Error(ErrorKind::Syntax, std::string("CTT_SEED is not a number: ") + env);
        }
      }
      if (trials < 1) throw Error(ErrorKind::Syntax, "--trials must be >= 1");
      bool cts = rule == "cts";
      if (!cts) {
        try {
          parse_rule_id(rule);
          cts = true;
        } catch (const Error&) {
        }
      }
      std::string records;
      bool ok = true;
      if (cts) {
        std::vector<ModelConfig> fam = model.given() ? std::vector<ModelConfig>{model.build()}
                                                     : standard_family();
        HarnessReport rep = cts_harness(rule == "cts" ? "all" : rule, fam, trials, seed);
        records = rep.records();
        ok = rep.ok();
      } else {
        ModelConfig m = model.build({{"e", 2}});
        std::vector<std::string> rules;
        if (rule == "all")
          for (int i = 1; i <= 12; ++i) rules.push_back("rule" + std::to_string(i));
        else rules.push_back(rule);
        for (const auto& r : rules) {
          HarnessReport rep = slm_harness(r, m, trials, seed);
          records += rep.records();
          ok = ok && rep.ok();
        }
      }
      while (!records.empty() && records.back() == '\n') records.pop_back();
      o.payload = records;
      if (!ok) {
        o.status = "fail";
        o.code = kNegative;
      }
    } else if (command == "demo") {
      if (topic != "scope") throw Error(ErrorKind::Syntax, "unknown demo '" + topic + "' (scope)");
      std::vector<int> ks;
      if (reading == "1" || reading == "both") ks.push_back(1);
      if (reading == "2" || reading == "both") ks.push_back(2);
      if (ks.empty()) throw Error(ErrorKind::Syntax, "--reading must be 1, 2 or both");
      ModelConfig m;
      m.base_sizes = {{"e", 2}};
      for (int k : ks) {
        CtsContext ctx;
        parse_cts("L:e->~e@0", ctx);
        for (const char* n : {"A", "B", "C", "D"}) parse_cts(std::string(n) + ":e@0", ctx);
        std::string src = "((L or[1](C,D)) and[" + std::to_string(k) + "](A,B))";
        Elem e = canonicalize(parse_cts(src, ctx), m);
        Outcome r;
        r.payload = machine ? render(e, true)
                            : "reading " + std::to_string(k) + ": " + src + "\n  canonical: " +
                                  render(e) + "\n  gloss: " + (k == 1 ? kGloss1 : kGloss2);
        if (machine) r.diagnostics = {"reading " + std::to_string(k), src, k == 1 ? kGloss1 : kGloss2};
        emit(r);
      }
      return kOk;
    }
    emit(o);
    return o.code;
  } catch (const Error& e) {
    Outcome o{"fail", "", {std::string(to_string(e.kind())) + " error: " + e.what()}, exit_for(e.kind())};
    if (o.code == kCap) o.status = "unknown";
    emit(o);
    return o.code;
  } catch (const std::exception& e) {
    emit({"fail", "", {std::string("error: ") + e.what()}, kUsage});
    return kUsage;
  }
}

}  // namespace ctt::cli
