#include "ctt/model_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "ctt/error.hpp"
#include "ctt/syntax.hpp"

namespace ctt {

namespace {

[[noreturn]] void line_error(ErrorKind kind, int line, const std::string& msg) {
  throw Error(kind, "line " + std::to_string(line) + ": " + msg);
}

std::string strip(std::string s) {
  if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

int parse_count(const std::string& word, int line) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(word, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != word.size() || word.empty()) line_error(ErrorKind::Syntax, line, "expected a number, got '" + word + "'");
  return v;
}

void base_names(const Type& t, std::vector<std::string>& out) {
  if (t.is_base()) out.push_back(t.name());
  if (t.is_arrow()) {
    base_names(t.dom(), out);
    base_names(t.cod(), out);
  }
}

}  // namespace

ModelConfig parse_model(std::string_view text) {
  ModelConfig m;
  m.base_sizes.clear();
  struct PendingConst {
    int line;
    std::string name, type, literal;
  };
  std::vector<PendingConst> consts;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string head;
    words >> head;
    if (head == "base") {
      std::string name, size, extra;
      words >> name >> size;
      if (name.empty() || size.empty() || (words >> extra))
        line_error(ErrorKind::Syntax, line_no, "expected 'base <name> <size>'");
      if (name == "bot") line_error(ErrorKind::Model, line_no, "bot is not a base type");
      if (m.base_sizes.count(name)) line_error(ErrorKind::Model, line_no, "base " + name + " declared twice");
      m.base_sizes[name] = parse_count(size, line_no);
    } else if (head == "rankcap") {
      std::string n, extra;
      words >> n;
      if (n.empty() || (words >> extra)) line_error(ErrorKind::Syntax, line_no, "expected 'rankcap <n>'");
      m.rank_cap = parse_count(n, line_no);
    } else if (head == "const") {
      auto colon = line.find(':'), eq = line.find('=');
      if (colon == std::string::npos || eq == std::string::npos || eq < colon)
        line_error(ErrorKind::Syntax, line_no, "expected 'const <name> : <type> = <literal>'");
      std::string name = strip(line.substr(5, colon - 5));
      if (name.empty() || name.find(' ') != std::string::npos)
        line_error(ErrorKind::Syntax, line_no, "bad constant name '" + name + "'");
      consts.push_back({line_no, name, strip(line.substr(colon + 1, eq - colon - 1)),
                        strip(line.substr(eq + 1))});
    } else {
      line_error(ErrorKind::Syntax, line_no, "unknown directive '" + head + "'");
    }
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("model: ") + e.what());
  }
  for (const auto& c : consts) {
    try {
      Type ty = parse_type(c.type);
      std::vector<std::string> bases;
      base_names(ty, bases);
      for (const auto& b : bases)
        if (!m.base_sizes.count(b)) line_error(ErrorKind::Model, c.line, "undeclared base type " + b);
      if (m.constants.count(c.name)) line_error(ErrorKind::Model, c.line, "constant " + c.name + " defined twice");
      m.constants.insert_or_assign(c.name, parse_elem(c.literal, ty, m));
    } catch (const Error& e) {
      std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      line_error(e.kind() == ErrorKind::Cap ? ErrorKind::Cap : ErrorKind::Model, c.line,
                 "constant " + c.name + ": " + what);
    }
  }
  return m;
}

ModelConfig load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Model, "cannot read model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string render(const ModelConfig& m) {
  std::ostringstream os;
  for (const auto& [name, size] : m.base_sizes) os << "base " << name << " " << size << "\n";
  os << "rankcap " << m.rank_cap << "\n";
  for (const auto& [name, v] : m.constants)
    os << "const " << name << " : " << to_string(v.type()) << " = " << render(v) << "\n";
  return os.str();
}

}  // namespace ctt
