#include "hessiana/cubic_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hessiana {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CubicForm parse_cubic(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n_vars = 0;
  FieldSpec field;
  CubicForm::Terms terms;
  std::set<Monomial> seen;

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!have_header) {
      std::istringstream hs(t);
      std::string word, nv, fs, extra;
      hs >> word >> nv >> fs;
      if (word != "cubic" || nv.rfind("n_vars=", 0) != 0 || fs.rfind("field=", 0) != 0 || (hs >> extra))
        throw ParseError(lineno, "expected header 'cubic n_vars=<k> field=<rational|p:PRIME>'");
      try {
        std::size_t pos = 0;
        auto digits = nv.substr(7);
        n_vars = std::stoul(digits, &pos);
        if (pos != digits.size() || n_vars == 0) throw std::invalid_argument("n_vars");
        field = FieldSpec::parse(fs.substr(6));
      } catch (const std::exception& e) {
        throw ParseError(lineno, std::string("malformed header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    auto colon = t.find(':');
    if (colon == std::string::npos) throw ParseError(lineno, "expected '<exponents> : <coefficient>'");
    std::istringstream es(t.substr(0, colon));
    std::vector<int> exps;
    std::string tok;
    while (es >> tok) {
      try {
        std::size_t pos = 0;
        int e = std::stoi(tok, &pos);
        if (pos != tok.size() || e < 0) throw std::invalid_argument(tok);
        exps.push_back(e);
      } catch (const std::exception&) {
        throw ParseError(lineno, "malformed exponent '" + tok + "'");
      }
    }
    if (exps.size() != n_vars)
      throw ParseError(lineno, "expected " + std::to_string(n_vars) + " exponents, got " + std::to_string(exps.size()));
    int degree = 0;
    for (int e : exps) degree += e;
    if (degree != 3) throw ParseError(lineno, "term has degree " + std::to_string(degree) + ", expected 3");
    std::vector<std::size_t> idx;
    for (std::size_t v = 0; v < n_vars; ++v)
      for (int e = 0; e < exps[v]; ++e) idx.push_back(v);
    Monomial m = Monomial::of(idx[0], idx[1], idx[2]);
    if (!seen.insert(m).second) throw ParseError(lineno, "duplicate exponent row");
    mpq_class c;
    try {
      c = parse_rational(trim(t.substr(colon + 1)));
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    terms.emplace(m, c);
  }
  if (!have_header) throw ParseError(lineno, "missing 'cubic' header");
  try {
    return CubicForm(n_vars, field, std::move(terms));
  } catch (const std::exception& e) {
    throw ParseError(lineno, e.what());
  }
}

CubicForm parse_cubic_string(const std::string& text) {
  std::istringstream in(text);
  return parse_cubic(in);
}

CubicForm read_cubic_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  return parse_cubic(in);
}

std::string serialize_cubic(const CubicForm& f) {
  std::ostringstream out;
  out << "cubic n_vars=" << f.n_vars() << " field=" << f.field().to_string() << '\n';
  for (const auto& [m, c] : f.terms()) {
    auto e = m.exponents(f.n_vars());
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << " : " << c.get_str() << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hessiana
