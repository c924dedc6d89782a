#include "mplv/model_io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace mplv {

using nlohmann::json;

namespace {

Ticks number_of(const json& v, Scale scale, const std::string& where) {
  try {
    if (v.is_number()) return parse_fixed(v.dump(), scale);
    if (v.is_string()) return parse_fixed(v.get<std::string>(), scale);
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
  throw Error(where + ": expected a number or null");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t variable_index(std::string_view s, std::size_t offset) {
  s = trim(s);
  if (s.size() < 2 || s[0] != 'x') throw ParseError("expected a variable x<i>", offset);
  std::size_t idx = 0;
  for (char c : s.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("expected a variable x<i>", offset);
    idx = idx * 10 + static_cast<std::size_t>(c - '0');
  }
  if (idx == 0) throw ParseError("variable indices start at 1", offset);
  return idx - 1;
}

}  // namespace

void add_constraint(Dbm& d, std::string_view text, Scale scale) {
  // x<i> - x<j> <op> <c>
  const std::size_t minus = text.find('-');
  if (minus == std::string_view::npos) throw ParseError("expected 'x<i> - x<j> <op> <c>'", 0);
  const std::size_t op_at = text.find_first_of("<>=", minus);
  if (op_at == std::string_view::npos) throw ParseError("missing comparison operator", text.size());
  const std::size_t i = variable_index(text.substr(0, minus), 0);
  const std::size_t j = variable_index(text.substr(minus + 1, op_at - minus - 1), minus + 1);
  std::size_t op_len = 1;
  std::string op(1, text[op_at]);
  if (op_at + 1 < text.size() && text[op_at + 1] == '=') {
    op += '=';
    op_len = 2;
  }
  const std::string_view rhs = trim(text.substr(op_at + op_len));
  Ticks c = 0;
  try {
    c = parse_fixed(rhs, scale);
  } catch (const ParseError&) {
    throw ParseError("bad constant '" + std::string(rhs) + "'", op_at + op_len);
  }
  if (i >= d.dim() || j >= d.dim()) throw ParseError("variable index out of range", 0);
  if (i == j) throw ParseError("constraint relates a variable to itself", 0);
  if (op == "<=") d.constrain(i, j, Bound::le(c));
  else if (op == "<") d.constrain(i, j, Bound::lt(c));
  else if (op == ">=") d.constrain(j, i, Bound::le(-c));
  else if (op == ">") d.constrain(j, i, Bound::lt(-c));
  else if (op == "=" || op == "==") {
    d.constrain(i, j, Bound::le(c));
    d.constrain(j, i, Bound::le(-c));
  } else {
    throw ParseError("unknown operator '" + op + "'", op_at);
  }
}

Dbm parse_constraints(const std::vector<std::string>& lines, std::size_t n, Scale scale) {
  Dbm d = Dbm::universe(n);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    try {
      add_constraint(d, lines[k], scale);
    } catch (const ParseError& e) {
      throw Error("initial[" + std::to_string(k) + "]: " + e.what());
    }
  }
  auto c = canonicalize(std::move(d));
  if (!c) throw Error("initial constraints are unsatisfiable");
  return *c;
}

Model parse_model(std::string_view json_text, Scale scale) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("model file must hold a JSON object");
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) throw Error("matrix: missing or not an array");
  const json& rows = doc["matrix"];
  const std::size_t n = rows.size();
  if (n == 0) throw Error("matrix: empty");
  Model m;
  m.matrix = Matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "matrix[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != n) throw Error(where + ": matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      const json& v = rows[i][j];
      if (v.is_null()) continue;
      m.matrix(i, j) = MaxPlus::finite(number_of(v, scale, where + "[" + std::to_string(j) + "]"));
    }
    if (m.matrix.finite_columns(i).empty()) throw Error(where + ": row " + std::to_string(i + 1) + " not regular");
  }
  if (doc.contains("initial") && !doc["initial"].is_null()) {
    const json& init = doc["initial"];
    if (!init.is_array()) throw Error("initial: expected a list of constraint strings");
    std::vector<std::string> lines;
    for (std::size_t k = 0; k < init.size(); ++k) {
      if (!init[k].is_string()) throw Error("initial[" + std::to_string(k) + "]: expected a string");
      lines.push_back(init[k].get<std::string>());
    }
    m.initial = parse_constraints(lines, n, scale);
  }
  if (doc.contains("spec") && !doc["spec"].is_null()) {
    if (!doc["spec"].is_string()) throw Error("spec: expected a string");
    m.spec = doc["spec"].get<std::string>();
  }
  return m;
}

Model load_model(const std::string& path, Scale scale) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str(), scale);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string save_model(const Model& model, Scale scale) {
  json doc;
  json rows = json::array();
  for (std::size_t i = 0; i < model.matrix.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < model.matrix.dim(); ++j) {
      const MaxPlus& e = model.matrix(i, j);
      row.push_back(e.is_finite() ? json::parse(format_fixed(e.value(), scale)) : json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  if (model.initial) {
    json init = json::array();
    std::istringstream lines(dump(*model.initial, scale));
    for (std::string line; std::getline(lines, line);) init.push_back(line);
    doc["initial"] = std::move(init);
  }
  if (model.spec) doc["spec"] = *model.spec;
  return doc.dump(2) + "\n";
}

void write_model(const std::string& path, const Model& model, Scale scale) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out << save_model(model, scale);
}

Matrix random_mpl(std::size_t n, const RandomConfig& config, std::mt19937_64& rng, Scale scale) {
  if (config.finite_per_row == 0 || config.finite_per_row > n) throw Error("finite entries per row must be in 1..n");
  if (config.lo > config.hi) throw Error("empty value range");
  Matrix a(n);
  std::vector<std::size_t> cols(n);
  std::uniform_int_distribution<std::int64_t> value(config.lo, config.hi);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    // partial Fisher-Yates: first m slots are the chosen columns
    for (std::size_t k = 0; k < config.finite_per_row; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, n - 1);
      std::swap(cols[k], cols[pick(rng)]);
    }
    for (std::size_t k = 0; k < config.finite_per_row; ++k) {
      a(i, cols[k]) = MaxPlus::finite(checked_mul(value(rng), scale.ticks_per_unit));
    }
  }
  return a;
}

Matrix random_mpl(std::size_t n, const RandomConfig& config, std::uint64_t seed, Scale scale) {
  std::mt19937_64 rng(seed);
  return random_mpl(n, config, rng, scale);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MPLVERIFY_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw Error("MPLVERIFY_SEED must be a non-negative integer");
  }
  return 20240611;
}

}  // namespace mplv
