#include "fif/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fif {
namespace {

class DocumentParser {
 public:
  explicit DocumentParser(std::string_view text) : src_(text) {}

  ConfigDocument parse() {
    ConfigDocument doc;
    ConfigSection* section = &doc[""];
    for (;;) {
      skip_blank_lines();
      if (pos_ >= src_.size()) break;
      if (src_[pos_] == '[') {
        ++pos_;
        const std::string name = bare_key();
        skip_inline_ws();
        expect(']');
        end_of_line();
        if (doc.count(name) && name != "") fail("duplicate section [" + name + "]");
        section = &doc[name];
        continue;
      }
      const std::size_t key_pos = pos_;
      const std::string key = bare_key();
      skip_inline_ws();
      expect('=');
      ConfigValue v = value();
      end_of_line();
      if (section->count(key)) throw ParseError("config: duplicate key '" + key + "'", key_pos);
      section->emplace(key, std::move(v));
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("config: " + msg, pos_); }

  void skip_inline_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r')) ++pos_;
  }

  void skip_comment() {
    if (pos_ < src_.size() && src_[pos_] == '#')
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
  }

  void skip_blank_lines() {
    for (;;) {
      skip_inline_ws();
      skip_comment();
      if (pos_ < src_.size() && src_[pos_] == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }

  // whitespace, newlines and comments (inside arrays)
  void skip_all_ws() { skip_blank_lines(); }

  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (pos_ < src_.size() && src_[pos_] != '\n') fail("unexpected trailing text");
  }

  void expect(char c) {
    if (pos_ >= src_.size() || src_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string bare_key() {
    skip_inline_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(src_.substr(start, pos_ - start));
  }

  ConfigValue value() {
    skip_inline_ws();
    if (pos_ >= src_.size()) fail("expected a value");
    const char c = src_[pos_];
    ConfigValue v;
    if (c == '"' || c == '\'') {
      v.kind = ConfigValue::Kind::string;
      v.text = string_literal(c);
    } else if (c == '[') {
      ++pos_;
      v.kind = ConfigValue::Kind::array;
      for (;;) {
        skip_all_ws();
        if (pos_ < src_.size() && src_[pos_] == ']') {
          ++pos_;
          break;
        }
        v.items.push_back(value());
        skip_all_ws();
        if (pos_ < src_.size() && src_[pos_] == ',') {
          ++pos_;
          continue;
        }
        skip_all_ws();
        expect(']');
        break;
      }
    } else if (src_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.kind = ConfigValue::Kind::boolean;
      v.boolean = true;
    } else if (src_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.kind = ConfigValue::Kind::boolean;
    } else {
      v.kind = ConfigValue::Kind::number;
      v.number = number();
    }
    return v;
  }

  std::string string_literal(char quote) {
    ++pos_;
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      char c = src_[pos_++];
      if (c == '\n') fail("unterminated string");
      if (c == '\\' && quote == '"') {
        if (pos_ >= src_.size()) fail("unterminated string");
        const char e = src_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (pos_ >= src_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  double number() {
    const std::size_t start = pos_;
    if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                                  src_[pos_] == '_' ||
                                  ((src_[pos_] == '+' || src_[pos_] == '-') &&
                                   (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
      ++pos_;
    std::string lexeme(src_.substr(start, pos_ - start));
    std::erase(lexeme, '_');
    if (!lexeme.empty() && lexeme.front() == '+') lexeme.erase(0, 1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
    if (lexeme.empty() || ec != std::errc() || end != lexeme.data() + lexeme.size())
      throw ParseError("config: malformed value '" + lexeme + "'", start);
    return v;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

const ConfigValue* find(const ConfigSection* s, std::string_view key) {
  if (!s) return nullptr;
  const auto it = s->find(key);
  return it == s->end() ? nullptr : &it->second;
}

// Numbers may be written as literals or as constant expressions in strings ("1/2").
double as_number(const ConfigValue& v, std::string_view what) {
  if (v.kind == ConfigValue::Kind::number) return v.number;
  if (v.kind == ConfigValue::Kind::string) {
    const ExprFunction e = parse_expr(v.text);
    if (e.depends_on_x()) throw ConfigError(std::string(what) + ": expected a constant, got '" + v.text + "'");
    return e(0.0);
  }
  throw ConfigError(std::string(what) + ": expected a number");
}

std::vector<double> as_numbers(const ConfigValue& v, std::string_view what) {
  if (v.kind != ConfigValue::Kind::array) throw ConfigError(std::string(what) + ": expected an array");
  std::vector<double> out;
  for (const ConfigValue& item : v.items) out.push_back(as_number(item, what));
  return out;
}

std::string as_expression_text(const ConfigValue& v, std::string_view what) {
  if (v.kind == ConfigValue::Kind::string) return v.text;
  if (v.kind == ConfigValue::Kind::number) return ExprFunction::constant(v.number).to_string();
  throw ConfigError(std::string(what) + ": expected an expression string");
}

std::vector<std::string> indexed_expressions(const ConfigSection* s, char prefix, int n, std::string_view section) {
  std::vector<std::string> out;
  if (!s) throw ConfigError("missing [" + std::string(section) + "] section");
  for (const auto& [key, _] : *s) {
    bool known = false;
    if (key.size() > 1 && key[0] == prefix) {
      int idx = 0;
      auto [end, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), idx);
      known = ec == std::errc() && end == key.data() + key.size() && idx >= 1 && idx <= n;
    }
    if (!known) throw ConfigError("[" + std::string(section) + "]: unexpected key '" + key + "'");
  }
  for (int i = 1; i <= n; ++i) {
    const std::string key = std::string(1, prefix) + std::to_string(i);
    const ConfigValue* v = find(s, key);
    if (!v) throw ConfigError("[" + std::string(section) + "]: missing " + key);
    out.push_back(as_expression_text(*v, key));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits "k=v,k=v" at top-level commas (commas inside parentheses belong to values).
BuiltinParams parse_builtin_params(std::string_view text) {
  BuiltinParams params;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    const std::string_view item = text.substr(start, end - start);
    if (item.empty()) return;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("builtin parameter '" + std::string(item) + "' lacks '='");
    params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return params;
}

}  // namespace

ConfigDocument parse_config_document(std::string_view text) { return DocumentParser(text).parse(); }

ModelConfig model_config_from_document(const ConfigDocument& doc) {
  for (const auto& [name, section] : doc) {
    if (name.empty() && section.empty()) continue;
    if (name != "model" && name != "scaling" && name != "offsets" && name != "tables")
      throw ConfigError(name.empty() ? "keys must appear inside a section" : "unknown section [" + name + "]");
  }
  auto section = [&](std::string_view name) -> const ConfigSection* {
    const auto it = doc.find(name);
    return it == doc.end() ? nullptr : &it->second;
  };
  const ConfigSection* model = section("model");
  if (!model) throw ConfigError("missing [model] section");

  ModelConfig cfg;
  for (const auto& [key, _] : *model)
    if (key != "name" && key != "n" && key != "interval" && key != "y" && key != "knots")
      throw ConfigError("[model]: unexpected key '" + key + "'");
  if (const ConfigValue* v = find(model, "name")) cfg.name = v->text;
  const ConfigValue* n = find(model, "n");
  if (!n) throw ConfigError("[model]: missing n");
  const double nv = as_number(*n, "n");
  if (nv != std::floor(nv) || nv < 2 || nv > 1000) throw ConfigError("[model]: n must be an integer >= 2");
  cfg.n = static_cast<int>(nv);
  if (const ConfigValue* v = find(model, "interval")) {
    const std::vector<double> iv = as_numbers(*v, "interval");
    if (iv.size() != 2 || !(iv[0] < iv[1])) throw ConfigError("[model]: interval must be [a, b] with a < b");
    cfg.interval = {iv[0], iv[1]};
  }
  if (const ConfigValue* v = find(model, "knots")) cfg.knots = as_numbers(*v, "knots");

  if (const ConfigSection* tables = section("tables"))
    for (const auto& [name, v] : *tables) {
      if (v.kind != ConfigValue::Kind::string) throw ConfigError("[tables]: " + name + " must be a string");
      cfg.tables[name] = v.text;
    }

  cfg.scaling = indexed_expressions(section("scaling"), 's', cfg.n, "scaling");

  const ConfigSection* offsets = section("offsets");
  const ConfigValue* shorthand = find(offsets, "weierstrass");
  std::optional<ExprFunction> phi;
  if (shorthand) {
    if (offsets->size() != 1) throw ConfigError("[offsets]: weierstrass shorthand excludes q1..qN");
    phi = parse_expr(as_expression_text(*shorthand, "weierstrass"));
    const ExprFunction x = ExprFunction::variable();
    for (int i = 1; i <= cfg.n; ++i) {
      const ExprFunction inner =
          ExprFunction(parse_expr("(x + " + std::to_string(i - 1) + ") / " + std::to_string(cfg.n)));
      cfg.offsets.push_back(phi->substitute(inner).to_string());
    }
  } else {
    cfg.offsets = indexed_expressions(offsets, 'q', cfg.n, "offsets");
  }

  if (const ConfigValue* v = find(model, "y")) {
    cfg.y = as_numbers(*v, "y");
  } else if (phi) {
    const ExprFunction s1 = parse_expr(cfg.scaling[0]);
    for (const std::string& s : cfg.scaling)
      if (parse_expr(s).depends_on_x() || parse_expr(s)(0.0) != s1(0.0))
        throw ConfigError("[model]: y may only be omitted for weierstrass models with equal constant scalings");
    for (int i = 0; i <= cfg.n; ++i) cfg.y.push_back(weierstrass_series(cfg.n, s1(0.0), *phi, i, cfg.n));
  } else {
    throw ConfigError("[model]: missing y");
  }
  return cfg;
}

ModelConfig parse_model_config(std::string_view text) {
  return model_config_from_document(parse_config_document(text));
}

ModelConfig load_model_config(std::string_view source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.substr(0, prefix.size()) == prefix) {
    std::string_view rest = source.substr(prefix.size());
    const std::size_t colon = rest.find(':');
    const std::string_view name = rest.substr(0, colon);
    const BuiltinParams params =
        colon == std::string_view::npos ? BuiltinParams{} : parse_builtin_params(rest.substr(colon + 1));
    return builtin_model(name, params);
  }
  return parse_model_config(read_file(std::filesystem::path(source)));
}

}  // namespace fif
