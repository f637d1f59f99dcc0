#include "stiefelsdp/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace stiefel::toml {

std::int64_t Value::as_int() const {
  if (kind != Kind::integer) throw ParseError("config: expected an integer");
  return i;
}

double Value::as_double() const {
  if (kind == Kind::integer) return static_cast<double>(i);
  if (kind != Kind::floating) throw ParseError("config: expected a number");
  return d;
}

bool Value::as_bool() const {
  if (kind != Kind::boolean) throw ParseError("config: expected a boolean");
  return b;
}

const std::string& Value::as_string() const {
  if (kind != Kind::string) throw ParseError("config: expected a string");
  return s;
}

const std::vector<Value>& Value::as_array() const {
  if (kind != Kind::array) throw ParseError("config: expected an array");
  return arr;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Table run() {
    Table out;
    std::string prefix;
    skip_space(true);
    while (pos_ < text_.size()) {
      if (text_[pos_] == '[') {
        ++pos_;
        prefix = bare_key();
        expect(']');
        skip_space(true);
        continue;
      }
      std::string key = bare_key();
      expect('=');
      Value v = value();
      out[prefix.empty() ? key : prefix + "." + key] = std::move(v);
      skip_space(true);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    size_t line = 1;
    for (size_t k = 0; k < pos_ && k < text_.size(); ++k)
      if (text_[k] == '\n') ++line;
    throw ParseError("config line " + std::to_string(line) + ": " + what);
  }

  // newlines=true also eats line breaks and comments.
  void skip_space(bool newlines) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' ||
                 (newlines && c == '\n')) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_space(false);
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string bare_key() {
    skip_space(false);
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '-' || text_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return text_.substr(start, pos_ - start);
  }

  Value value() {
    skip_space(true);
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '"') return string_value();
    if (c == '[') return array_value();
    return atom_value();
  }

  Value string_value() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\' && pos_ < text_.size()) {
        const char e = text_[pos_++];
        c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
      }
      out.push_back(c);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    Value v;
    v.kind = Value::Kind::string;
    v.s = std::move(out);
    return v;
  }

  Value array_value() {
    ++pos_;
    Value v;
    v.kind = Value::Kind::array;
    skip_space(true);
    while (pos_ < text_.size() && text_[pos_] != ']') {
      v.arr.push_back(value());
      skip_space(true);
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        skip_space(true);
      }
    }
    if (pos_ >= text_.size()) fail("unterminated array");
    ++pos_;
    return v;
  }

  Value atom_value() {
    const size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != ',' &&
           text_[pos_] != ']' && text_[pos_] != '#')
      ++pos_;
    std::string tok = text_.substr(start, pos_ - start);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' ||
                            tok.back() == '\r'))
      tok.pop_back();
    if (tok.empty()) fail("expected a value");
    Value v;
    if (tok == "true" || tok == "false") {
      v.kind = Value::Kind::boolean;
      v.b = tok == "true";
      return v;
    }
    if (tok.find_first_of(".eE") == std::string::npos) {
      std::int64_t i = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
      if (ec == std::errc() && p == tok.data() + tok.size()) {
        v.kind = Value::Kind::integer;
        v.i = i;
        return v;
      }
    }
    try {
      size_t used = 0;
      const double d = std::stod(tok, &used);
      if (used == tok.size()) {
        v.kind = Value::Kind::floating;
        v.d = d;
        return v;
      }
    } catch (...) {
    }
    fail("cannot parse value \"" + tok + "\"");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

Table parse(const std::string& text) { return Parser(text).run(); }

Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace stiefel::toml
