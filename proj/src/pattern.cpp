#include <cctype>

#include "plancog/frontend.hpp"
#include "plancog/kb.hpp"

namespace plancog {

namespace {

bool wildcard_at(std::string_view text, std::size_t i, std::size_t& end, std::string& name) {
  if (text[i] != '<' || i + 1 >= text.size()) return false;
  const char first = text[i + 1];
  if (!std::isalpha(static_cast<unsigned char>(first)) && first != '_') return false;
  std::size_t j = i + 1;
  while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                             text[j] == '_' || text[j] == '-'))
    ++j;
  if (j >= text.size() || text[j] != '>') return false;
  name = std::string(text.substr(i + 1, j - i - 1));
  end = j + 1;
  return true;
}

void append_literal(std::string_view chunk, Pattern& out) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(chunk);
  } catch (const SyntaxError& e) {
    throw PatternError("bad pattern '" + out.source + "': " + e.what());
  }
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::Comment)
      throw PatternError("bad pattern '" + out.source + "': comment inside pattern");
    PatternToken pt;
    pt.text = t.text;
    pt.word = t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword ||
              t.kind == TokenKind::IntegerLiteral || t.kind == TokenKind::RealLiteral;
    pt.kind = t.kind == TokenKind::Identifier && iequals(t.text, "iteration")
                  ? PatternToken::Kind::Iteration
                  : PatternToken::Kind::Literal;
    out.tokens.push_back(std::move(pt));
  }
}

bool is_letter_key(const std::string& key) {
  return key.size() == 1 && std::islower(static_cast<unsigned char>(key[0]));
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
  Pattern out;
  out.source = std::string(text);
  if (!text.empty() && text.front() == '~') {
    out.substring = true;
    if (text.size() == 1) throw PatternError("bad pattern '~': empty substring");
    return out;
  }
  std::size_t literal_start = 0;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t end = 0;
    std::string name;
    if (!wildcard_at(text, i, end, name)) {
      ++i;
      continue;
    }
    append_literal(text.substr(literal_start, i - literal_start), out);
    PatternToken pt;
    pt.word = true;
    pt.text = name;
    if (name == "int")
      pt.kind = PatternToken::Kind::Integer;
    else if (is_letter_key(name))
      pt.kind = PatternToken::Kind::Variable;
    else
      pt.kind = PatternToken::Kind::SlotRef;
    out.tokens.push_back(std::move(pt));
    i = literal_start = end;
  }
  append_literal(text.substr(literal_start), out);
  if (out.tokens.empty()) throw PatternError("bad pattern '" + out.source + "': empty");
  return out;
}

bool match_pattern(const Pattern& pattern, std::string_view text, Bindings& bindings) {
  if (pattern.substring)
    return to_lower(text).find(to_lower(pattern.source.substr(1))) != std::string::npos;

  std::vector<Token> tokens;
  try {
    tokens = tokenize(text);
  } catch (const SyntaxError&) {
    return false;
  }
  std::erase_if(tokens, [](const Token& t) { return t.kind == TokenKind::Comment; });
  if (tokens.size() != pattern.tokens.size()) return false;

  Bindings local = bindings;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    const PatternToken& p = pattern.tokens[i];
    switch (p.kind) {
      case PatternToken::Kind::Literal:
        if (t.kind == TokenKind::Comment || !iequals(t.text, p.text)) return false;
        break;
      case PatternToken::Kind::Iteration:
        if (t.kind != TokenKind::Keyword ||
            (t.text != "REPEAT" && t.text != "WHILE" && t.text != "FOR"))
          return false;
        break;
      case PatternToken::Kind::Integer:
        if (t.kind != TokenKind::IntegerLiteral) return false;
        break;
      case PatternToken::Kind::SlotRef: {
        auto it = local.find(p.text);
        if (it == local.end() || t.kind != TokenKind::Identifier || !iequals(it->second, t.text))
          return false;
        break;
      }
      case PatternToken::Kind::Variable: {
        if (t.kind != TokenKind::Identifier) return false;
        auto it = local.find(p.text);
        if (it != local.end()) {
          if (!iequals(it->second, t.text)) return false;
          break;
        }
        for (const auto& [key, value] : local)
          if (is_letter_key(key) && iequals(value, t.text)) return false;
        local.emplace(p.text, t.text);
        break;
      }
    }
  }
  bindings = std::move(local);
  return true;
}

bool match_pattern(const Pattern& pattern, std::string_view text) {
  Bindings b;
  return match_pattern(pattern, text, b);
}

std::optional<std::string> instantiate_pattern(const Pattern& pattern, const Bindings& bindings) {
  if (pattern.substring) return std::nullopt;
  std::string out;
  bool prev_word = false;
  for (const PatternToken& p : pattern.tokens) {
    std::string piece;
    switch (p.kind) {
      case PatternToken::Kind::Literal:
        piece = p.text;
        break;
      case PatternToken::Kind::Variable:
      case PatternToken::Kind::SlotRef: {
        auto it = bindings.find(p.text);
        if (it == bindings.end()) return std::nullopt;
        piece = it->second;
        break;
      }
      case PatternToken::Kind::Integer:
      case PatternToken::Kind::Iteration:
        return std::nullopt;
    }
    if (prev_word && p.word) out += ' ';
    out += piece;
    prev_word = p.word;
  }
  return out;
}

}  // namespace plancog
