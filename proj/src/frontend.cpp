#include "plancog/frontend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace plancog {

namespace {

constexpr std::array<std::string_view, 25> kKeywords = {
    "PROGRAM", "VAR",     "BEGIN",   "END",     "REPEAT", "UNTIL", "WHILE",
    "DO",      "FOR",     "TO",      "IF",      "THEN",   "ELSE",  "READLN",
    "WRITELN", "INTEGER", "REAL",    "BOOLEAN", "NOT",    "AND",   "OR",
    "DIV",     "MOD",     "TRUE",    "FALSE"};

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntegerLiteral: return "integer-literal";
    case TokenKind::RealLiteral: return "real-literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Comment: return "comment";
    case TokenKind::End: return "end";
  }
  return "?";
}

std::string_view to_string(ScalarType type) {
  switch (type) {
    case ScalarType::Integer: return "integer";
    case ScalarType::Real: return "real";
    case ScalarType::Boolean: return "boolean";
  }
  return "?";
}

std::string_view to_string(StmtKind kind) {
  switch (kind) {
    case StmtKind::Assign: return "assignment";
    case StmtKind::Readln: return "readln";
    case StmtKind::Writeln: return "writeln";
    case StmtKind::Repeat: return "repeat";
    case StmtKind::While: return "while";
    case StmtKind::For: return "for";
    case StmtKind::If: return "if";
    case StmtKind::Compound: return "compound";
    case StmtKind::Hole: return "hole";
  }
  return "?";
}

SyntaxError::SyntaxError(int line, const std::string& message,
                         std::vector<std::string> expected)
    : std::runtime_error("line " + std::to_string(line) + ": " + message +
                         (expected.empty()
                              ? std::string()
                              : " (expected " + join(expected, ", ") + ")")),
      line_(line),
      expected_(std::move(expected)) {}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_keyword(std::string_view word) {
  const std::string upper = to_upper(word);
  return std::find(kKeywords.begin(), kKeywords.end(), upper) != kKeywords.end();
}

// ---------------------------------------------------------------------------
// Lexer

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int line = 1;
  auto push = [&](TokenKind kind, std::string text, std::size_t start, int at) {
    tokens.push_back(Token{kind, std::move(text), at, start, i - start});
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    const int start_line = line;

    if (c == '{' || (c == '(' && i + 1 < src.size() && src[i + 1] == '*')) {
      const bool brace = c == '{';
      i += brace ? 1 : 2;
      const std::size_t body = i;
      std::size_t close = std::string_view::npos;
      while (i < src.size()) {
        if (brace ? src[i] == '}' : (src[i] == '*' && i + 1 < src.size() && src[i + 1] == ')')) {
          close = i;
          break;
        }
        if (src[i] == '\n') ++line;
        ++i;
      }
      if (close == std::string_view::npos)
        throw SyntaxError(start_line, "unterminated comment");
      i += brace ? 1 : 2;
      push(TokenKind::Comment, trim(src.substr(body, close - body)), start, start_line);
      continue;
    }

    if (is_ident_start(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      if (is_keyword(word))
        push(TokenKind::Keyword, to_upper(word), start, start_line);
      else
        push(TokenKind::Identifier, std::move(word), start, start_line);
      continue;
    }

    if (is_digit(c)) {
      while (i < src.size() && is_digit(src[i])) ++i;
      bool real = false;
      if (i + 1 < src.size() && src[i] == '.' && is_digit(src[i + 1])) {
        real = true;
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          real = true;
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      push(real ? TokenKind::RealLiteral : TokenKind::IntegerLiteral,
           std::string(src.substr(start, i - start)), start, start_line);
      continue;
    }

    auto two = [&](std::string_view op) {
      return src.substr(i, 2) == op;
    };
    if (two(":=") || two("<>") || two("<=") || two(">=")) {
      i += 2;
      push(TokenKind::Operator, std::string(src.substr(start, 2)), start, start_line);
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '=': case '<': case '>':
        ++i;
        push(TokenKind::Operator, std::string(1, c), start, start_line);
        continue;
      case ';': case ',': case ':': case '.': case '(': case ')': case '?':
        ++i;
        push(TokenKind::Punctuation, std::string(1, c), start, start_line);
        continue;
      default:
        break;
    }
    throw SyntaxError(start_line, std::string("illegal character '") + c + "'");
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view source, ParseOptions options)
      : options_(options), source_size_(source.size()) {
    for (auto& tok : tokenize(source)) {
      if (tok.kind == TokenKind::Comment)
        comments_.push_back(Comment{tok.line, tok.text});
      else
        tokens_.push_back(std::move(tok));
    }
    Token end;
    end.kind = TokenKind::End;
    end.line = tokens_.empty() ? 1 : tokens_.back().line;
    end.offset = source_size_;
    tokens_.push_back(end);
  }

  Program parse_program() {
    Program p;
    expect_keyword("PROGRAM");
    p.name = expect_identifier("program name").text;
    if (accept_punct("(")) {
      p.params.push_back(expect_identifier("parameter").text);
      while (accept_punct(",")) p.params.push_back(expect_identifier("parameter").text);
      expect_punct(")");
    }
    expect_punct(";");
    if (accept_keyword("VAR")) {
      do {
        parse_declaration_group(p);
      } while (peek().kind == TokenKind::Identifier);
    }
    program_ = &p;
    p.begin_line = peek().line;
    expect_keyword("BEGIN");
    p.body = parse_statement_list();
    p.end_line = peek().line;
    expect_keyword("END", {";", "END"});
    expect_punct(".");
    if (peek().kind != TokenKind::End)
      throw SyntaxError(peek().line, "unexpected text after END.", {"end of input"});
    p.comments = comments_;
    int next_id = 0;
    number(p.body, next_id);
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  bool is_keyword(std::string_view kw) const {
    return peek().kind == TokenKind::Keyword && peek().text == kw;
  }
  bool is_punct(std::string_view p) const {
    return peek().kind == TokenKind::Punctuation && peek().text == p;
  }
  bool is_operator(std::string_view p) const {
    return peek().kind == TokenKind::Operator && peek().text == p;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, "unexpected " + found, std::move(expected));
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    advance();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    advance();
    return true;
  }
  const Token& expect_keyword(std::string_view kw, std::vector<std::string> expected = {}) {
    if (!is_keyword(kw)) fail(expected.empty() ? std::vector<std::string>{std::string(kw)} : expected);
    return advance();
  }
  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) fail({std::string(p)});
    return advance();
  }
  const Token& expect_operator(std::string_view p) {
    if (!is_operator(p)) fail({std::string(p)});
    return advance();
  }
  const Token& expect_identifier(std::string_view what) {
    if (peek().kind != TokenKind::Identifier) fail({std::string(what)});
    return advance();
  }

  void parse_declaration_group(Program& p) {
    std::vector<const Token*> names;
    names.push_back(&expect_identifier("identifier"));
    while (accept_punct(",")) names.push_back(&expect_identifier("identifier"));
    expect_punct(":");
    ScalarType type;
    if (accept_keyword("INTEGER"))
      type = ScalarType::Integer;
    else if (accept_keyword("REAL"))
      type = ScalarType::Real;
    else if (accept_keyword("BOOLEAN"))
      type = ScalarType::Boolean;
    else
      fail({"INTEGER", "REAL", "BOOLEAN"});
    expect_punct(";");
    for (const Token* name : names) {
      if (p.find_declaration(name->text))
        throw SyntaxError(name->line, "duplicate declaration of '" + name->text + "'");
      p.declarations.push_back(Declaration{name->text, type, name->line});
    }
  }

  // Resolves a use to the declared spelling.
  std::string resolve(const Token& tok) const {
    const Declaration* decl = program_->find_declaration(tok.text);
    if (!decl) throw SyntaxError(tok.line, "use of undeclared identifier '" + tok.text + "'");
    return decl->name;
  }

  bool starts_statement() const {
    const Token& t = peek();
    if (t.kind == TokenKind::Identifier) return true;
    if (t.kind == TokenKind::Keyword)
      return t.text == "READLN" || t.text == "WRITELN" || t.text == "REPEAT" ||
             t.text == "WHILE" || t.text == "FOR" || t.text == "IF" || t.text == "BEGIN";
    return options_.allow_hole && is_punct("?");
  }

  // Statements separated by ';'; empty statements are dropped.
  std::vector<Stmt> parse_statement_list() {
    std::vector<Stmt> out;
    for (;;) {
      if (starts_statement()) out.push_back(parse_statement());
      if (!accept_punct(";")) break;
    }
    return out;
  }

  Stmt parse_statement() {
    const Token& first = peek();
    Stmt s;
    s.line = first.line;
    s.begin_offset = first.offset;
    if (first.kind == TokenKind::Identifier) {
      s.kind = StmtKind::Assign;
      s.target = resolve(advance());
      expect_operator(":=");
      s.expr = parse_expr();
    } else if (accept_keyword("READLN")) {
      s.kind = StmtKind::Readln;
      expect_punct("(");
      s.target = resolve(expect_identifier("variable"));
      expect_punct(")");
    } else if (accept_keyword("WRITELN")) {
      s.kind = StmtKind::Writeln;
      expect_punct("(");
      s.expr = parse_expr();
      expect_punct(")");
    } else if (accept_keyword("REPEAT")) {
      s.kind = StmtKind::Repeat;
      s.body = parse_statement_list();
      s.end_line = peek().line;
      expect_keyword("UNTIL", {";", "UNTIL"});
      s.expr = parse_expr();
    } else if (accept_keyword("WHILE")) {
      s.kind = StmtKind::While;
      s.expr = parse_expr();
      expect_keyword("DO");
      s.body.push_back(parse_required_statement());
    } else if (accept_keyword("FOR")) {
      s.kind = StmtKind::For;
      s.target = resolve(expect_identifier("control variable"));
      expect_operator(":=");
      s.expr = parse_expr();
      expect_keyword("TO");
      s.limit = parse_expr();
      expect_keyword("DO");
      s.body.push_back(parse_required_statement());
    } else if (accept_keyword("IF")) {
      s.kind = StmtKind::If;
      s.expr = parse_expr();
      expect_keyword("THEN");
      s.body.push_back(parse_required_statement());
      if (accept_keyword("ELSE")) s.orelse.push_back(parse_required_statement());
    } else if (accept_keyword("BEGIN")) {
      s.kind = StmtKind::Compound;
      s.body = parse_statement_list();
      s.end_line = peek().line;
      expect_keyword("END", {";", "END"});
    } else if (options_.allow_hole && accept_punct("?")) {
      s.kind = StmtKind::Hole;
    } else {
      fail({"statement"});
    }
    const Token& last = tokens_[pos_ - 1];
    s.end_offset = last.offset + last.length;
    return s;
  }

  Stmt parse_required_statement() {
    if (!starts_statement()) fail({"statement"});
    return parse_statement();
  }

  static bool is_relational(const Token& t) {
    if (t.kind != TokenKind::Operator) return false;
    return t.text == "=" || t.text == "<>" || t.text == "<" || t.text == "<=" ||
           t.text == ">" || t.text == ">=";
  }

  Expr parse_expr() {
    Expr lhs = parse_simple();
    if (is_relational(peek())) {
      std::string op = advance().text;
      Expr rhs = parse_simple();
      return binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_simple() {
    Expr lhs = parse_term();
    for (;;) {
      if (is_operator("+") || is_operator("-") || is_keyword("OR")) {
        std::string op = advance().text;
        lhs = binary(std::move(op), std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (is_operator("*") || is_operator("/") || is_keyword("DIV") ||
          is_keyword("MOD") || is_keyword("AND")) {
        std::string op = advance().text;
        lhs = binary(std::move(op), std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    const Token& t = peek();
    Expr e;
    switch (t.kind) {
      case TokenKind::IntegerLiteral: {
        e.kind = ExprKind::IntLit;
        e.op = t.text;
        try {
          e.int_value = std::stoll(t.text);
        } catch (const std::out_of_range&) {
          throw SyntaxError(t.line, "integer literal out of range '" + t.text + "'");
        }
        advance();
        return e;
      }
      case TokenKind::RealLiteral:
        e.kind = ExprKind::RealLit;
        e.op = t.text;
        e.real_value = std::stod(t.text);
        advance();
        return e;
      case TokenKind::Identifier:
        e.kind = ExprKind::Var;
        e.op = resolve(t);
        advance();
        return e;
      default:
        break;
    }
    if (is_keyword("TRUE") || is_keyword("FALSE")) {
      e.kind = ExprKind::BoolLit;
      e.bool_value = is_keyword("TRUE");
      e.op = advance().text;
      return e;
    }
    if (is_keyword("NOT") || is_operator("-") || is_operator("+")) {
      e.kind = ExprKind::Unary;
      e.op = advance().text;
      e.args.push_back(parse_factor());
      return e;
    }
    if (accept_punct("(")) {
      e = parse_expr();
      expect_punct(")");
      return e;
    }
    fail({"expression"});
  }

  static Expr binary(std::string op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.op = std::move(op);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  static void number(std::vector<Stmt>& stmts, int& next) {
    for (Stmt& s : stmts) {
      s.id = next++;
      number(s.body, next);
      number(s.orelse, next);
    }
  }

  ParseOptions options_;
  std::size_t source_size_;
  std::vector<Token> tokens_;
  std::vector<Comment> comments_;
  std::size_t pos_ = 0;
  const Program* program_ = nullptr;
};

void collect(const std::vector<Stmt>& stmts, std::vector<const Stmt*>& out) {
  for (const Stmt& s : stmts) {
    out.push_back(&s);
    collect(s.body, out);
    collect(s.orelse, out);
  }
}

}  // namespace

const Declaration* Program::find_declaration(std::string_view name) const {
  for (const Declaration& d : declarations)
    if (iequals(d.name, name)) return &d;
  return nullptr;
}

std::vector<const Stmt*> Program::statements() const {
  std::vector<const Stmt*> out;
  collect(body, out);
  return out;
}

const Stmt* Program::statement_by_id(int id) const {
  for (const Stmt* s : statements())
    if (s->id == id) return s;
  return nullptr;
}

int Program::statement_count() const { return static_cast<int>(statements().size()); }

Program parse(std::string_view source, ParseOptions options) {
  Parser parser(source, options);
  return parser.parse_program();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 4;
  if (e.kind != ExprKind::Binary) return 5;
  const std::string& op = e.op;
  if (op == "*" || op == "/" || op == "DIV" || op == "MOD" || op == "AND") return 3;
  if (op == "+" || op == "-" || op == "OR") return 2;
  return 1;
}

bool is_word_op(std::string_view op) {
  return !op.empty() && std::isalpha(static_cast<unsigned char>(op[0]));
}

std::string render(const Expr& e, bool spaced) {
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::RealLit:
    case ExprKind::BoolLit:
    case ExprKind::Var:
      return e.op;
    case ExprKind::Unary: {
      std::string inner = render(e.args[0], spaced);
      if (precedence(e.args[0]) < 4) inner = "(" + inner + ")";
      return is_word_op(e.op) ? e.op + " " + inner : e.op + inner;
    }
    case ExprKind::Binary: {
      const int p = precedence(e);
      std::string lhs = render(e.args[0], spaced);
      std::string rhs = render(e.args[1], spaced);
      if (precedence(e.args[0]) < p) lhs = "(" + lhs + ")";
      if (precedence(e.args[1]) <= p) rhs = "(" + rhs + ")";
      const bool pad = spaced || is_word_op(e.op);
      return lhs + (pad ? " " : "") + e.op + (pad ? " " : "") + rhs;
    }
  }
  return {};
}

void print_stmt(const Stmt& s, int indent, std::vector<std::string>& lines) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto print_list = [&](const std::vector<Stmt>& list, int level) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      print_stmt(list[i], level, lines);
      if (i + 1 < list.size()) lines.back() += ";";
    }
  };
  switch (s.kind) {
    case StmtKind::Assign:
      lines.push_back(pad + s.target + " := " + render(s.expr, true));
      break;
    case StmtKind::Readln:
      lines.push_back(pad + "READLN(" + s.target + ")");
      break;
    case StmtKind::Writeln:
      lines.push_back(pad + "WRITELN(" + render(s.expr, true) + ")");
      break;
    case StmtKind::Hole:
      lines.push_back(pad + "?");
      break;
    case StmtKind::Repeat:
      lines.push_back(pad + "REPEAT");
      print_list(s.body, indent + 1);
      lines.push_back(pad + "UNTIL " + render(s.expr, true));
      break;
    case StmtKind::While:
      lines.push_back(pad + "WHILE " + render(s.expr, true) + " DO");
      print_stmt(s.body.front(), indent + 1, lines);
      break;
    case StmtKind::For:
      lines.push_back(pad + "FOR " + s.target + " := " + render(s.expr, true) + " TO " +
                      render(s.limit, true) + " DO");
      print_stmt(s.body.front(), indent + 1, lines);
      break;
    case StmtKind::If:
      lines.push_back(pad + "IF " + render(s.expr, true) + " THEN");
      print_stmt(s.body.front(), indent + 1, lines);
      if (!s.orelse.empty()) {
        lines.push_back(pad + "ELSE");
        print_stmt(s.orelse.front(), indent + 1, lines);
      }
      break;
    case StmtKind::Compound:
      lines.push_back(pad + "BEGIN");
      print_list(s.body, indent + 1);
      lines.push_back(pad + "END");
      break;
  }
}

}  // namespace

std::string pretty_print(const Expr& expr) { return render(expr, true); }

std::string pretty_print(const Stmt& stmt) {
  std::vector<std::string> lines;
  print_stmt(stmt, 0, lines);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

std::string pretty_print(const Program& p) {
  std::ostringstream out;
  out << "PROGRAM " << p.name;
  if (!p.params.empty()) out << "(" << join(p.params, ", ") << ")";
  out << ";\n";
  if (!p.declarations.empty()) {
    out << "VAR\n";
    // Consecutive declarations of one type share a line.
    for (std::size_t i = 0; i < p.declarations.size();) {
      std::size_t j = i;
      std::vector<std::string> names;
      while (j < p.declarations.size() && p.declarations[j].type == p.declarations[i].type &&
             p.declarations[j].line == p.declarations[i].line)
        names.push_back(p.declarations[j++].name);
      out << "  " << join(names, ", ") << ": " << to_upper(to_string(p.declarations[i].type))
          << ";\n";
      i = j;
    }
  }
  if (p.body.empty()) {
    out << "BEGIN END.\n";
    return out.str();
  }
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < p.body.size(); ++i) {
    print_stmt(p.body[i], 1, lines);
    if (i + 1 < p.body.size()) lines.back() += ";";
  }
  out << "BEGIN\n";
  for (const auto& l : lines) out << l << "\n";
  out << "END.\n";
  return out.str();
}

std::string compact_text(const Expr& expr) { return render(expr, false); }

std::string compact_text(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Assign: return s.target + ":=" + compact_text(s.expr);
    case StmtKind::Readln: return "READLN(" + s.target + ")";
    case StmtKind::Writeln: return "WRITELN(" + compact_text(s.expr) + ")";
    case StmtKind::Hole: return "?";
    case StmtKind::Repeat: return "REPEAT...UNTIL " + compact_text(s.expr);
    case StmtKind::While: return "WHILE " + compact_text(s.expr) + " DO";
    case StmtKind::For:
      return "FOR " + s.target + ":=" + compact_text(s.expr) + " TO " + compact_text(s.limit) +
             " DO";
    case StmtKind::If: return "IF " + compact_text(s.expr) + " THEN";
    case StmtKind::Compound: return "BEGIN...END";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Structural equality

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case ExprKind::RealLit:
      if (a.real_value != b.real_value) return false;
      break;
    case ExprKind::BoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case ExprKind::Var:
    case ExprKind::Unary:
    case ExprKind::Binary:
      if (!iequals(a.op, b.op)) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(a.args[i], b.args[i])) return false;
  return true;
}

namespace {

bool lists_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || !iequals(a.target, b.target)) return false;
  switch (a.kind) {
    case StmtKind::Compound:
    case StmtKind::Hole:
    case StmtKind::Readln:
      break;
    case StmtKind::For:
      if (!structurally_equal(a.limit, b.limit)) return false;
      [[fallthrough]];
    default:
      if (!structurally_equal(a.expr, b.expr)) return false;
  }
  return lists_equal(a.body, b.body) && lists_equal(a.orelse, b.orelse);
}

bool structurally_equal(const Program& a, const Program& b) {
  if (!iequals(a.name, b.name) || a.params.size() != b.params.size() ||
      a.declarations.size() != b.declarations.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (!iequals(a.params[i], b.params[i])) return false;
  for (std::size_t i = 0; i < a.declarations.size(); ++i) {
    if (!iequals(a.declarations[i].name, b.declarations[i].name) ||
        a.declarations[i].type != b.declarations[i].type)
      return false;
  }
  return lists_equal(a.body, b.body);
}

namespace {

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == ExprKind::Var) {
    if (std::find(out.begin(), out.end(), e.op) == out.end()) out.push_back(e.op);
    return;
  }
  for (const Expr& a : e.args) collect_vars(a, out);
}

}  // namespace

std::vector<std::string> referenced_variables(const Expr& expr) {
  std::vector<std::string> out;
  collect_vars(expr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Blanking

BlankedProgram blank_line(std::string_view source, int line) {
  const Program program = parse(source);
  const int line_count = static_cast<int>(std::count(source.begin(), source.end(), '\n')) +
                         (source.empty() || source.back() == '\n' ? 0 : 1);
  if (line < 1 || line > line_count)
    throw std::out_of_range("line " + std::to_string(line) + " is out of range (1.." +
                            std::to_string(line_count) + ")");

  const Stmt* target = nullptr;
  int on_line = 0;
  for (const Stmt* s : program.statements()) {
    if (s->line != line) continue;
    ++on_line;
    target = s;
  }
  if (!target || on_line != 1 ||
      (target->kind != StmtKind::Assign && target->kind != StmtKind::Readln &&
       target->kind != StmtKind::Writeln))
    throw std::invalid_argument("line " + std::to_string(line) + " is not a statement line");

  BlankedProgram out;
  out.original = std::string(source);
  out.blank_line = line;
  out.erased_text = compact_text(*target);
  // Keep newlines inside the erased span so later line numbers are stable.
  std::string hole = "?";
  for (std::size_t i = target->begin_offset; i < target->end_offset; ++i)
    if (source[i] == '\n') hole += '\n';
  out.blanked_source = std::string(source.substr(0, target->begin_offset)) + hole +
                       std::string(source.substr(target->end_offset));
  out.context = parse(out.blanked_source, ParseOptions{.allow_hole = true});
  return out;
}

int marked_line(const Program& program) {
  for (const Comment& c : program.comments)
    if (to_lower(c.text).find("line to fill in") != std::string::npos) return c.line;
  return 0;
}

}  // namespace plancog
