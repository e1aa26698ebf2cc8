#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plancog {

enum class TokenKind {
  Keyword,
  Identifier,
  IntegerLiteral,
  RealLiteral,
  Operator,
  Punctuation,
  Comment,
  End,
};

std::string_view to_string(TokenKind kind);

// `text` is the token content (comment delimiters stripped, keywords
// upper-cased); `offset`/`length` address the raw lexeme in the source.
struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Raised for lexical and syntactic errors. `expected` is empty for lexical
// and semantic (declaration) errors.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& message,
              std::vector<std::string> expected = {});

  int line() const { return line_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  std::vector<std::string> expected_;
};

bool is_keyword(std::string_view word);

// Comments are kept as Comment tokens. The trailing End token is not part of
// the returned list.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// AST

enum class ScalarType { Integer, Real, Boolean };

std::string_view to_string(ScalarType type);

enum class ExprKind { IntLit, RealLit, BoolLit, Var, Unary, Binary };

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  // Operator spelling for Unary/Binary ("+", "<>", "DIV", "NOT", ...),
  // identifier for Var, literal spelling for literals.
  std::string op;
  std::int64_t int_value = 0;
  double real_value = 0.0;
  bool bool_value = false;
  std::vector<Expr> args;
};

enum class StmtKind {
  Assign,
  Readln,
  Writeln,
  Repeat,
  While,
  For,
  If,
  Compound,
  Hole,
};

std::string_view to_string(StmtKind kind);

struct Stmt {
  StmtKind kind = StmtKind::Compound;
  int line = 0;
  // Pre-order index over the whole program body; stable identity for
  // analyses that need to tell apart statements sharing a line.
  int id = -1;
  // Assign/Readln/For: the variable written.
  std::string target;
  // Assign: value. Writeln: argument. Repeat/While/If: condition. For: lower
  // bound.
  Expr expr;
  // For: upper bound.
  Expr limit;
  // Loop/compound body, or the then-branch of If (always one statement).
  std::vector<Stmt> body;
  // Else-branch of If (zero or one statement).
  std::vector<Stmt> orelse;
  // Repeat: line of UNTIL. Compound: line of END.
  int end_line = 0;
  // Source span of the statement's tokens.
  std::size_t begin_offset = 0;
  std::size_t end_offset = 0;
};

struct Declaration {
  std::string name;
  ScalarType type = ScalarType::Integer;
  int line = 0;
};

struct Comment {
  int line = 0;
  std::string text;
};

struct Program {
  std::string name;
  std::vector<std::string> params;
  std::vector<Declaration> declarations;
  std::vector<Stmt> body;
  std::vector<Comment> comments;
  int begin_line = 0;
  int end_line = 0;

  const Declaration* find_declaration(std::string_view name) const;
  // Pre-order list of every statement (compound blocks included).
  std::vector<const Stmt*> statements() const;
  const Stmt* statement_by_id(int id) const;
  int statement_count() const;
};

struct ParseOptions {
  // Accept `?` as a hole statement.
  bool allow_hole = false;
};

Program parse(std::string_view source, ParseOptions options = {});

// Canonical layout: two-space indentation, one statement per line.
std::string pretty_print(const Program& program);
std::string pretty_print(const Stmt& stmt);
std::string pretty_print(const Expr& expr);

// Compact form used by cue payloads and pattern matching: no whitespace except
// around word operators, e.g. "Count:=Count+1".
std::string compact_text(const Expr& expr);
std::string compact_text(const Stmt& stmt);

// Ignores line numbers, statement ids and comments; identifier comparison is
// case-insensitive.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const Program& a, const Program& b);

bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

// Variables read by an expression, in first-occurrence order.
std::vector<std::string> referenced_variables(const Expr& expr);

struct BlankedProgram {
  std::string original;
  int blank_line = 0;
  std::string blanked_source;
  // The statement that was erased, in compact form.
  std::string erased_text;
  Program context;
};

// Erases the simple statement (assignment, READLN, WRITELN) on `line`.
BlankedProgram blank_line(std::string_view source, int line);

// Line carrying a `{* line to fill in}` marker comment, or 0.
int marked_line(const Program& program);

}  // namespace plancog
