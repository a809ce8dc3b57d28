// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fav/ast.hpp"

namespace fav::detail {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

struct LexOptions {
  bool internal_names = false;  // accept `$` and `::` inside identifiers
};

struct Lexed {
  std::vector<Token> tokens;
  std::vector<std::string> hash_comments;  // `#` lines, without the `#`
};

Lexed lex(std::string_view src, const LexOptions& opts);

bool is_keyword(std::string_view s);

/// Recursive-descent parser shared by the FML, program, and spec front ends.
class Parser {
 public:
  Parser(std::vector<Token> toks, bool allow_fail) : toks_(std::move(toks)), allow_fail_(allow_fail) {}

  const Token& peek(std::size_t k = 0) const;
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view text, std::size_t k = 0) const;
  bool is_ident(std::size_t k = 0) const;
  Token next();
  bool accept(std::string_view text);
  Token expect(std::string_view text);
  std::string expect_ident();
  [[noreturn]] void fail_here(const std::string& msg) const;

  bool at_type() const;
  Type parse_type(bool allow_void);
  std::vector<Param> parse_params();
  std::vector<Stmt> parse_block();
  Stmt parse_stmt();
  Expr parse_expr();
  std::int64_t parse_signed_int();

  /// Top-level declaration after its type has been read.
  struct TopLevel {
    enum Kind { Record, Global, Function } kind;
    RecordDecl record;
    GlobalDecl global;
    FunctionDecl function;
  };
  TopLevel parse_top_level();
  RecordDecl parse_record_body(std::string name, SourceLoc loc);

 private:
  Expr parse_binary(int level);
  Expr parse_unary();
  Expr parse_postfix();
  Expr parse_primary();
  std::vector<Expr> parse_args();

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool allow_fail_;
};

}  // namespace fav::detail
