#pragma once

#include <string>
#include <vector>

#include "idt/surface.hpp"

namespace idt {

enum class Tok { Ident, Num, Tag, Sym, End };

struct Token {
  Tok t;
  std::string text;
  long num = 0;
  Span span;
};

/** Splits source text into tokens; `--` starts a line comment. */
std::vector<Token> lex(const std::string& text);

}  // namespace idt
