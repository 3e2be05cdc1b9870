#include "lexer.hpp"

#include <cctype>

namespace idt {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k && i < text.size(); ++j, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  int lastLine = 1, lastCol = 1;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.span.line = line;
    tok.span.col = col;
    size_t start = i;
    if (identStart(c)) {
      while (i < text.size() && identChar(text[i])) advance(1);
      tok.t = Tok::Ident;
      tok.text = text.substr(start, i - start);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
      tok.t = Tok::Num;
      tok.text = text.substr(start, i - start);
      if (tok.text.size() > 6) throw SyntaxError(tok.span, {"number below 1000000"}, "numeral too large: " + tok.text);
      tok.num = std::stol(tok.text);
    } else if (c == '\'') {
      if (i + 1 < text.size() && text[i + 1] == '*') {
        advance(2);
        tok.t = Tok::Sym;
        tok.text = "'*";
      } else if (i + 1 < text.size() && text[i + 1] == '1') {
        advance(2);
        tok.t = Tok::Tag;
        tok.text = "1";
      } else if (i + 1 < text.size() && identStart(text[i + 1])) {
        advance(1);
        size_t s = i;
        while (i < text.size() &&
               (identChar(text[i]) || (text[i] == '-' && i + 1 < text.size() && identChar(text[i + 1]))))
          advance(1);
        tok.t = Tok::Tag;
        tok.text = text.substr(s, i - s);
      } else {
        tok.span.endLine = line;
        tok.span.endCol = col;
        throw SyntaxError(tok.span, {"tag name"}, "expected a tag name after '");
      }
    } else {
      static const char* two[] = {"->", "=>", "=="};
      bool matched = false;
      for (const char* s : two) {
        if (text.compare(i, 2, s) == 0) {
          tok.t = Tok::Sym;
          tok.text = s;
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static const std::string single = "()[]{}<>,;:.\\=*";
        if (single.find(c) == std::string::npos) {
          tok.span.endLine = line;
          tok.span.endCol = col;
          throw SyntaxError(tok.span, {}, std::string("unexpected character '") + c + "'");
        }
        tok.t = Tok::Sym;
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    tok.span.endLine = line;
    tok.span.endCol = col - 1;
    lastLine = line;
    lastCol = col > 1 ? col - 1 : 1;
    out.push_back(std::move(tok));
  }
  Token end;
  end.t = Tok::End;
  end.span = Span{lastLine, lastCol, lastLine, lastCol};
  out.push_back(end);
  return out;
}

}  // namespace idt
