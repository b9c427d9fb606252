#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mathcast {

enum class TokenKind {
  kCommand,
  kIdentifier,
  kNumber,
  kRelation,
  kOpenDelim,
  kCloseDelim,
  kOperatorSymbol,
  kPrime,
  kSubscriptMarker,
  kSuperscriptMarker,
  kComma,
  kDifferential,
  kAt,
  kPlaceholder,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t position = 0;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

// Splits dialect text into tokens. Whitespace and the spacing commands
// \, \; \! \: \quad \qquad are dropped. Throws Error on unbalanced
// delimiters or characters outside the dialect alphabet.
std::vector<Token> tokenize(std::string_view source);

bool is_relation_command(std::string_view command);

}  // namespace mathcast
