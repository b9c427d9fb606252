#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "mathcast/error.hpp"
#include "mathcast/token.hpp"

namespace mathcast {
namespace {

const std::set<std::string, std::less<>> kRelationCommands = {
    "\\leq",      "\\le",     "\\geq",   "\\ge",      "\\neq",
    "\\ne",       "\\in",     "\\notin", "\\to",      "\\downarrow",
    "\\uparrow",  "\\searrow", "\\nearrow", "\\approx", "\\sim",
    "\\simeq",    "\\equiv",  "\\ll",    "\\gg",      "\\subset",
    "\\subseteq",
};

const std::set<std::string, std::less<>> kIgnoredCommands = {
    "\\quad", "\\qquad", "\\displaystyle", "\\textstyle", "\\limits",
    "\\nolimits",
};

bool is_open(char c) { return c == '(' || c == '[' || c == '{'; }
bool is_close(char c) { return c == ')' || c == ']' || c == '}'; }

char matching_open(const std::string& close) {
  if (close == ")") return '(';
  if (close == "]") return '[';
  if (close == "}") return '{';
  return '\\';
}

struct OpenEntry {
  std::string text;
  std::size_t position;
  bool sized;  // opened by \left
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) step();
    if (!stack_.empty()) {
      throw Error(ErrorCode::kUnbalancedDelimiter,
                  "unclosed '" + stack_.back().text + "'", stack_.back().position);
    }
    return std::move(out_);
  }

 private:
  void emit(TokenKind kind, std::string text, std::size_t at) {
    out_.push_back(Token{kind, std::move(text), at});
  }

  void skip_spaces() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void open(std::string text, std::size_t at, bool sized) {
    stack_.push_back({text, at, sized});
    emit(TokenKind::kOpenDelim, std::move(text), at);
  }

  void close(std::string text, std::size_t at, bool sized) {
    if (stack_.empty()) {
      throw Error(ErrorCode::kUnbalancedDelimiter, "unexpected '" + text + "'", at);
    }
    const OpenEntry& top = stack_.back();
    if (!sized && !top.sized) {
      bool ok = (text == "\\}" && top.text == "\\{") ||
                (text.size() == 1 && top.text.size() == 1 && matching_open(text) == top.text[0]);
      if (!ok) {
        throw Error(ErrorCode::kUnbalancedDelimiter,
                    "'" + text + "' does not close '" + top.text + "'", at);
      }
    } else if (sized != top.sized) {
      throw Error(ErrorCode::kUnbalancedDelimiter, "\\left/\\right mismatch", at);
    }
    stack_.pop_back();
    emit(TokenKind::kCloseDelim, std::move(text), at);
  }

  // Delimiter after \left or \right.
  void sized_delimiter(bool left, std::size_t at) {
    skip_spaces();
    if (pos_ >= src_.size()) {
      throw Error(ErrorCode::kUnbalancedDelimiter, "missing delimiter", at);
    }
    std::size_t start = pos_;
    std::string text;
    if (src_[pos_] == '\\' && pos_ + 1 < src_.size() &&
        (src_[pos_ + 1] == '{' || src_[pos_ + 1] == '}' || src_[pos_ + 1] == '|')) {
      text = std::string(src_.substr(pos_, 2));
      pos_ += 2;
    } else {
      char c = src_[pos_];
      if (!(is_open(c) || is_close(c) || c == '|' || c == '.')) {
        throw Error(ErrorCode::kIllegalCharacter,
                    std::string("bad sized delimiter '") + c + "'", pos_);
      }
      text = std::string(1, c);
      ++pos_;
    }
    if (left) {
      open(text, start, true);
    } else {
      close(text, start, true);
    }
  }

  void command(std::size_t start) {
    std::size_t p = pos_ + 1;
    if (p >= src_.size()) {
      throw Error(ErrorCode::kIllegalCharacter, "trailing backslash", start);
    }
    char c = src_[p];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (p < src_.size() && std::isalpha(static_cast<unsigned char>(src_[p]))) ++p;
      std::string name(src_.substr(pos_, p - pos_));
      pos_ = p;
      if (kIgnoredCommands.count(name)) return;
      if (name == "\\mathrm") {
        std::size_t save = pos_;
        skip_spaces();
        if (src_.substr(pos_, 3) == "{d}") {
          pos_ += 3;
          emit(TokenKind::kDifferential, "\\mathrm{d}", start);
          return;
        }
        pos_ = save;
      }
      if (name == "\\left" || name == "\\right") {
        emit(TokenKind::kCommand, name, start);
        sized_delimiter(name == "\\left", start);
        return;
      }
      if (kRelationCommands.count(name)) {
        emit(TokenKind::kRelation, name, start);
        return;
      }
      emit(TokenKind::kCommand, name, start);
      return;
    }
    pos_ = p + 1;
    switch (c) {
      case ',': case ';': case '!': case ':': case ' ':
        return;
      case '{':
        open("\\{", start, false);
        return;
      case '}':
        close("\\}", start, false);
        return;
      case '|':
        emit(TokenKind::kOperatorSymbol, "\\|", start);
        return;
      default:
        throw Error(ErrorCode::kIllegalCharacter,
                    std::string("unsupported escape '\\") + c + "'", start);
    }
  }

  void step() {
    char c = src_[pos_];
    std::size_t start = pos_;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
      return;
    }
    if (c == '\\') {
      command(start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      emit(TokenKind::kIdentifier, std::string(1, c), start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t p = pos_;
      while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
      if (p + 1 < src_.size() && src_[p] == '.' && std::isdigit(static_cast<unsigned char>(src_[p + 1]))) {
        ++p;
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
      }
      emit(TokenKind::kNumber, std::string(src_.substr(pos_, p - pos_)), start);
      pos_ = p;
      return;
    }
    ++pos_;
    switch (c) {
      case '(': case '[': case '{':
        open(std::string(1, c), start, false);
        return;
      case ')': case ']': case '}':
        close(std::string(1, c), start, false);
        return;
      case '+': case '-': case '*': case '/': case '!': case '|': case '.':
        emit(TokenKind::kOperatorSymbol, std::string(1, c), start);
        return;
      case '=': case '<': case '>':
        emit(TokenKind::kRelation, std::string(1, c), start);
        return;
      case '\'': {
        if (out_.empty() || (out_.back().kind != TokenKind::kCommand &&
                             out_.back().kind != TokenKind::kIdentifier &&
                             out_.back().kind != TokenKind::kPrime)) {
          throw Error(ErrorCode::kIllegalCharacter,
                      "prime must follow a command or identifier", start);
        }
        emit(TokenKind::kPrime, "'", start);
        return;
      }
      case '_':
        emit(TokenKind::kSubscriptMarker, "_", start);
        return;
      case '^':
        emit(TokenKind::kSuperscriptMarker, "^", start);
        return;
      case ',':
        emit(TokenKind::kComma, ",", start);
        return;
      case '@':
        emit(TokenKind::kAt, "@", start);
        return;
      case '$': {
        std::size_t p = pos_;
        bool wrap = p < src_.size() && src_[p] == '(';
        if (wrap) ++p;
        std::size_t digits = p;
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
        if (p == digits || (wrap && (p >= src_.size() || src_[p] != ')'))) {
          throw Error(ErrorCode::kIllegalCharacter, "malformed placeholder", start);
        }
        if (wrap) ++p;
        emit(TokenKind::kPlaceholder, std::string(src_.substr(start, p - start)), start);
        pos_ = p;
        return;
      }
      default:
        throw Error(ErrorCode::kIllegalCharacter,
                    std::string("illegal character '") + c + "'", start);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<Token> out_;
  std::vector<OpenEntry> stack_;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kCommand: return "command";
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kNumber: return "number";
    case TokenKind::kRelation: return "relation";
    case TokenKind::kOpenDelim: return "open-delim";
    case TokenKind::kCloseDelim: return "close-delim";
    case TokenKind::kOperatorSymbol: return "operator-symbol";
    case TokenKind::kPrime: return "prime";
    case TokenKind::kSubscriptMarker: return "subscript-marker";
    case TokenKind::kSuperscriptMarker: return "superscript-marker";
    case TokenKind::kComma: return "comma";
    case TokenKind::kDifferential: return "differential";
    case TokenKind::kAt: return "at";
    case TokenKind::kPlaceholder: return "placeholder";
  }
  return "?";
}

bool is_relation_command(std::string_view command) {
  return kRelationCommands.count(command) > 0;
}

std::vector<Token> tokenize(std::string_view source) {
  return Tokenizer(source).run();
}

}  // namespace mathcast
