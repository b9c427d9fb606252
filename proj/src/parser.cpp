#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "mathcast/error.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {
namespace {

const std::set<std::string, std::less<>> kGreek = {
    "\\alpha",  "\\beta",    "\\gamma",   "\\delta",   "\\epsilon", "\\varepsilon",
    "\\zeta",   "\\eta",     "\\theta",   "\\vartheta", "\\iota",   "\\kappa",
    "\\lambda", "\\mu",      "\\nu",      "\\xi",      "\\rho",     "\\varrho",
    "\\sigma",  "\\varsigma", "\\tau",    "\\upsilon", "\\phi",     "\\varphi",
    "\\chi",    "\\psi",     "\\omega",   "\\Gamma",   "\\Delta",   "\\Theta",
    "\\Lambda", "\\Xi",      "\\Pi",      "\\Sigma",   "\\Upsilon", "\\Phi",
    "\\Psi",    "\\Omega",   "\\ell",     "\\pi",      "\\infty",
};

const std::set<std::string, std::less<>> kOperatorCommands = {
    "\\pm",    "\\mp",   "\\cdot", "\\times", "\\div",   "\\cdots", "\\dots",
    "\\ldots", "\\choose", "\\ast", "\\circ", "\\sum",   "\\prod",  "\\int",
    "\\iint",  "\\oint", "\\lim",  "\\limsup", "\\liminf",
};

const std::set<std::string, std::less<>> kTextCommands = {
    "\\mathrm", "\\mathit", "\\text", "\\operatorname", "\\mathbf", "\\mathsf", "\\mathcal",
};

bool is_ellipsis(const MathNode& n) {
  return n.kind == NodeKind::kOperator &&
         (n.text == "\\cdots" || n.text == "\\dots" || n.text == "\\ldots");
}

void reset_spans(MathNode& node, Span span) {
  node.span = span;
  for (MathNode& child : node.children) reset_spans(child, span);
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const MacroRegistry& registry, ParseOptions options)
      : toks_(tokens), reg_(registry), opt_(options) {}

  MathNode parse_top() {
    MathNode root = parse_chain();
    if (pos_ < toks_.size()) {
      fail(ErrorCode::kParse, "unexpected '" + toks_[pos_].text + "'");
    }
    MathNode& last = root.kind == NodeKind::kRelationChain ? root.children.back() : root;
    while (!last.children.empty() && last.kind == NodeKind::kSequence &&
           (last.children.back().is_operator(",") || last.children.back().is_operator("."))) {
      last.children.pop_back();
    }
    assign_depths(root, 0);
    return root;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& message) const {
    std::size_t at = pos_ < toks_.size() ? toks_[pos_].position : end_offset();
    throw Error(code, message, at);
  }

  std::size_t end_offset() const {
    return toks_.empty() ? 0 : toks_.back().position + toks_.back().text.size();
  }

  const Token* peek(std::size_t k = 0) const {
    return pos_ + k < toks_.size() ? &toks_[pos_ + k] : nullptr;
  }

  bool peek_is(TokenKind kind, std::string_view text = {}) const {
    const Token* t = peek();
    return t && t->kind == kind && (text.empty() || t->text == text);
  }

  const Token& next() {
    if (pos_ >= toks_.size()) fail(ErrorCode::kParse, "unexpected end of input");
    last_end_ = toks_[pos_].position + toks_[pos_].text.size();
    return toks_[pos_++];
  }

  void expect(TokenKind kind, std::string_view text, ErrorCode code = ErrorCode::kParse) {
    if (!peek_is(kind, text)) fail(code, "expected '" + std::string(text) + "'");
    next();
  }

  std::size_t here() const { return pos_ < toks_.size() ? toks_[pos_].position : end_offset(); }

  MathNode finish(MathNode node, std::size_t begin) const {
    node.span = {begin, std::max(begin, last_end_)};
    return node;
  }

  bool at_sequence_end() const {
    const Token* t = peek();
    if (!t) return true;
    if (t->kind == TokenKind::kCloseDelim || t->kind == TokenKind::kRelation) return true;
    if (t->is(TokenKind::kCommand, "\\right")) return true;
    if (abs_depth_ > 0 && t->is(TokenKind::kOperatorSymbol, "|")) return true;
    return false;
  }

  MathNode parse_chain() {
    std::size_t begin = here();
    MathNode first = parse_sequence();
    if (!peek_is(TokenKind::kRelation)) return first;
    MathNode chain = make_node(NodeKind::kRelationChain);
    chain.children.push_back(std::move(first));
    while (peek_is(TokenKind::kRelation)) {
      std::size_t at = here();
      MathNode rel = make_node(NodeKind::kOperator, next().text);
      chain.children.push_back(finish(std::move(rel), at));
      chain.children.push_back(parse_sequence());
    }
    return finish(std::move(chain), begin);
  }

  MathNode parse_sequence() {
    std::size_t begin = here();
    std::vector<MathNode> items;
    while (!at_sequence_end()) {
      MathNode item = parse_item();
      if (is_ellipsis(item) && !items.empty() && reg_.rule_enabled("float-ellipsis") &&
          items.back().kind == NodeKind::kNumber &&
          items.back().text.find('.') != std::string::npos) {
        continue;
      }
      items.push_back(std::move(item));
    }
    MathNode seq = make_node(NodeKind::kSequence);
    seq.children = std::move(items);
    seq.span = seq.children.empty()
                   ? Span{begin, begin}
                   : Span{seq.children.front().span.begin, seq.children.back().span.end};
    return seq;
  }

  // Braced content, or a single atom for scripts.
  MathNode parse_script() {
    if (peek_is(TokenKind::kOpenDelim, "{")) {
      next();
      MathNode content = parse_chain();
      expect(TokenKind::kCloseDelim, "}");
      return content;
    }
    if (at_sequence_end() || peek_is(TokenKind::kSubscriptMarker) ||
        peek_is(TokenKind::kSuperscriptMarker)) {
      fail(ErrorCode::kMalformedSubSup, "missing script");
    }
    MathNode atom = parse_primary();
    return make_sequence({std::move(atom)});
  }

  MathNode brace_content(const std::string& what) {
    if (!peek_is(TokenKind::kOpenDelim, "{")) {
      fail(ErrorCode::kArityMismatch, what + " expects a braced argument");
    }
    next();
    MathNode content = parse_chain();
    expect(TokenKind::kCloseDelim, "}");
    return content;
  }

  // Braced content, or the next item for the bare form (`\sin x`).
  MathNode brace_or_item(const std::string& what) {
    if (peek_is(TokenKind::kOpenDelim, "{")) return brace_content(what);
    if (at_sequence_end()) fail(ErrorCode::kArityMismatch, what + " is missing its argument");
    MathNode item = parse_item();
    return make_sequence({std::move(item)});
  }

  MathNode bracket_content() {
    expect(TokenKind::kOpenDelim, "[");
    MathNode content = parse_chain();
    expect(TokenKind::kCloseDelim, "]");
    return content;
  }

  MathNode parse_item() {
    std::size_t begin = here();
    MathNode node = parse_primary();
    while (const Token* t = peek()) {
      if (t->kind == TokenKind::kPrime) {
        if (node.kind != NodeKind::kIdentifier) fail(ErrorCode::kParse, "misplaced prime");
        next();
        ++node.primes;
        continue;
      }
      if (t->kind != TokenKind::kSubscriptMarker && t->kind != TokenKind::kSuperscriptMarker) break;
      bool is_sub = t->kind == TokenKind::kSubscriptMarker;
      next();
      MathNode script = parse_script();
      if (is_sub && node.kind == NodeKind::kIdentifier && node.children.empty() &&
          node.primes == 0) {
        bool simple = script.kind == NodeKind::kSequence && script.children.size() == 1 &&
                      script.children[0].children.empty() &&
                      (script.children[0].kind == NodeKind::kIdentifier ||
                       script.children[0].kind == NodeKind::kNumber);
        node.text += "_" + (simple ? script.children[0].text : "{" + render(script) + "}");
        node.children.push_back(std::move(script));
        node = finish(std::move(node), begin);
        continue;
      }
      if (node.kind != NodeKind::kSubSup || node.power_on_call) {
        MathNode wrap = make_node(NodeKind::kSubSup);
        wrap.children.push_back(std::move(node));
        node = std::move(wrap);
      }
      if (is_sub) {
        if (node.has_sub) fail(ErrorCode::kMalformedSubSup, "double subscript");
        node.children.insert(node.children.begin() + 1, std::move(script));
        node.has_sub = true;
      } else {
        if (node.has_sup) fail(ErrorCode::kMalformedSubSup, "double superscript");
        node.children.push_back(std::move(script));
        node.has_sup = true;
      }
      node = finish(std::move(node), begin);
    }
    return node;
  }

  MathNode parse_group(Delimiter delim, const std::string& close, std::size_t begin) {
    MathNode group = make_node(NodeKind::kGroup);
    group.delimiter = delim;
    group.children.push_back(parse_chain());
    if (close == "|") {
      expect(TokenKind::kOperatorSymbol, "|", ErrorCode::kUnbalancedDelimiter);
    } else {
      expect(TokenKind::kCloseDelim, close, ErrorCode::kUnbalancedDelimiter);
    }
    group = finish(std::move(group), begin);
    if (delim == Delimiter::kBrace) return maybe_choose(std::move(group));
    return group;
  }

  MathNode maybe_choose(MathNode group) {
    const MathNode& content = group.children[0];
    if (content.kind != NodeKind::kSequence || !reg_.rule_enabled("choose-binomial")) return group;
    int at = -1;
    for (std::size_t i = 0; i < content.children.size(); ++i) {
      if (content.children[i].is_operator("\\choose")) {
        if (at >= 0) return group;
        at = static_cast<int>(i);
      }
    }
    if (at < 0) return group;
    MathNode binom = make_node(NodeKind::kBinomial);
    std::vector<MathNode> top(content.children.begin(), content.children.begin() + at);
    std::vector<MathNode> bottom(content.children.begin() + at + 1, content.children.end());
    binom.children.push_back(make_sequence(std::move(top)));
    binom.children.push_back(make_sequence(std::move(bottom)));
    binom.span = group.span;
    return binom;
  }

  MathNode parse_primary() {
    std::size_t begin = here();
    const Token& t = next();
    switch (t.kind) {
      case TokenKind::kIdentifier:
        return finish(make_node(NodeKind::kIdentifier, t.text), begin);
      case TokenKind::kNumber:
        return finish(make_node(NodeKind::kNumber, t.text), begin);
      case TokenKind::kOpenDelim:
        if (t.text == "(") return parse_group(Delimiter::kParen, ")", begin);
        if (t.text == "[") return parse_group(Delimiter::kBracket, "]", begin);
        if (t.text == "{") return parse_group(Delimiter::kBrace, "}", begin);
        return parse_group(Delimiter::kSetBrace, "\\}", begin);
      case TokenKind::kOperatorSymbol:
        if (t.text == "|") {
          ++abs_depth_;
          MathNode group = parse_group(Delimiter::kAbs, "|", begin);
          --abs_depth_;
          return group;
        }
        return finish(make_node(NodeKind::kOperator, t.text), begin);
      case TokenKind::kComma:
        return finish(make_node(NodeKind::kOperator, ","), begin);
      case TokenKind::kDifferential:
        return parse_differential(begin);
      case TokenKind::kPlaceholder:
        if (!opt_.allow_placeholders) {
          pos_--;
          fail(ErrorCode::kIllegalCharacter, "placeholder outside a template");
        }
        return finish(make_node(NodeKind::kPlaceholder, t.text), begin);
      case TokenKind::kCommand:
        return parse_command(t, begin);
      case TokenKind::kPrime:
        pos_--;
        fail(ErrorCode::kParse, "misplaced prime");
      case TokenKind::kSubscriptMarker:
      case TokenKind::kSuperscriptMarker:
        pos_--;
        fail(ErrorCode::kMalformedSubSup, "script without a base");
      default:
        pos_--;
        fail(ErrorCode::kParse, "unexpected '" + t.text + "'");
    }
  }

  MathNode parse_differential(std::size_t begin) {
    MathNode diff = make_node(NodeKind::kDifferential);
    const Token* v = peek();
    if (v && (v->kind == TokenKind::kIdentifier ||
              (v->kind == TokenKind::kCommand && kGreek.count(v->text)))) {
      diff.text = next().text;
    }
    return finish(std::move(diff), begin);
  }

  MathNode parse_command(const Token& t, std::size_t begin) {
    const std::string& name = t.text;
    if (kGreek.count(name)) return finish(make_node(NodeKind::kIdentifier, name), begin);
    if (kOperatorCommands.count(name)) return finish(make_node(NodeKind::kOperator, name), begin);
    if (name == "\\frac" || name == "\\tfrac" || name == "\\dfrac") {
      MathNode num = brace_content(name);
      MathNode den = brace_content(name);
      if (auto deriv = derivative_fraction(num, den)) return finish(std::move(*deriv), begin);
      MathNode frac = make_node(NodeKind::kFraction, name);
      frac.children.push_back(std::move(num));
      frac.children.push_back(std::move(den));
      return finish(std::move(frac), begin);
    }
    if (name == "\\binom" || name == "\\tbinom" || name == "\\dbinom") {
      MathNode binom = make_node(NodeKind::kBinomial);
      binom.children.push_back(brace_content(name));
      binom.children.push_back(brace_content(name));
      return finish(std::move(binom), begin);
    }
    if (name == "\\sqrt") {
      MathNode call = make_node(NodeKind::kMacroCall, "sqrt");
      call.builtin = true;
      if (peek_is(TokenKind::kOpenDelim, "[")) {
        call.children.push_back(bracket_content());
        call.param_count = 1;
      }
      call.children.push_back(brace_or_item(name));
      return finish(std::move(call), begin);
    }
    if (name == "\\Re" || name == "\\Im") {
      MathNode call = make_node(NodeKind::kMacroCall, name.substr(1));
      call.builtin = true;
      call.children.push_back(brace_or_item(name));
      return finish(std::move(call), begin);
    }
    if (kTextCommands.count(name)) return parse_text_command(name, begin);
    if (name == "\\left") return parse_sized_group(begin);
    if (name == "\\deriv") return parse_deriv(begin);
    if (name == "\\diff") {
      MathNode diff = make_node(NodeKind::kDifferential);
      MathNode var = brace_or_item(name);
      if (var.children.size() != 1 || var.children[0].kind != NodeKind::kIdentifier) {
        fail(ErrorCode::kParse, "\\diff expects a variable");
      }
      diff.text = var.children[0].text;
      return finish(std::move(diff), begin);
    }
    if (const MacroEntry* entry = reg_.find(name.substr(1))) return parse_macro(*entry, begin);
    pos_--;
    fail(ErrorCode::kUnknownMacro, "unknown command " + name);
  }

  MathNode parse_text_command(const std::string& name, std::size_t begin) {
    expect(TokenKind::kOpenDelim, "{");
    std::string word;
    while (peek_is(TokenKind::kIdentifier)) word += next().text;
    expect(TokenKind::kCloseDelim, "}");
    if (word.size() == 1) return finish(make_node(NodeKind::kIdentifier, word), begin);
    if (const MacroEntry* entry = reg_.find(word)) return parse_macro(*entry, begin);
    throw Error(ErrorCode::kUnknownMacro, "unknown function " + name + "{" + word + "}", begin);
  }

  MathNode parse_sized_group(std::size_t begin) {
    const Token& open = next();
    Delimiter delim = Delimiter::kParen;
    if (open.text == "[") delim = Delimiter::kBracket;
    if (open.text == "\\{") delim = Delimiter::kSetBrace;
    if (open.text == "|") delim = Delimiter::kAbs;
    if (open.text == "." || open.text == "{") delim = Delimiter::kBrace;
    MathNode group = make_node(NodeKind::kGroup);
    group.delimiter = delim;
    int saved_abs = abs_depth_;
    abs_depth_ = 0;
    group.children.push_back(parse_chain());
    abs_depth_ = saved_abs;
    expect(TokenKind::kCommand, "\\right", ErrorCode::kUnbalancedDelimiter);
    next();
    return finish(std::move(group), begin);
  }

  static bool is_d(const MathNode& n) {
    return (n.kind == NodeKind::kDifferential && n.text.empty()) ||
           (n.kind == NodeKind::kIdentifier && n.text == "d" && n.primes == 0);
  }

  // Recognizes d^n/dz^n (with \mathrm{d} or plain d) as a derivative operator.
  std::optional<MathNode> derivative_fraction(const MathNode& num, const MathNode& den) const {
    if (num.kind != NodeKind::kSequence || den.kind != NodeKind::kSequence) return std::nullopt;
    if (num.children.empty()) return std::nullopt;
    const MathNode& head = num.children[0];
    MathNode order = make_sequence({});
    if (head.kind == NodeKind::kSubSup && !head.has_sub && head.has_sup && is_d(head.children[0])) {
      order = *head.sup();
    } else if (!is_d(head)) {
      return std::nullopt;
    }
    MathNode var;
    MathNode den_order = make_sequence({});
    const auto& d = den.children;
    auto take_var = [&](const MathNode& n) -> bool {
      if (n.kind == NodeKind::kIdentifier && n.children.empty()) {
        var = n;
        return true;
      }
      if (n.kind == NodeKind::kSubSup && !n.has_sub && n.has_sup &&
          n.children[0].kind == NodeKind::kIdentifier) {
        var = n.children[0];
        den_order = *n.sup();
        return true;
      }
      return false;
    };
    if (d.size() == 1 && d[0].kind == NodeKind::kDifferential && !d[0].text.empty()) {
      var = make_node(NodeKind::kIdentifier, d[0].text);
      var.span = d[0].span;
    } else if (d.size() == 1 && d[0].kind == NodeKind::kSubSup && !d[0].has_sub && d[0].has_sup &&
               d[0].children[0].kind == NodeKind::kDifferential && !d[0].children[0].text.empty()) {
      var = make_node(NodeKind::kIdentifier, d[0].children[0].text);
      var.span = d[0].span;
      den_order = *d[0].sup();
    } else if (d.size() == 2 && is_d(d[0]) && d[0].kind == NodeKind::kIdentifier && take_var(d[1])) {
    } else {
      return std::nullopt;
    }
    if (order.children.empty() != den_order.children.empty()) return std::nullopt;
    MathNode op = make_node(NodeKind::kOperator, "\\deriv");
    op.children.push_back(std::move(var));
    op.children.push_back(std::move(order));
    if (num.children.size() > 1) {
      op.children.push_back(make_sequence({num.children.begin() + 1, num.children.end()}));
    }
    return op;
  }

  MathNode parse_deriv(std::size_t begin) {
    MathNode op = make_node(NodeKind::kOperator, "\\deriv");
    MathNode order = peek_is(TokenKind::kOpenDelim, "[") ? bracket_content() : make_sequence({});
    MathNode fn = brace_content("\\deriv");
    MathNode var = brace_content("\\deriv");
    if (var.kind != NodeKind::kSequence || var.children.size() != 1 ||
        var.children[0].kind != NodeKind::kIdentifier) {
      fail(ErrorCode::kParse, "\\deriv expects a single variable");
    }
    op.children.push_back(std::move(var.children[0]));
    op.children.push_back(std::move(order));
    if (!fn.children.empty()) op.children.push_back(std::move(fn));
    return finish(std::move(op), begin);
  }

  int count_primes() {
    int n = 0;
    while (peek_is(TokenKind::kPrime)) {
      next();
      ++n;
    }
    return n;
  }

  MathNode parse_macro(const MacroEntry& entry, std::size_t begin) {
    MathNode call = make_node(NodeKind::kMacroCall, entry.name);
    call.param_count = entry.param_count;
    call.primes = count_primes();
    std::optional<MathNode> power;
    if (peek_is(TokenKind::kSuperscriptMarker) && entry.slot_count() > 0) {
      next();
      power = parse_script();
    }
    int params = entry.param_count;
    if (entry.optional_default && params > 0) {
      call.optional_param = true;
      if (peek_is(TokenKind::kOpenDelim, "[")) {
        call.children.push_back(bracket_content());
      } else {
        MathNode def = parse_latex(*entry.optional_default, reg_);
        reset_spans(def, Span{here(), here()});
        call.children.push_back(std::move(def));
      }
      --params;
    }
    for (int i = 0; i < params; ++i) call.children.push_back(brace_content("\\" + entry.name));
    call.primes += count_primes();
    while (peek_is(TokenKind::kAt)) {
      next();
      ++call.at_count;
    }
    if (call.at_count > 0) {
      for (int i = 0; i < entry.arg_count; ++i) {
        if (!peek_is(TokenKind::kOpenDelim, "{")) {
          fail(ErrorCode::kArityMismatch, "\\" + entry.name + " expects " +
                                              std::to_string(entry.arg_count) + " argument(s)");
        }
        call.children.push_back(brace_content("\\" + entry.name));
      }
    } else if (entry.arg_count == 1) {
      call.children.push_back(brace_or_item("\\" + entry.name));
    } else if (entry.arg_count > 1) {
      if (!peek_is(TokenKind::kOpenDelim, "(")) {
        fail(ErrorCode::kArityMismatch, "\\" + entry.name + " expects " +
                                            std::to_string(entry.arg_count) + " arguments");
      }
      next();
      MathNode content = parse_chain();
      expect(TokenKind::kCloseDelim, ")");
      std::vector<MathNode> parts = split_commas(content);
      if (static_cast<int>(parts.size()) != entry.arg_count) {
        fail(ErrorCode::kArityMismatch, "\\" + entry.name + " expects " +
                                            std::to_string(entry.arg_count) + " arguments");
      }
      for (MathNode& p : parts) call.children.push_back(std::move(p));
    }
    call = finish(std::move(call), begin);
    if (!power) return call;
    MathNode wrap = make_node(NodeKind::kSubSup);
    wrap.power_on_call = true;
    wrap.has_sup = true;
    wrap.children.push_back(std::move(call));
    wrap.children.push_back(std::move(*power));
    return finish(std::move(wrap), begin);
  }

  std::vector<MathNode> split_commas(const MathNode& content) {
    if (content.kind != NodeKind::kSequence) {
      fail(ErrorCode::kArityMismatch, "relation inside argument list");
    }
    std::vector<MathNode> parts;
    std::vector<MathNode> cur;
    for (const MathNode& item : content.children) {
      if (item.is_operator(",")) {
        parts.push_back(make_sequence(std::move(cur)));
        cur.clear();
      } else {
        cur.push_back(item);
      }
    }
    parts.push_back(make_sequence(std::move(cur)));
    return parts;
  }

  const std::vector<Token>& toks_;
  const MacroRegistry& reg_;
  ParseOptions opt_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  int abs_depth_ = 0;
};

}  // namespace

MathNode parse(const std::vector<Token>& tokens, const MacroRegistry& registry,
               ParseOptions options) {
  return Parser(tokens, registry, options).parse_top();
}

MathNode parse_latex(std::string_view source, const MacroRegistry& registry,
                     ParseOptions options) {
  return parse(tokenize(source), registry, options);
}

}  // namespace mathcast
