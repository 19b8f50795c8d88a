/*
 * Copyright 2026 The Singulock Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "singulock/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>
#include <utility>

namespace singulock {

// ----------------------------------------------------------------------------
// Term construction and equality

TermPtr make_skip(Span span) { return std::make_shared<const Term>(Term{Skip{}, span}); }

TermPtr make_prefix(Action action, TermPtr body, Span span) {
  return std::make_shared<const Term>(Term{Prefix{std::move(action), std::move(body)}, span});
}

TermPtr make_choice(TermPtr left, TermPtr right, Span span) {
  return std::make_shared<const Term>(Term{Choice{std::move(left), std::move(right)}, span});
}

TermPtr make_par(TermPtr left, TermPtr right, Span span) {
  return std::make_shared<const Term>(Term{Par{std::move(left), std::move(right)}, span});
}

TermPtr make_call(std::string name, Span span) {
  return std::make_shared<const Term>(Term{Call{std::move(name)}, span});
}

bool same_term(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Skip>) {
          return true;
        } else if constexpr (std::is_same_v<T, Prefix>) {
          return x.action == y.action && same_term(x.body, y.body);
        } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
          return same_term(x.left, y.left) && same_term(x.right, y.right);
        } else {
          return x.name == y.name;
        }
      },
      a.node);
}

const std::set<Value>& default_value_domain() {
  static const std::set<Value> kDomain{0, 1};
  return kDomain;
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.value_domain != b.value_domain) return false;
  if (a.resources.size() != b.resources.size()) return false;
  if (!std::equal(a.resources.begin(), a.resources.end(), b.resources.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; }))
    return false;
  if (a.channels.size() != b.channels.size()) return false;
  if (!std::equal(a.channels.begin(), a.channels.end(), b.channels.begin(),
                  [](const auto& x, const auto& y) {
                    return x.first == y.first && x.second.capacity == y.second.capacity;
                  }))
    return false;
  if (a.definitions.size() != b.definitions.size()) return false;
  if (!std::equal(a.definitions.begin(), a.definitions.end(), b.definitions.begin(),
                  [](const auto& x, const auto& y) {
                    return x.first == y.first && same_term(x.second.body, y.second.body);
                  }))
    return false;
  return same_term(a.main, b.main);
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::ostringstream os;
  if (!file.empty()) os << file << ':';
  os << d.span.line << ':' << d.span.column << ": "
     << (d.severity == Severity::kError ? "error" : "warning") << " [" << d.code
     << "] " << d.message;
  return os.str();
}

// ----------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  kIdent,
  kInt,
  kSkip,
  kDef,
  kMain,
  kChan,
  kRes,
  kVal,
  kNone,
  kTau,
  kAcquire,
  kRelease,
  kSemi,
  kComma,
  kEq,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kBang,
  kQuery,
  kPar,
  kChoice,
  kDotDot,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  Value value = 0;
  Span span;
};

const std::map<std::string, Tok, std::less<>>& keywords() {
  static const std::map<std::string, Tok, std::less<>> kKeywords{
      {"skip", Tok::kSkip},     {"def", Tok::kDef},         {"main", Tok::kMain},
      {"chan", Tok::kChan},     {"res", Tok::kRes},         {"val", Tok::kVal},
      {"none", Tok::kNone},     {"tau", Tok::kTau},         {"acquire", Tok::kAcquire},
      {"release", Tok::kRelease},
  };
  return kKeywords;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  /// Tokenizes the whole input; stops at the first lexical error.
  bool run(std::vector<Token>& out, std::vector<Diagnostic>& diags) {
    for (;;) {
      skip_blank();
      Span span{line_, col_, 0};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", 0, span});
        return true;
      }
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (std::isalpha(c) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        std::string text(src_.substr(start, pos_ - start));
        span.length = text.size();
        auto kw = keywords().find(text);
        out.push_back({kw == keywords().end() ? Tok::kIdent : kw->second, text, 0, span});
        continue;
      }
      if (std::isdigit(c) || (c == '-' && pos_ + 1 < src_.size() &&
                              std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::size_t start = pos_;
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
        std::string_view text = src_.substr(start, pos_ - start);
        span.length = text.size();
        Value v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
          diags.push_back({Severity::kError, std::string(diag::kLexical),
                           "integer literal out of range: " + std::string(text), span});
          return false;
        }
        out.push_back({Tok::kInt, std::string(text), v, span});
        continue;
      }
      auto punct = [&](Tok t, std::size_t len) {
        span.length = len;
        out.push_back({t, std::string(src_.substr(pos_, len)), 0, span});
        for (std::size_t i = 0; i < len; ++i) advance();
      };
      if (src_.substr(pos_, 3) == "|~|") { punct(Tok::kChoice, 3); continue; }
      if (src_.substr(pos_, 2) == "||") { punct(Tok::kPar, 2); continue; }
      if (src_.substr(pos_, 2) == "..") { punct(Tok::kDotDot, 2); continue; }
      switch (c) {
        case ';': punct(Tok::kSemi, 1); continue;
        case ',': punct(Tok::kComma, 1); continue;
        case '=': punct(Tok::kEq, 1); continue;
        case '(': punct(Tok::kLParen, 1); continue;
        case ')': punct(Tok::kRParen, 1); continue;
        case '[': punct(Tok::kLBracket, 1); continue;
        case ']': punct(Tok::kRBracket, 1); continue;
        case '!': punct(Tok::kBang, 1); continue;
        case '?': punct(Tok::kQuery, 1); continue;
        default: break;
      }
      span.length = 1;
      std::ostringstream msg;
      if (c >= 0x20 && c < 0x7f)
        msg << "unexpected character '" << static_cast<char>(c) << "'";
      else
        msg << "unexpected byte 0x" << std::hex << static_cast<int>(c);
      diags.push_back({Severity::kError, std::string(diag::kLexical), msg.str(), span});
      return false;
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// ----------------------------------------------------------------------------
// Parser

struct SyntaxError {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse(std::vector<Diagnostic>& diags) {
    Program p;
    bool domain_declared = false;
    while (peek().kind != Tok::kEnd) {
      declaration(p, domain_declared, diags);
      if (peek().kind == Tok::kEnd) break;
      expect(Tok::kSemi, "expected ';' between declarations");
    }
    if (!domain_declared) p.value_domain = default_value_domain();
    if (!p.main) {
      diags.push_back({Severity::kError, std::string(diag::kMissingMain),
                       "program has no 'main' declaration", peek().span});
    }
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message, const Token& at) const {
    std::string msg = message + ", found " +
                      (at.kind == Tok::kEnd ? std::string("end of input")
                                            : "'" + at.text + "'");
    throw SyntaxError{{Severity::kError, std::string(diag::kSyntax), msg, at.span}};
  }

  Token expect(Tok kind, const std::string& message) {
    if (peek().kind != kind) fail(message, peek());
    return take();
  }

  void duplicate(std::vector<Diagnostic>& diags, const Token& name, const char* what) {
    diags.push_back({Severity::kError, std::string(diag::kDuplicateDeclaration),
                     std::string("duplicate ") + what + " '" + name.text + "'", name.span});
  }

  void declaration(Program& p, bool& domain_declared, std::vector<Diagnostic>& diags) {
    const Token head = take();
    switch (head.kind) {
      case Tok::kChan:
        if (peek().kind == Tok::kNone) {
          take();
          return;
        }
        for (;;) {
          Token name = expect(Tok::kIdent, "expected channel name");
          ChannelDecl decl{0, name.span};
          if (peek().kind == Tok::kLBracket) {
            take();
            Token cap = expect(Tok::kInt, "expected channel capacity");
            if (cap.value < 0) fail("channel capacity must be non-negative", cap);
            decl.capacity = static_cast<std::size_t>(cap.value);
            expect(Tok::kRBracket, "expected ']'");
          }
          if (!p.channels.emplace(name.text, decl).second) duplicate(diags, name, "channel");
          if (peek().kind != Tok::kComma) return;
          take();
        }
      case Tok::kRes:
        if (peek().kind == Tok::kNone) {
          take();
          return;
        }
        for (;;) {
          Token name = expect(Tok::kIdent, "expected resource name");
          if (!p.resources.emplace(name.text, name.span).second)
            duplicate(diags, name, "resource");
          if (peek().kind != Tok::kComma) return;
          take();
        }
      case Tok::kVal: {
        if (domain_declared) duplicate(diags, head, "value domain");
        domain_declared = true;
        Token first = expect(Tok::kInt, "expected integer literal");
        if (peek().kind == Tok::kDotDot) {
          take();
          Token last = expect(Tok::kInt, "expected integer literal");
          if (last.value < first.value) {
            diags.push_back({Severity::kError, std::string(diag::kEmptyDomain),
                             "value range is empty", last.span});
            return;
          }
          if (last.value - first.value > 4096) fail("value range too large", last);
          for (Value v = first.value; v <= last.value; ++v) p.value_domain.insert(v);
          return;
        }
        p.value_domain.insert(first.value);
        while (peek().kind == Tok::kComma) {
          take();
          p.value_domain.insert(expect(Tok::kInt, "expected integer literal").value);
        }
        return;
      }
      case Tok::kDef: {
        Token name = expect(Tok::kIdent, "expected definition name");
        expect(Tok::kEq, "expected '='");
        TermPtr body = process();
        if (p.definitions.count(name.text)) {
          duplicate(diags, name, "definition");
          return;
        }
        p.definitions.emplace(name.text, Definition{std::move(body), name.span});
        return;
      }
      case Tok::kMain: {
        expect(Tok::kEq, "expected '='");
        TermPtr body = process();
        if (p.main) duplicate(diags, head, "main declaration");
        p.main = std::move(body);
        return;
      }
      default:
        fail("expected a declaration ('chan', 'res', 'val', 'def' or 'main')", head);
    }
  }

  static Span join(const Span& a, const Span& b) {
    Span s = a;
    if (b.line == a.line && b.column + b.length >= a.column)
      s.length = b.column + b.length - a.column;
    return s;
  }

  TermPtr process() {
    TermPtr left = choice();
    while (peek().kind == Tok::kPar) {
      take();
      TermPtr right = choice();
      left = make_par(left, right, join(left->span, right->span));
    }
    return left;
  }

  TermPtr choice() {
    TermPtr left = prefix();
    while (peek().kind == Tok::kChoice) {
      take();
      TermPtr right = prefix();
      left = make_choice(left, right, join(left->span, right->span));
    }
    return left;
  }

  bool at_action() const {
    switch (peek().kind) {
      case Tok::kTau:
      case Tok::kAcquire:
      case Tok::kRelease:
        return true;
      case Tok::kIdent:
        return peek(1).kind == Tok::kBang || peek(1).kind == Tok::kQuery;
      default:
        return false;
    }
  }

  TermPtr prefix() {
    if (!at_action()) return atom();
    Action a = action();
    expect(Tok::kSemi, "expected ';' after action");
    TermPtr body = prefix();
    Span s = join(a.span, body->span);
    return make_prefix(std::move(a), std::move(body), s);
  }

  Action action() {
    Token head = take();
    switch (head.kind) {
      case Tok::kTau:
        return Action{Tau{}, head.span};
      case Tok::kAcquire:
      case Tok::kRelease: {
        expect(Tok::kLParen, "expected '('");
        Token r = expect(Tok::kIdent, "expected resource name");
        Token close = expect(Tok::kRParen, "expected ')'");
        Span s = join(head.span, close.span);
        if (head.kind == Tok::kAcquire) return Action{Acquire{r.text}, s};
        return Action{Release{r.text}, s};
      }
      default: {
        Token op = take();
        if (op.kind == Tok::kBang) {
          Token v = expect(Tok::kInt, "expected value literal after '!'");
          return Action{Send{head.text, v.value}, join(head.span, v.span)};
        }
        Token x = expect(Tok::kIdent, "expected variable name after '?'");
        return Action{Receive{head.text, x.text}, join(head.span, x.span)};
      }
    }
  }

  TermPtr atom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::kSkip:
        take();
        return make_skip(t.span);
      case Tok::kIdent:
        take();
        return make_call(t.text, t.span);
      case Tok::kLParen: {
        take();
        TermPtr inner = process();
        expect(Tok::kRParen, "expected ')'");
        return inner;
      }
      default:
        fail("expected a process ('skip', an action, a name or '(')", t);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_program(std::string_view source) {
  ParseResult result;
  std::vector<Token> toks;
  if (!Lexer(source).run(toks, result.diagnostics)) return result;
  Program program;
  try {
    program = Parser(std::move(toks)).parse(result.diagnostics);
  } catch (const SyntaxError& e) {
    result.diagnostics.push_back(e.diagnostic);
    return result;
  }
  auto has_error = [&] {
    return std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::kError; });
  };
  if (has_error()) return result;
  auto semantic = validate(program);
  result.diagnostics.insert(result.diagnostics.end(), semantic.begin(), semantic.end());
  if (!has_error()) result.program = std::move(program);
  return result;
}

// ----------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  Validator(const Program& p, std::vector<Diagnostic>& out) : p_(p), out_(out) {}

  void run() {
    if (p_.value_domain.empty())
      error(diag::kEmptyDomain, "value domain is empty", {});
    if (!p_.main) {
      error(diag::kMissingMain, "program has no 'main' declaration", {});
    } else {
      check_term(*p_.main);
    }
    for (const auto& [name, def] : p_.definitions) {
      if (def.body) check_term(*def.body);
    }
    check_guardedness();
  }

 private:
  void error(std::string_view code, std::string message, Span span) {
    out_.push_back({Severity::kError, std::string(code), std::move(message), span});
  }

  void check_action(const Action& a) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Send>) {
            if (!p_.channels.count(k.channel))
              error(diag::kUndeclaredChannel, "undeclared channel '" + k.channel + "'", a.span);
            if (!p_.value_domain.count(k.value))
              error(diag::kValueOutOfDomain,
                    "value " + std::to_string(k.value) + " is outside the value domain", a.span);
          } else if constexpr (std::is_same_v<T, Receive>) {
            if (!p_.channels.count(k.channel))
              error(diag::kUndeclaredChannel, "undeclared channel '" + k.channel + "'", a.span);
          } else if constexpr (std::is_same_v<T, Acquire> || std::is_same_v<T, Release>) {
            if (!p_.resources.count(k.resource))
              error(diag::kUndeclaredResource, "undeclared resource '" + k.resource + "'",
                    a.span);
          }
        },
        a.kind);
  }

  void check_term(const Term& t) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Prefix>) {
            check_action(n.action);
            check_term(*n.body);
          } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
            check_term(*n.left);
            check_term(*n.right);
          } else if constexpr (std::is_same_v<T, Call>) {
            if (!p_.definitions.count(n.name))
              error(diag::kUndefinedDefinition, "undefined process '" + n.name + "'", t.span);
          }
        },
        t.node);
  }

  // Calls reachable without passing through a prefix.
  static void unguarded_calls(const Term& t, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
            unguarded_calls(*n.left, out);
            unguarded_calls(*n.right, out);
          } else if constexpr (std::is_same_v<T, Call>) {
            out.insert(n.name);
          }
        },
        t.node);
  }

  void check_guardedness() {
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& [name, def] : p_.definitions) {
      auto& calls = edges[name];
      if (def.body) unguarded_calls(*def.body, calls);
      for (auto it = calls.begin(); it != calls.end();) {
        it = p_.definitions.count(*it) ? std::next(it) : calls.erase(it);
      }
    }
    // Tarjan over the (small) unguarded call graph.
    std::map<std::string, int> index, low;
    std::vector<std::string> stack;
    std::set<std::string> on_stack;
    int counter = 0;
    std::function<void(const std::string&)> strong = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const auto& w : edges[v]) {
        if (!index.count(w)) {
          strong(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] != index[v]) return;
      std::vector<std::string> comp;
      for (;;) {
        std::string w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      if (comp.size() > 1 || edges[v].count(v)) {
        std::string cycle;
        for (const auto& n : comp) cycle += (cycle.empty() ? "" : ", ") + n;
        const auto& first = p_.definitions.at(comp.front());
        error(diag::kUnguardedRecursion,
              "recursion through {" + cycle + "} is not guarded by an action", first.span);
      }
    };
    for (const auto& [name, _] : edges) {
      if (!index.count(name)) strong(name);
    }
  }

  const Program& p_;
  std::vector<Diagnostic>& out_;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& program) {
  std::vector<Diagnostic> out;
  Validator(program, out).run();
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
  });
  return out;
}

// ----------------------------------------------------------------------------
// Pretty printing

std::string to_string(const Action& action) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Send>) {
          return k.channel + "!" + std::to_string(k.value);
        } else if constexpr (std::is_same_v<T, Receive>) {
          return k.channel + "?" + k.variable;
        } else if constexpr (std::is_same_v<T, Acquire>) {
          return "acquire(" + k.resource + ")";
        } else if constexpr (std::is_same_v<T, Release>) {
          return "release(" + k.resource + ")";
        } else {
          return "tau";
        }
      },
      action.kind);
}

namespace {

// Binding strength: '||' < '|~|' < prefix/atoms.
int level(const Term& t) {
  if (std::holds_alternative<Par>(t.node)) return 0;
  if (std::holds_alternative<Choice>(t.node)) return 1;
  return 2;
}

void print_term(const Term& t, int min_level, std::string& out) {
  const bool parens = level(t) < min_level;
  if (parens) out += '(';
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip>) {
          out += "skip";
        } else if constexpr (std::is_same_v<T, Prefix>) {
          out += to_string(n.action);
          out += "; ";
          print_term(*n.body, 2, out);
        } else if constexpr (std::is_same_v<T, Choice>) {
          print_term(*n.left, 1, out);
          out += " |~| ";
          print_term(*n.right, 2, out);
        } else if constexpr (std::is_same_v<T, Par>) {
          print_term(*n.left, 0, out);
          out += " || ";
          print_term(*n.right, 1, out);
        } else {
          out += n.name;
        }
      },
      t.node);
  if (parens) out += ')';
}

}  // namespace

std::string pretty_print(const Term& term) {
  std::string out;
  print_term(term, 0, out);
  return out;
}

std::string pretty_print(const Program& program) {
  std::string out;
  if (!program.channels.empty()) {
    out += "chan ";
    bool first = true;
    for (const auto& [name, decl] : program.channels) {
      if (!first) out += ", ";
      first = false;
      out += name;
      if (decl.capacity > 0) out += "[" + std::to_string(decl.capacity) + "]";
    }
    out += ";\n";
  }
  if (!program.resources.empty()) {
    out += "res ";
    bool first = true;
    for (const auto& [name, _] : program.resources) {
      if (!first) out += ", ";
      first = false;
      out += name;
    }
    out += ";\n";
  }
  if (program.value_domain != default_value_domain() && !program.value_domain.empty()) {
    out += "val ";
    bool first = true;
    for (Value v : program.value_domain) {
      if (!first) out += ", ";
      first = false;
      out += std::to_string(v);
    }
    out += ";\n";
  }
  for (const auto& [name, def] : program.definitions) {
    out += "def " + name + " = " + pretty_print(*def.body) + ";\n";
  }
  out += "main = ";
  out += program.main ? pretty_print(*program.main) : "skip";
  out += "\n";
  return out;
}

}  // namespace singulock
