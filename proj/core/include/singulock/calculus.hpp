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

#ifndef SINGULOCK_CALCULUS_HPP_
#define SINGULOCK_CALCULUS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace singulock {

using Value = std::int64_t;

/// Location of a token or construct in the source text (1-based line and
/// column; length in bytes). A default span means "no source location".
struct Span {
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t length = 0;
};

// ----------------------------------------------------------------------------
// Actions

struct Send {
  std::string channel;
  Value value = 0;
  friend bool operator==(const Send&, const Send&) = default;
};

struct Receive {
  std::string channel;
  std::string variable;
  friend bool operator==(const Receive&, const Receive&) = default;
};

struct Acquire {
  std::string resource;
  friend bool operator==(const Acquire&, const Acquire&) = default;
};

struct Release {
  std::string resource;
  friend bool operator==(const Release&, const Release&) = default;
};

struct Tau {
  friend bool operator==(const Tau&, const Tau&) = default;
};

/// A single prefix action. Equality ignores the span.
struct Action {
  std::variant<Send, Receive, Acquire, Release, Tau> kind;
  Span span;

  friend bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind;
  }
};

// ----------------------------------------------------------------------------
// Process terms
//
// Terms are immutable and shared. Every term reachable during execution is a
// subterm of some definition body or of `main`, so states hold pointers into
// the program AST instead of copies.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Skip {};
struct Prefix {
  Action action;
  TermPtr body;
};
struct Choice {
  TermPtr left;
  TermPtr right;
};
struct Par {
  TermPtr left;
  TermPtr right;
};
struct Call {
  std::string name;
};

struct Term {
  std::variant<Skip, Prefix, Choice, Par, Call> node;
  Span span;
};

/// Structural equality; spans are ignored.
bool operator==(const Term& a, const Term& b);
bool same_term(const TermPtr& a, const TermPtr& b);

TermPtr make_skip(Span span = {});
TermPtr make_prefix(Action action, TermPtr body, Span span = {});
TermPtr make_choice(TermPtr left, TermPtr right, Span span = {});
TermPtr make_par(TermPtr left, TermPtr right, Span span = {});
TermPtr make_call(std::string name, Span span = {});

// ----------------------------------------------------------------------------
// Programs

struct ChannelDecl {
  std::size_t capacity = 0;  // 0 = rendezvous
  Span span;
};

struct Definition {
  TermPtr body;
  Span span;  // span of the defined name
};

struct Program {
  std::map<std::string, Definition> definitions;
  TermPtr main;
  std::map<std::string, ChannelDecl> channels;
  std::map<std::string, Span> resources;
  std::set<Value> value_domain;
};

/// The value domain used when a program has no `val` declaration.
const std::set<Value>& default_value_domain();

/// Structural equality of programs (spans ignored).
bool structurally_equal(const Program& a, const Program& b);

// ----------------------------------------------------------------------------
// Diagnostics

enum class Severity { kError, kWarning };

/// Stable machine-readable codes; each rejection reason has its own.
namespace diag {
inline constexpr std::string_view kLexical = "lexical";
inline constexpr std::string_view kSyntax = "syntax";
inline constexpr std::string_view kUndeclaredChannel = "undeclared-channel";
inline constexpr std::string_view kUndeclaredResource = "undeclared-resource";
inline constexpr std::string_view kUndefinedDefinition = "undefined-definition";
inline constexpr std::string_view kUnguardedRecursion = "unguarded-recursion";
inline constexpr std::string_view kValueOutOfDomain = "value-out-of-domain";
inline constexpr std::string_view kDuplicateDeclaration = "duplicate-declaration";
inline constexpr std::string_view kMissingMain = "missing-main";
inline constexpr std::string_view kEmptyDomain = "empty-value-domain";
}  // namespace diag

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  Span span;
};

std::string format_diagnostic(const Diagnostic& d, std::string_view file = {});

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

/// Parses and validates a program. On success `program` is set and
/// `diagnostics` holds warnings only; on failure at least one error with a
/// span is reported.
ParseResult parse_program(std::string_view source);

/// Checks every program invariant. An empty result means the program is valid.
std::vector<Diagnostic> validate(const Program& program);

std::string pretty_print(const Program& program);
std::string pretty_print(const Term& term);
std::string to_string(const Action& action);

}  // namespace singulock

#endif  // SINGULOCK_CALCULUS_HPP_
