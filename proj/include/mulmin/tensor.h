// Copyright 2026 The mulmin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULMIN_TENSOR_H_
#define MULMIN_TENSOR_H_

// Dense payoff tensors a(i, I) for n-player normal-form games, the canonical
// row-major profile order, and the `.mmg` text format.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mulmin/random.h"

namespace mulmin {

// Raised by LoadGame. The message always carries "line L, column C".
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class GameShape {
 public:
  GameShape() = default;
  explicit GameShape(std::vector<int> strategy_counts)
      : counts_(std::move(strategy_counts)) {
    if (counts_.empty()) {
      throw std::invalid_argument("GameShape: need at least one player");
    }
    total_ = 1;
    for (int c : counts_) {
      if (c < 1) {
        throw std::invalid_argument(
            "GameShape: every player needs at least one strategy");
      }
      if (total_ > std::numeric_limits<std::size_t>::max() /
                       static_cast<std::size_t>(c)) {
        throw std::invalid_argument("GameShape: profile count overflows");
      }
      total_ *= static_cast<std::size_t>(c);
    }
  }

  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_strategies(int player) const { return counts_.at(player); }
  const std::vector<int>& strategy_counts() const { return counts_; }

  // n_1 * ... * n_n.
  std::size_t total_profiles() const { return total_; }

  // Distance in the flat index between profiles that differ by one in the
  // given player's coordinate. The last player varies fastest.
  std::size_t stride(int player) const {
    std::size_t s = 1;
    for (int k = num_players() - 1; k > player; --k) {
      s *= static_cast<std::size_t>(counts_[k]);
    }
    return s;
  }

  bool operator==(const GameShape&) const = default;

 private:
  std::vector<int> counts_;
  std::size_t total_ = 0;
};

// One action per player, 0-based.
struct PureProfile {
  std::vector<int> indices;

  bool operator==(const PureProfile&) const = default;
};

inline bool IsValidProfile(const GameShape& shape, const PureProfile& profile) {
  if (static_cast<int>(profile.indices.size()) != shape.num_players()) {
    return false;
  }
  for (int k = 0; k < shape.num_players(); ++k) {
    if (profile.indices[k] < 0 ||
        profile.indices[k] >= shape.num_strategies(k)) {
      return false;
    }
  }
  return true;
}

inline std::size_t FlatIndex(const GameShape& shape,
                             const PureProfile& profile) {
  if (!IsValidProfile(shape, profile)) {
    throw std::out_of_range("profile outside the game shape");
  }
  std::size_t flat = 0;
  for (int k = 0; k < shape.num_players(); ++k) {
    flat = flat * static_cast<std::size_t>(shape.num_strategies(k)) +
           static_cast<std::size_t>(profile.indices[k]);
  }
  return flat;
}

inline PureProfile ProfileAt(const GameShape& shape, std::size_t flat) {
  if (flat >= shape.total_profiles()) {
    throw std::out_of_range("flat profile index out of range");
  }
  PureProfile profile{std::vector<int>(shape.num_players())};
  for (int k = shape.num_players() - 1; k >= 0; --k) {
    const auto n = static_cast<std::size_t>(shape.num_strategies(k));
    profile.indices[k] = static_cast<int>(flat % n);
    flat /= n;
  }
  return profile;
}

// Odometer over all pure profiles in canonical (row-major) order.
class ProfileIterator {
 public:
  explicit ProfileIterator(const GameShape& shape)
      : shape_(&shape), current_{std::vector<int>(shape.num_players(), 0)} {}

  bool done() const { return done_; }
  const PureProfile& profile() const { return current_; }
  std::size_t flat_index() const { return flat_; }

  void Next() {
    ++flat_;
    for (int k = shape_->num_players() - 1; k >= 0; --k) {
      if (++current_.indices[k] < shape_->num_strategies(k)) return;
      current_.indices[k] = 0;
    }
    done_ = true;
  }

 private:
  const GameShape* shape_;
  PureProfile current_;
  std::size_t flat_ = 0;
  bool done_ = false;
};

inline std::vector<PureProfile> AllProfiles(const GameShape& shape) {
  std::vector<PureProfile> out;
  out.reserve(shape.total_profiles());
  for (ProfileIterator it(shape); !it.done(); it.Next()) {
    out.push_back(it.profile());
  }
  return out;
}

// Immutable after construction. payoffs()[player * n̂ + flat] = a(player, I).
class PayoffTensor {
 public:
  PayoffTensor() = default;

  explicit PayoffTensor(GameShape shape)
      : shape_(std::move(shape)),
        payoffs_(static_cast<std::size_t>(shape_.num_players()) *
                     shape_.total_profiles(),
                 0.0) {}

  PayoffTensor(GameShape shape, std::vector<double> payoffs)
      : shape_(std::move(shape)), payoffs_(std::move(payoffs)) {
    const std::size_t expected =
        static_cast<std::size_t>(shape_.num_players()) *
        shape_.total_profiles();
    if (payoffs_.size() != expected) {
      throw std::invalid_argument("PayoffTensor: expected " +
                                  std::to_string(expected) + " payoffs, got " +
                                  std::to_string(payoffs_.size()));
    }
    for (double v : payoffs_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("PayoffTensor: non-finite payoff");
      }
    }
  }

  const GameShape& shape() const { return shape_; }
  int num_players() const { return shape_.num_players(); }
  std::span<const double> payoffs() const { return payoffs_; }

  // Player's subtensor A_i in canonical order.
  std::span<const double> player_payoffs(int player) const {
    CheckPlayer(player);
    return std::span<const double>(payoffs_).subspan(
        static_cast<std::size_t>(player) * shape_.total_profiles(),
        shape_.total_profiles());
  }

  double at(int player, std::size_t flat) const {
    CheckPlayer(player);
    if (flat >= shape_.total_profiles()) {
      throw std::out_of_range("profile index out of range");
    }
    return payoffs_[static_cast<std::size_t>(player) *
                        shape_.total_profiles() +
                    flat];
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (double v : payoffs_) m = std::max(m, std::abs(v));
    return m;
  }

  bool operator==(const PayoffTensor&) const = default;

 private:
  void CheckPlayer(int player) const {
    if (player < 0 || player >= shape_.num_players()) {
      throw std::out_of_range("player index " + std::to_string(player) +
                              " out of range");
    }
  }

  GameShape shape_;
  std::vector<double> payoffs_;
};

// a(player, profile). Both arguments are 0-based.
inline double GetPayoff(const PayoffTensor& t, int player,
                        const PureProfile& profile) {
  return t.at(player, FlatIndex(t.shape(), profile));
}

// Shortest decimal string that parses back to exactly `v`.
inline std::string FormatReal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// 17 significant digits, as used by the machine-readable outputs.
inline std::string FormatReal17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace internal {

class GameLexer {
 public:
  explicit GameLexer(std::string_view text) : text_(text) {}

  struct Token {
    std::string_view text;
    int line = 0;
    int column = 0;
  };

  // Empty token text at end of input.
  Token Next() {
    SkipSpaceAndComments();
    Token tok{{}, line_, column_};
    std::size_t start = pos_;
    while (pos_ < text_.size() && !IsSpace(text_[pos_])) Advance();
    tok.text = text_.substr(start, pos_ - start);
    return tok;
  }

 private:
  static bool IsSpace(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      if (IsSpace(text_[pos_])) {
        Advance();
      } else if (text_[pos_] == '#' && column_ == 1) {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

inline void ExpectKeyword(GameLexer& lex, std::string_view keyword) {
  auto tok = lex.Next();
  if (tok.text != keyword) {
    throw ParseError(tok.line, tok.column,
                     "expected '" + std::string(keyword) + "', got '" +
                         std::string(tok.text) + "'");
  }
}

inline long long ParseInteger(const GameLexer::Token& tok) {
  if (tok.text.empty()) {
    throw ParseError(tok.line, tok.column, "unexpected end of input");
  }
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(),
                      value);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
    throw ParseError(tok.line, tok.column,
                     "expected an integer, got '" + std::string(tok.text) +
                         "'");
  }
  return value;
}

inline double ParseReal(const GameLexer::Token& tok) {
  if (tok.text.empty()) {
    throw ParseError(tok.line, tok.column,
                     "unexpected end of input (too few payoffs)");
  }
  std::string_view s = tok.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(value)) {
    throw ParseError(tok.line, tok.column,
                     "expected a finite real, got '" + std::string(tok.text) +
                         "'");
  }
  return value;
}

}  // namespace internal

// Parses the `.mmg` format:
//
//   players <n>
//   shape <n_1> ... <n_n>
//   payoffs <i>            (1-based, blocks in order 1..n)
//   <n̂ reals in canonical profile order>
//
// Lines beginning with '#' are comments.
inline PayoffTensor LoadGame(std::string_view text) {
  internal::GameLexer lex(text);
  internal::ExpectKeyword(lex, "players");
  auto tok = lex.Next();
  long long n = internal::ParseInteger(tok);
  if (n < 1 || n > 64) {
    throw ParseError(tok.line, tok.column, "player count must be in [1, 64]");
  }
  internal::ExpectKeyword(lex, "shape");
  std::vector<int> counts;
  for (long long k = 0; k < n; ++k) {
    tok = lex.Next();
    long long c = internal::ParseInteger(tok);
    if (c < 1 || c > (1 << 24)) {
      throw ParseError(tok.line, tok.column,
                       "strategy count must be a positive integer");
    }
    counts.push_back(static_cast<int>(c));
  }
  GameShape shape = [&] {
    try {
      return GameShape(counts);
    } catch (const std::invalid_argument& e) {
      throw ParseError(tok.line, tok.column, e.what());
    }
  }();
  const std::size_t total = shape.total_profiles();
  std::vector<double> payoffs;
  payoffs.reserve(static_cast<std::size_t>(n) * total);
  for (long long player = 1; player <= n; ++player) {
    auto kw = lex.Next();
    if (kw.text != "payoffs") {
      throw ParseError(kw.line, kw.column,
                       kw.text.empty()
                           ? "missing payoffs block for player " +
                                 std::to_string(player)
                           : "expected 'payoffs', got '" +
                                 std::string(kw.text) +
                                 "' (wrong payoff count?)");
    }
    tok = lex.Next();
    if (internal::ParseInteger(tok) != player) {
      throw ParseError(tok.line, tok.column,
                       "expected payoffs block for player " +
                           std::to_string(player));
    }
    for (std::size_t k = 0; k < total; ++k) {
      tok = lex.Next();
      if (tok.text == "payoffs") {
        throw ParseError(tok.line, tok.column,
                         "too few payoffs for player " +
                             std::to_string(player) + ": expected " +
                             std::to_string(total));
      }
      payoffs.push_back(internal::ParseReal(tok));
    }
  }
  tok = lex.Next();
  if (!tok.text.empty()) {
    throw ParseError(tok.line, tok.column,
                     "trailing content '" + std::string(tok.text) +
                         "' (wrong payoff count?)");
  }
  return PayoffTensor(std::move(shape), std::move(payoffs));
}

// Canonical serialization; LoadGame(SaveGame(t)) == t bit for bit.
inline std::string SaveGame(const PayoffTensor& t) {
  const GameShape& shape = t.shape();
  std::ostringstream out;
  out << "players " << shape.num_players() << "\nshape";
  for (int c : shape.strategy_counts()) out << ' ' << c;
  out << '\n';
  for (int i = 0; i < shape.num_players(); ++i) {
    out << "payoffs " << (i + 1) << '\n';
    auto row = t.player_payoffs(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      out << (k == 0 ? "" : " ") << FormatReal(row[k]);
    }
    out << '\n';
  }
  return out.str();
}

// Entries i.i.d. uniform on [lo, hi), drawn from std::mt19937_64 seeded with
// `seed` in canonical order (player-major). See UniformReal for the exact
// bits-to-double mapping.
inline PayoffTensor RandomGame(const GameShape& shape, std::uint64_t seed,
                               double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("RandomGame: need finite lo < hi");
  }
  Rng rng(seed);
  std::vector<double> payoffs(static_cast<std::size_t>(shape.num_players()) *
                              shape.total_profiles());
  for (double& v : payoffs) v = UniformReal(rng, lo, hi);
  return PayoffTensor(shape, std::move(payoffs));
}

inline PayoffTensor ConstantGame(const GameShape& shape, double c) {
  return PayoffTensor(
      shape, std::vector<double>(static_cast<std::size_t>(shape.num_players()) *
                                     shape.total_profiles(),
                                 c));
}

}  // namespace mulmin

#endif  // MULMIN_TENSOR_H_
