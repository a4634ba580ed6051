#pragma once

// Words over [r] and permutations of [k]. Letters, values and positions are
// 1-based everywhere, including the text format.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "error.hpp"

namespace superpat {

using Letter = int;

class Word {
 public:
  Word() = default;

  Word(std::vector<Letter> letters, int alphabet_size)
      : letters_(std::move(letters)), alphabet_size_(alphabet_size) {
    if (alphabet_size_ < 0) throw DomainError("alphabet size must be non-negative");
    for (Letter t : letters_) {
      if (t < 1 || t > alphabet_size_)
        throw DomainError("letter " + std::to_string(t) + " outside [" + std::to_string(alphabet_size_) + "]");
    }
  }

  // Alphabet inferred as the largest letter.
  static Word from_letters(std::vector<Letter> letters) {
    int r = letters.empty() ? 0 : *std::max_element(letters.begin(), letters.end());
    return Word(std::move(letters), r);
  }

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int alphabet_size() const { return alphabet_size_; }

  // 1-based access.
  Letter at(std::size_t i) const { return letters_.at(i - 1); }

  Word reversed() const {
    return Word(std::vector<Letter>(letters_.rbegin(), letters_.rend()), alphabet_size_);
  }

  // w(i),...,w(n),w(1),...,w(i-1) for 1-based i.
  Word rotated(std::size_t i) const {
    std::vector<Letter> out(letters_);
    if (!out.empty()) std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>((i - 1) % out.size()), out.end());
    return Word(std::move(out), alphabet_size_);
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<Letter> letters_;
  int alphabet_size_ = 0;
};

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size() + 1, 0);
    for (int v : images_) {
      if (v < 1 || v > static_cast<int>(images_.size()) || seen[v])
        throw DomainError("not a permutation of [" + std::to_string(images_.size()) + "]");
      seen[v] = 1;
    }
  }

  static Permutation identity(int k) {
    std::vector<int> p(k);
    for (int i = 0; i < k; ++i) p[i] = i + 1;
    return Permutation(std::move(p));
  }

  std::span<const int> images() const { return images_; }
  int size() const { return static_cast<int>(images_.size()); }
  int at(int j) const { return images_.at(j - 1); }

  Permutation reversed() const { return Permutation(std::vector<int>(images_.rbegin(), images_.rend())); }

  Word as_word() const { return Word(images_, size()); }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.images_ <=> b.images_; }

 private:
  std::vector<int> images_;
};

// Strictly increasing 1-based positions into a word.
struct Embedding {
  std::vector<std::size_t> indices;

  friend bool operator==(const Embedding&, const Embedding&) = default;
  friend auto operator<=>(const Embedding&, const Embedding&) = default;
};

// Calls fn(images) for every permutation of [k] in lexicographic order; fn
// may return false to stop early.
template <class Fn>
void for_each_permutation(int k, Fn&& fn) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i + 1;
  do {
    if constexpr (std::is_same_v<decltype(fn(std::as_const(p))), bool>) {
      if (!fn(std::as_const(p))) return;
    } else {
      fn(std::as_const(p));
    }
  } while (std::next_permutation(p.begin(), p.end()));
}

// ---------------------------------------------------------------------------
// Text format: whitespace-separated integers on one line, optionally preceded
// by a header line "r=<int>".

namespace detail {

inline std::vector<int> parse_ints(std::string_view line) {
  std::vector<int> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw DomainError("not an integer: '" + tok + "'");
    }
    if (used != tok.size()) throw DomainError("not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline Word parse_word(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = detail::trim(text.substr(0, nl));
    if (!line.empty()) lines.push_back(line);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  int r = -1;
  if (!lines.empty() && lines.front().starts_with("r=")) {
    auto v = detail::parse_ints(lines.front().substr(2));
    if (v.size() != 1) throw DomainError("malformed header line: " + std::string(lines.front()));
    r = v.front();
    lines.erase(lines.begin());
  }
  if (lines.size() > 1) throw DomainError("word text must fit on one line");
  auto letters = lines.empty() ? std::vector<int>{} : detail::parse_ints(lines.front());
  return r < 0 ? Word::from_letters(std::move(letters)) : Word(std::move(letters), r);
}

inline Permutation parse_permutation(std::string_view text) {
  return Permutation(detail::parse_ints(text));
}

inline std::string format_letters(std::span<const int> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

inline std::string format_word(const Word& w, bool with_header = true) {
  std::string out;
  if (with_header) out = "r=" + std::to_string(w.alphabet_size()) + "\n";
  return out + format_letters(w.letters()) + "\n";
}

}  // namespace superpat
