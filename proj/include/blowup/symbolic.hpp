// Word combinatorics for IFS tilings.
//
// A Word is a finite string over the alphabet {1,...,N}. The weight of a word
// is the sum of the scaling powers of its letters; Omega_k collects the words
// whose weight first exceeds k when read left to right:
//
//   Omega_k = { sigma : e(sigma) > k >= e^-(sigma) }
//
// where e^- drops the last letter. Omega_k indexes the tiles of the canonical
// tiling at level k. Nothing in this header depends on geometry.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blowup {

using Letter = std::uint8_t;

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters);
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  // Parses "121" (single digits) or "1,2,11" (comma separated). "" and "-"
  // both denote the empty word.
  static Word parse(std::string_view text);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int front() const { return letters_.front(); }
  int back() const { return letters_.back(); }
  const std::vector<Letter>& letters() const { return letters_; }

  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t n) const;
  Word without_last() const { return prefix(size() == 0 ? 0 : size() - 1); }
  Word reversed() const;
  Word operator+(const Word& other) const;
  Word with(int letter) const;         // this . letter
  Word prepended(int letter) const;    // letter . this
  bool starts_with(const Word& p) const;

  // Digits when every letter is < 10, otherwise comma separated.
  std::string str() const;

  // Ordered by (length, letters): the canonical storage order for Omega sets.
  friend bool operator<(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) = default;

 private:
  std::vector<Letter> letters_;
};

// Index of the first disagreement between two words, 1-based; a word shorter
// than the index disagrees there. Returns 0 for equal words. The symbolic
// metric is 2^-index.
std::size_t first_disagreement(const Word& a, const Word& b);

// Scaling powers a_1..a_N with gcd 1.
class PowerVector {
 public:
  explicit PowerVector(std::vector<int> a);

  int size() const { return static_cast<int>(a_.size()); }
  int operator[](int letter) const { return a_[letter - 1]; }  // 1-based
  int a_max() const { return a_max_; }
  int a_min() const { return a_min_; }
  const std::vector<int>& values() const { return a_; }

  friend bool operator==(const PowerVector&, const PowerVector&) = default;

 private:
  std::vector<int> a_;
  int a_max_ = 0;
  int a_min_ = 0;
};

// Throws InvalidWord unless every letter lies in 1..N.
void validate_word(const Word& w, const PowerVector& pv);

int e_weight(const Word& w, const PowerVector& pv);
int e_minus(const Word& w, const PowerVector& pv);

// Level cap: defaults to 25, overridden by BLOWUP_MAX_LEVEL. A second guard
// bounds the number of words a single level may hold.
int max_level();
inline constexpr std::size_t kMaxOmegaSize = 5'000'000;

// Sorted by (length, letters), duplicate free.
using OmegaSet = std::vector<Word>;

bool omega_contains(const OmegaSet& omega, const Word& w);

// |Omega_k| from the counting law, without materializing the words.
std::uint64_t omega_count(int k, const PowerVector& pv);

OmegaSet omega_level(int k, const PowerVector& pv);

// Omega'_k: the members of Omega_k with weight exactly k+1.
OmegaSet omega_prime(int k, const OmegaSet& omega_k, const PowerVector& pv);

// Omega_{k+1} from Omega_k: keep the words not in Omega'_k, extend those in
// Omega'_k by every letter.
OmegaSet omega_step(int k, const OmegaSet& omega_k, const PowerVector& pv);

struct PartitionResult {
  bool ok = true;
  std::optional<Word> witness;  // length-depth word with zero or >1 prefixes
};

// Checks that every word of length `depth` has exactly one prefix in `omega`.
// Requires depth >= the longest word of omega.
PartitionResult cylinder_partition_check(const OmegaSet& omega, int depth, int alphabet);
PartitionResult cylinder_partition_check(int k, int depth, const PowerVector& pv);

struct LabelledAddressSet {
  int k = 0;
  OmegaSet entries;
};

// Relative addresses of the tiles of T_k via the carry-over / split recursion.
LabelledAddressSet labelled_addresses(int k, const PowerVector& pv);

// theta.omega with omega in Omega_{e(theta)} and no letter to cancel.
struct AbsoluteAddress {
  Word theta;
  Word omega;

  std::string str() const;  // "theta.omega", e.g. "12.21" or ".2"
  static AbsoluteAddress parse(std::string_view text);

  friend bool operator==(const AbsoluteAddress&, const AbsoluteAddress&) = default;
  friend bool operator<(const AbsoluteAddress& a, const AbsoluteAddress& b);
};

bool absolute_address_validate(const AbsoluteAddress& addr, const PowerVector& pv);

// Cancels f_i^{-1} f_i pairs: while theta ends with the first letter of omega
// drop both. omega never becomes empty for sigma in Omega_{e(theta)}.
AbsoluteAddress normalize_address(Word theta, Word omega);

// theta = head . cycle cycle cycle ...; expanded only on demand.
struct EventuallyPeriodicWord {
  Word head;
  Word cycle;

  Word prefix(std::size_t k) const;
  // Shortest prefix whose weight reaches at least `weight`.
  Word prefix_with_weight(int weight, const PowerVector& pv) const;
  std::string str() const;  // "1(21)" notation
};

}  // namespace blowup
