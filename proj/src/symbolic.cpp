#include "blowup/symbolic.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

Word::Word(std::initializer_list<int> letters) {
  letters_.reserve(letters.size());
  for (int l : letters) {
    if (l < 1 || l > 255) throw InvalidWord("letter out of range: " + std::to_string(l));
    letters_.push_back(static_cast<Letter>(l));
  }
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> out;
  if (text.empty() || text == "-" || text == "∅") return Word{};
  auto push = [&](long v) {
    if (v < 1 || v > 255) throw InvalidWord("letter out of range in '" + std::string(text) + "'");
    out.push_back(static_cast<Letter>(v));
  };
  if (text.find(',') != std::string_view::npos) {
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
      if (item.empty()) throw InvalidWord("empty letter in '" + std::string(text) + "'");
      char* end = nullptr;
      long v = std::strtol(item.c_str(), &end, 10);
      if (*end != '\0') throw InvalidWord("bad letter '" + item + "'");
      push(v);
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw InvalidWord("bad character in word '" + std::string(text) + "'");
      push(c - '0');
    }
  }
  return Word(std::move(out));
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, letters_.size());
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<long>(n)));
}

Word Word::suffix_from(std::size_t n) const {
  n = std::min(n, letters_.size());
  return Word(std::vector<Letter>(letters_.begin() + static_cast<long>(n), letters_.end()));
}

Word Word::reversed() const { return Word(std::vector<Letter>(letters_.rbegin(), letters_.rend())); }

Word Word::operator+(const Word& other) const {
  std::vector<Letter> v = letters_;
  v.insert(v.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(v));
}

Word Word::with(int letter) const {
  std::vector<Letter> v = letters_;
  v.push_back(static_cast<Letter>(letter));
  return Word(std::move(v));
}

Word Word::prepended(int letter) const {
  std::vector<Letter> v;
  v.reserve(letters_.size() + 1);
  v.push_back(static_cast<Letter>(letter));
  v.insert(v.end(), letters_.begin(), letters_.end());
  return Word(std::move(v));
}

bool Word::starts_with(const Word& p) const {
  return p.size() <= size() && std::equal(p.letters_.begin(), p.letters_.end(), letters_.begin());
}

std::string Word::str() const {
  bool digits = std::all_of(letters_.begin(), letters_.end(), [](Letter l) { return l < 10; });
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (!digits && i > 0) s += ',';
    s += std::to_string(letters_[i]);
  }
  return s;
}

bool operator<(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.letters_ < b.letters_;
}

std::size_t first_disagreement(const Word& a, const Word& b) {
  if (a == b) return 0;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return i + 1;
  return n + 1;
}

PowerVector::PowerVector(std::vector<int> a) : a_(std::move(a)) {
  if (a_.size() < 2) throw ConfigError("an IFS needs at least two maps");
  if (a_.size() > 255) throw ConfigError("at most 255 maps are supported");
  int g = 0;
  for (int v : a_) {
    if (v < 1) throw ConfigError("scaling powers must be positive integers");
    g = std::gcd(g, v);
  }
  if (g != 1) throw ConfigError("gcd of the scaling powers must be 1 (got " + std::to_string(g) + ")");
  a_max_ = *std::max_element(a_.begin(), a_.end());
  a_min_ = *std::min_element(a_.begin(), a_.end());
}

void validate_word(const Word& w, const PowerVector& pv) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] < 1 || w[i] > pv.size())
      throw InvalidWord("letter " + std::to_string(w[i]) + " out of range 1.." + std::to_string(pv.size()));
}

int e_weight(const Word& w, const PowerVector& pv) {
  validate_word(w, pv);
  int e = 0;
  for (std::size_t i = 0; i < w.size(); ++i) e += pv[w[i]];
  return e;
}

int e_minus(const Word& w, const PowerVector& pv) {
  validate_word(w, pv);
  if (w.empty()) return 0;
  return e_weight(w.without_last(), pv);
}

int max_level() {
  if (const char* env = std::getenv("BLOWUP_MAX_LEVEL")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 10000) return static_cast<int>(v);
    throw ConfigError(std::string("BLOWUP_MAX_LEVEL is not a valid level: ") + env);
  }
  return 25;
}

bool omega_contains(const OmegaSet& omega, const Word& w) {
  return std::binary_search(omega.begin(), omega.end(), w);
}

std::uint64_t omega_count(int k, const PowerVector& pv) {
  if (k < 0) throw PreconditionError("level must be nonnegative");
  constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max() / 4;
  auto sat_add = [&](std::uint64_t x, std::uint64_t y) { return std::min(kSat, x + y); };
  // words_of_weight[m]: number of words with weight exactly m.
  std::vector<std::uint64_t> words_of_weight(static_cast<std::size_t>(k) + 1, 0);
  words_of_weight[0] = 1;
  for (int m = 1; m <= k; ++m)
    for (int a : pv.values())
      if (a <= m) words_of_weight[m] = sat_add(words_of_weight[m], words_of_weight[m - a]);
  std::uint64_t count = 0;
  for (int m = 0; m <= k; ++m) {
    std::uint64_t exits = 0;
    for (int a : pv.values())
      if (m + a > k) ++exits;
    if (exits == 0 || words_of_weight[m] == 0) continue;
    std::uint64_t term = words_of_weight[m] > kSat / exits ? kSat : words_of_weight[m] * exits;
    count = sat_add(count, term);
  }
  return count;
}

namespace {

void check_cap(int k, const PowerVector& pv) {
  if (k < 0) throw PreconditionError("level must be nonnegative");
  int cap = max_level();
  if (k > cap)
    throw LevelCapExceeded("level " + std::to_string(k) + " exceeds the cap " + std::to_string(cap) +
                           " (set BLOWUP_MAX_LEVEL to raise it)");
  if (omega_count(k, pv) > kMaxOmegaSize)
    throw LevelCapExceeded("level " + std::to_string(k) + " would hold more than " +
                           std::to_string(kMaxOmegaSize) + " words");
}

// Direct enumeration from the defining inequality, used to seed levels below a_max.
void enumerate_direct(int k, const PowerVector& pv, std::vector<Letter>& word, int weight, OmegaSet& out) {
  for (int i = 1; i <= pv.size(); ++i) {
    word.push_back(static_cast<Letter>(i));
    int next = weight + pv[i];
    if (next > k)
      out.emplace_back(word);
    else
      enumerate_direct(k, pv, word, next, out);
    word.pop_back();
  }
}

}  // namespace

OmegaSet omega_level(int k, const PowerVector& pv) {
  check_cap(k, pv);
  std::vector<OmegaSet> levels(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    OmegaSet& cur = levels[j];
    if (j < pv.a_max()) {
      std::vector<Letter> scratch;
      enumerate_direct(j, pv, scratch, 0, cur);
    } else {
      for (int i = 1; i <= pv.size(); ++i)
        for (const Word& w : levels[j - pv[i]]) cur.push_back(w.prepended(i));
    }
    std::sort(cur.begin(), cur.end());
    // Lower levels are only needed while they can still feed the recursion.
    if (j >= pv.a_max()) levels[j - pv.a_max()].clear();
  }
  return std::move(levels[k]);
}

OmegaSet omega_prime(int k, const OmegaSet& omega_k, const PowerVector& pv) {
  OmegaSet out;
  for (const Word& w : omega_k)
    if (e_weight(w, pv) == k + 1) out.push_back(w);
  return out;
}

OmegaSet omega_step(int k, const OmegaSet& omega_k, const PowerVector& pv) {
  check_cap(k + 1, pv);
  OmegaSet out;
  out.reserve(omega_k.size() * 2);
  for (const Word& w : omega_k) {
    if (e_weight(w, pv) == k + 1) {
      for (int i = 1; i <= pv.size(); ++i) out.push_back(w.with(i));
    } else {
      out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Trie {
  struct Node {
    std::vector<int> child;
    bool terminal = false;
  };
  int alphabet;
  std::vector<Node> nodes;

  explicit Trie(int n) : alphabet(n) { nodes.push_back(Node{std::vector<int>(n, -1), false}); }

  void insert(const Word& w) {
    int cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int l = w[i] - 1;
      if (nodes[cur].child[l] < 0) {
        nodes[cur].child[l] = static_cast<int>(nodes.size());
        nodes.push_back(Node{std::vector<int>(alphabet, -1), false});
      }
      cur = nodes[cur].child[l];
    }
    nodes[cur].terminal = true;
  }

  bool has_children(int node) const {
    return std::any_of(nodes[node].child.begin(), nodes[node].child.end(), [](int c) { return c >= 0; });
  }
};

Word pad_with_ones(std::vector<Letter> path, int depth) {
  while (static_cast<int>(path.size()) < depth) path.push_back(1);
  return Word(std::move(path));
}

// Depth-first walk in lexicographic order. Equivalent to testing every
// length-depth word: each subtree below a terminal leaf is uniformly fine,
// and each missing child or terminal interior node yields a bad word.
bool walk(const Trie& trie, int node, std::vector<Letter>& path, int depth, PartitionResult& res) {
  if (trie.nodes[node].terminal) {
    if (!trie.has_children(node)) return true;
    // Some longer member extends this one: follow it to a terminal descendant.
    int cur = node;
    std::vector<Letter> p = path;
    do {
      int next = -1;
      for (int l = 0; l < trie.alphabet && next < 0; ++l)
        if (trie.nodes[cur].child[l] >= 0) {
          next = trie.nodes[cur].child[l];
          p.push_back(static_cast<Letter>(l + 1));
        }
      cur = next;
    } while (!trie.nodes[cur].terminal);
    res.ok = false;
    res.witness = pad_with_ones(std::move(p), depth);
    return false;
  }
  for (int l = 0; l < trie.alphabet; ++l) {
    path.push_back(static_cast<Letter>(l + 1));
    int c = trie.nodes[node].child[l];
    if (c < 0) {
      res.ok = false;
      res.witness = pad_with_ones(path, depth);
      return false;
    }
    if (!walk(trie, c, path, depth, res)) return false;
    path.pop_back();
  }
  return true;
}

}  // namespace

PartitionResult cylinder_partition_check(const OmegaSet& omega, int depth, int alphabet) {
  std::size_t longest = 0;
  for (const Word& w : omega) longest = std::max(longest, w.size());
  if (depth < 0 || static_cast<std::size_t>(depth) < longest)
    throw PreconditionError("depth " + std::to_string(depth) + " is shorter than the longest word (" +
                            std::to_string(longest) + ")");
  Trie trie(alphabet);
  for (const Word& w : omega) {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] < 1 || w[i] > alphabet) throw InvalidWord("letter out of range in " + w.str());
    trie.insert(w);
  }
  PartitionResult res;
  std::vector<Letter> path;
  walk(trie, 0, path, depth, res);
  return res;
}

PartitionResult cylinder_partition_check(int k, int depth, const PowerVector& pv) {
  return cylinder_partition_check(omega_level(k, pv), depth, pv.size());
}

LabelledAddressSet labelled_addresses(int k, const PowerVector& pv) {
  check_cap(k, pv);
  LabelledAddressSet set;
  set.k = 0;
  for (int i = 1; i <= pv.size(); ++i) set.entries.push_back(Word{i});
  while (set.k < k) {
    OmegaSet next;
    for (const Word& w : set.entries) {
      if (e_weight(w, pv) == set.k + 1) {
        for (int i = 1; i <= pv.size(); ++i) next.push_back(w.with(i));  // split
      } else {
        next.push_back(w);  // carry over
      }
    }
    std::sort(next.begin(), next.end());
    set.entries = std::move(next);
    ++set.k;
  }
  return set;
}

std::string AbsoluteAddress::str() const { return theta.str() + "." + omega.str(); }

AbsoluteAddress AbsoluteAddress::parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) throw InvalidWord("address needs a '.' separator: " + std::string(text));
  return AbsoluteAddress{Word::parse(text.substr(0, dot)), Word::parse(text.substr(dot + 1))};
}

bool operator<(const AbsoluteAddress& a, const AbsoluteAddress& b) {
  if (a.theta == b.theta) return a.omega < b.omega;
  return a.theta < b.theta;
}

bool absolute_address_validate(const AbsoluteAddress& addr, const PowerVector& pv) {
  try {
    validate_word(addr.theta, pv);
    validate_word(addr.omega, pv);
  } catch (const InvalidWord&) {
    return false;
  }
  if (addr.omega.empty()) return false;
  if (!addr.theta.empty() && addr.theta.back() == addr.omega.front()) return false;
  int k = e_weight(addr.theta, pv);
  return e_weight(addr.omega, pv) > k && k >= e_minus(addr.omega, pv);
}

AbsoluteAddress normalize_address(Word theta, Word omega) {
  std::size_t t = theta.size();
  std::size_t o = 0;
  while (t > 0 && o < omega.size() && theta[t - 1] == omega[o]) {
    --t;
    ++o;
  }
  return AbsoluteAddress{theta.prefix(t), omega.suffix_from(o)};
}

Word EventuallyPeriodicWord::prefix(std::size_t k) const {
  if (k <= head.size()) return head.prefix(k);
  if (cycle.empty()) throw PreconditionError("word " + head.str() + " has no periodic tail");
  std::vector<Letter> out = head.letters();
  while (out.size() < k) out.push_back(static_cast<Letter>(cycle[(out.size() - head.size()) % cycle.size()]));
  return Word(std::move(out));
}

Word EventuallyPeriodicWord::prefix_with_weight(int weight, const PowerVector& pv) const {
  std::size_t k = 0;
  while (e_weight(prefix(k), pv) < weight) ++k;
  return prefix(k);
}

std::string EventuallyPeriodicWord::str() const { return head.str() + "(" + cycle.str() + ")"; }

}  // namespace blowup
