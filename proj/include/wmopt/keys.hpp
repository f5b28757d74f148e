#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wmopt {

using KeyIndex = std::uint64_t;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr const char* kEnumerationCapEnv = "WMOPT_ENUM_CAP";

// Reads WMOPT_ENUM_CAP, falling back to the default.
std::uint64_t enumeration_cap_from_env();

// Decoder pattern: entry x is the message decoded when token x is observed.
class KeyVector {
 public:
  KeyVector() = default;
  explicit KeyVector(std::vector<int> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t x) const { return entries_[x]; }
  const std::vector<int>& entries() const { return entries_; }
  bool is_zero() const;
  std::string str() const;

  friend bool operator==(const KeyVector&, const KeyVector&) = default;
  friend auto operator<=>(const KeyVector&, const KeyVector&) = default;

 private:
  std::vector<int> entries_;
};

// gamma(x, zeta) = zeta_x, with x a 0-based token position.
int decode(std::size_t x, const KeyVector& zeta);

enum class KeySetKind { reduced, bijective, explicit_list };

std::string to_string(KeySetKind kind);
KeySetKind keyset_kind_from_string(const std::string& s);

// Allowed values per position: bit v of pattern[p] admits value v at position p.
using KeyPattern = std::vector<std::uint64_t>;

KeyPattern unrestricted_pattern(int length, int t);

// Number of permutation placements L!/(L-T)! plus the all-zero key.
// Throws CapacityError if the count does not fit in 64 bits.
std::uint64_t reduced_keyset_size(int length, int t);

class KeySet {
 public:
  // Lazy Z^L_T in colexicographic order (last coordinate most significant), all-zero key last.
  static KeySet reduced(int length, int t);
  static KeySet from_keys(KeySetKind kind, int length, int t, std::vector<KeyVector> keys);

  KeySetKind kind() const { return kind_; }
  int length() const { return length_; }
  int t() const { return t_; }
  std::uint64_t size() const { return size_; }

  KeyVector key_at(KeyIndex index) const;
  std::optional<KeyIndex> find(const KeyVector& key) const;
  KeyIndex index_of(const KeyVector& key) const;
  std::optional<KeyIndex> zero_key() const;

  // Indices of keys consistent with the pattern, ascending.
  std::vector<KeyIndex> matching(const KeyPattern& pattern) const;

  // Materializes every key; throws CapacityError above the cap.
  std::vector<KeyVector> keys(std::uint64_t cap = kDefaultEnumerationCap) const;

  friend bool operator==(const KeySet& a, const KeySet& b);

 private:
  KeySet() = default;

  KeyIndex rank(const KeyVector& key) const;
  KeyVector unrank(KeyIndex index) const;
  std::uint64_t arrangements(int n, int r) const;

  KeySetKind kind_ = KeySetKind::reduced;
  int length_ = 0;
  int t_ = 0;
  std::uint64_t size_ = 0;
  std::uint64_t permutations_ = 0;

  struct Listed {
    std::vector<KeyVector> keys;
    std::map<KeyVector, KeyIndex> lookup;
  };
  std::shared_ptr<const Listed> listed_;
};

// Z^L_T after checking its size against the enumeration cap.
KeySet enumerate_reduced_keyset(int length, int t, std::uint64_t cap = kDefaultEnumerationCap);

// Keys with zeta_x = m. Over a reduced set and m = 0 this includes the all-zero key.
std::vector<KeyIndex> preimage_slice(const KeySet& keyset, std::size_t x, int m,
                                     std::uint64_t cap = kDefaultEnumerationCap);

// True iff the key is a member of Z^L_T (all zero, or nonzero entries exactly 1..T once each).
bool is_reduced_member(const KeyVector& key, int t);

}  // namespace wmopt
