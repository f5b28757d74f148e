#include "wmopt/keys.hpp"

#include <cstdlib>
#include <sstream>

#include "wmopt/errors.hpp"

namespace wmopt {

namespace {

constexpr int kMaxT = 62;

bool allows(std::uint64_t mask, int v) { return (mask >> v) & 1U; }

}  // namespace

std::uint64_t enumeration_cap_from_env() {
  const char* raw = std::getenv(kEnumerationCapEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultEnumerationCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) {
    throw ParameterError(std::string(kEnumerationCapEnv) + " must be a positive integer, got '" + raw + "'");
  }
  return v;
}

bool KeyVector::is_zero() const {
  for (int v : entries_) {
    if (v != 0) return false;
  }
  return true;
}

std::string KeyVector::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

int decode(std::size_t x, const KeyVector& zeta) {
  if (x >= zeta.size()) {
    throw IndexError("token position " + std::to_string(x) + " outside key of length " + std::to_string(zeta.size()));
  }
  return zeta[x];
}

std::string to_string(KeySetKind kind) {
  switch (kind) {
    case KeySetKind::reduced: return "reduced";
    case KeySetKind::bijective: return "bijective";
    case KeySetKind::explicit_list: return "explicit-list";
  }
  return "unknown";
}

KeySetKind keyset_kind_from_string(const std::string& s) {
  if (s == "reduced") return KeySetKind::reduced;
  if (s == "bijective") return KeySetKind::bijective;
  if (s == "explicit-list") return KeySetKind::explicit_list;
  throw ParseError("unknown key set kind '" + s + "'");
}

KeyPattern unrestricted_pattern(int length, int t) {
  if (t < 0 || t > kMaxT) throw ParameterError("T out of range for key patterns");
  const std::uint64_t all = (t == 63) ? ~0ULL : ((1ULL << (t + 1)) - 1);
  return KeyPattern(static_cast<std::size_t>(length), all);
}

std::uint64_t reduced_keyset_size(int length, int t) {
  if (t < 1 || length < 1) throw ParameterError("key length and T must be positive");
  if (t > length) throw ParameterError("T = " + std::to_string(t) + " exceeds key length " + std::to_string(length));
  std::uint64_t n = 1;
  for (int i = 0; i < t; ++i) {
    if (__builtin_mul_overflow(n, static_cast<std::uint64_t>(length - i), &n)) {
      throw CapacityError("Z^" + std::to_string(length) + "_" + std::to_string(t) + " is not indexable in 64 bits");
    }
  }
  if (n == UINT64_MAX) throw CapacityError("key set not indexable in 64 bits");
  return n + 1;
}

bool is_reduced_member(const KeyVector& key, int t) {
  if (key.is_zero()) return true;
  std::vector<int> seen(static_cast<std::size_t>(t) + 1, 0);
  int nonzero = 0;
  for (int v : key.entries()) {
    if (v < 0 || v > t) return false;
    if (v == 0) continue;
    if (seen[v]++) return false;
    ++nonzero;
  }
  return nonzero == t;
}

KeySet KeySet::reduced(int length, int t) {
  if (t > kMaxT) throw ParameterError("T above supported maximum");
  KeySet ks;
  ks.kind_ = KeySetKind::reduced;
  ks.length_ = length;
  ks.t_ = t;
  ks.size_ = reduced_keyset_size(length, t);
  ks.permutations_ = ks.size_ - 1;
  return ks;
}

KeySet KeySet::from_keys(KeySetKind kind, int length, int t, std::vector<KeyVector> keys) {
  if (kind == KeySetKind::reduced) throw ParameterError("reduced key sets are not built from lists");
  if (length < 1 || t < 1 || t > length) throw ParameterError("invalid key set dimensions");
  auto listed = std::make_shared<Listed>();
  for (auto& key : keys) {
    if (key.size() != static_cast<std::size_t>(length)) {
      throw ValidationError("key " + key.str() + " does not have length " + std::to_string(length));
    }
    if (!is_reduced_member(key, t)) throw ValidationError("key " + key.str() + " is not a valid decoder pattern");
    const KeyIndex idx = listed->keys.size();
    if (!listed->lookup.emplace(key, idx).second) throw ValidationError("duplicate key " + key.str());
    listed->keys.push_back(std::move(key));
  }
  KeySet ks;
  ks.kind_ = kind;
  ks.length_ = length;
  ks.t_ = t;
  ks.size_ = listed->keys.size();
  ks.listed_ = std::move(listed);
  return ks;
}

std::uint64_t KeySet::arrangements(int n, int r) const {
  if (r < 0 || r > n) return 0;
  std::uint64_t out = 1;
  for (int i = 0; i < r; ++i) out *= static_cast<std::uint64_t>(n - i);
  return out;
}

KeyIndex KeySet::rank(const KeyVector& key) const {
  if (key.is_zero()) return permutations_;
  std::uint64_t used = 0;
  int remaining = t_;
  KeyIndex index = 0;
  for (int p = length_ - 1; p >= 0; --p) {
    const int v = key[static_cast<std::size_t>(p)];
    for (int c = 0; c < v; ++c) {
      if (c == 0) {
        index += arrangements(p, remaining);
      } else if (!allows(used, c)) {
        index += arrangements(p, remaining - 1);
      }
    }
    if (v != 0) {
      used |= 1ULL << v;
      --remaining;
    }
  }
  return index;
}

KeyVector KeySet::unrank(KeyIndex index) const {
  std::vector<int> entries(static_cast<std::size_t>(length_), 0);
  if (index == permutations_) return KeyVector(std::move(entries));
  std::uint64_t used = 0;
  int remaining = t_;
  for (int p = length_ - 1; p >= 0; --p) {
    for (int c = 0; c <= t_; ++c) {
      std::uint64_t count = 0;
      if (c == 0) {
        count = arrangements(p, remaining);
      } else if (!allows(used, c)) {
        count = arrangements(p, remaining - 1);
      }
      if (index < count) {
        entries[static_cast<std::size_t>(p)] = c;
        if (c != 0) {
          used |= 1ULL << c;
          --remaining;
        }
        break;
      }
      index -= count;
    }
  }
  return KeyVector(std::move(entries));
}

KeyVector KeySet::key_at(KeyIndex index) const {
  if (index >= size_) {
    throw IndexError("key index " + std::to_string(index) + " outside key set of size " + std::to_string(size_));
  }
  if (kind_ == KeySetKind::reduced) return unrank(index);
  return listed_->keys[index];
}

std::optional<KeyIndex> KeySet::find(const KeyVector& key) const {
  if (key.size() != static_cast<std::size_t>(length_)) return std::nullopt;
  if (kind_ == KeySetKind::reduced) {
    if (!is_reduced_member(key, t_)) return std::nullopt;
    return rank(key);
  }
  const auto it = listed_->lookup.find(key);
  if (it == listed_->lookup.end()) return std::nullopt;
  return it->second;
}

KeyIndex KeySet::index_of(const KeyVector& key) const {
  if (auto idx = find(key)) return *idx;
  throw IndexError("key " + key.str() + " is not in the key set");
}

std::optional<KeyIndex> KeySet::zero_key() const {
  return find(KeyVector(std::vector<int>(static_cast<std::size_t>(length_), 0)));
}

std::vector<KeyIndex> KeySet::matching(const KeyPattern& pattern) const {
  if (pattern.size() != static_cast<std::size_t>(length_)) throw ParameterError("pattern length mismatch");
  std::vector<KeyIndex> out;

  if (kind_ != KeySetKind::reduced) {
    for (KeyIndex i = 0; i < listed_->keys.size(); ++i) {
      const auto& key = listed_->keys[i];
      bool ok = true;
      for (std::size_t p = 0; p < key.size() && ok; ++p) ok = allows(pattern[p], key[p]);
      if (ok) out.push_back(i);
    }
    return out;
  }

  const std::uint64_t nonzero_values = ((1ULL << (t_ + 1)) - 1) & ~1ULL;
  // room[p] = number of positions in [0, p) that admit some nonzero value.
  std::vector<int> room(static_cast<std::size_t>(length_) + 1, 0);
  for (int p = 0; p < length_; ++p) room[p + 1] = room[p] + ((pattern[p] & nonzero_values) ? 1 : 0);

  std::vector<int> chosen(static_cast<std::size_t>(length_), 0);
  auto walk = [&](auto&& self, int p, int remaining, std::uint64_t used, KeyIndex base) -> void {
    if (p < 0) {
      out.push_back(base);
      return;
    }
    KeyIndex offset = base;
    for (int c = 0; c <= t_; ++c) {
      std::uint64_t count = 0;
      int next_remaining = remaining;
      if (c == 0) {
        count = arrangements(p, remaining);
      } else if (!allows(used, c)) {
        count = arrangements(p, remaining - 1);
        next_remaining = remaining - 1;
      }
      if (count == 0) continue;
      if (allows(pattern[p], c) && next_remaining <= room[p]) {
        self(self, p - 1, next_remaining, c ? (used | (1ULL << c)) : used, offset);
      }
      offset += count;
    }
  };
  walk(walk, length_ - 1, t_, 0, 0);

  bool zero_ok = true;
  for (auto mask : pattern) zero_ok = zero_ok && allows(mask, 0);
  if (zero_ok) out.push_back(permutations_);
  return out;
}

std::vector<KeyVector> KeySet::keys(std::uint64_t cap) const {
  if (size_ > cap) {
    throw CapacityError("key set of size " + std::to_string(size_) + " exceeds enumeration cap " + std::to_string(cap));
  }
  if (kind_ != KeySetKind::reduced) return listed_->keys;
  std::vector<KeyVector> out;
  out.reserve(size_);
  for (KeyIndex i = 0; i < size_; ++i) out.push_back(unrank(i));
  return out;
}

bool operator==(const KeySet& a, const KeySet& b) {
  if (a.kind_ != b.kind_ || a.length_ != b.length_ || a.t_ != b.t_ || a.size_ != b.size_) return false;
  if (a.kind_ == KeySetKind::reduced) return true;
  return a.listed_->keys == b.listed_->keys;
}

KeySet enumerate_reduced_keyset(int length, int t, std::uint64_t cap) {
  KeySet ks = KeySet::reduced(length, t);
  if (ks.size() > cap) {
    throw CapacityError("Z^" + std::to_string(length) + "_" + std::to_string(t) + " has " + std::to_string(ks.size()) +
                        " keys, above the enumeration cap " + std::to_string(cap));
  }
  return ks;
}

std::vector<KeyIndex> preimage_slice(const KeySet& keyset, std::size_t x, int m, std::uint64_t cap) {
  if (x >= static_cast<std::size_t>(keyset.length())) throw IndexError("token position outside key length");
  if (m < 0 || m > keyset.t()) throw ParameterError("message outside [0:T]");
  if (keyset.size() > cap) throw CapacityError("key set exceeds enumeration cap");
  KeyPattern pattern = unrestricted_pattern(keyset.length(), keyset.t());
  pattern[x] = 1ULL << m;
  return keyset.matching(pattern);
}

}  // namespace wmopt
