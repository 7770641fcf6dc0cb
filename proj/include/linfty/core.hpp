#pragma once

// Exact scalars, graded vector spaces with named bases, sparse elements and
// the Koszul sign bookkeeping shared by every other module.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace linfty {

using Scalar = mpq_class;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A product or differential left the degree range a truncated algebra was
/// built for.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural precondition (degrees, MC equation, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

inline Scalar rational(long num, long den = 1) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Scalar& q) { return q.get_str(); }

inline Scalar parse_scalar(std::string_view text) {
  Scalar q;
  if (q.set_str(std::string(text), 10) != 0) {
    throw ValidationError("not a rational number: " + std::string(text));
  }
  if (q.get_den() == 0) throw ValidationError("zero denominator: " + std::string(text));
  q.canonicalize();
  return q;
}

inline Scalar factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Scalar(f);
}

inline Scalar binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Scalar(b);
}

inline bool is_odd(int degree) { return (degree % 2) != 0; }

inline int parity_sign(long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

// ---------------------------------------------------------------------------
// Sparse vectors

/// Coordinates on a basis; absent keys are zero and zero values are never
/// stored.
using SparseVec = std::map<int, Scalar>;

inline void axpy(SparseVec& dst, const Scalar& c, const SparseVec& src) {
  if (c == 0) return;
  for (const auto& [i, v] : src) {
    auto [it, inserted] = dst.try_emplace(i, 0);
    it->second += c * v;
    if (it->second == 0) dst.erase(it);
  }
}

inline void add_term(SparseVec& dst, int index, const Scalar& c) {
  if (c == 0) return;
  auto [it, inserted] = dst.try_emplace(index, 0);
  it->second += c;
  if (it->second == 0) dst.erase(it);
}

inline SparseVec scaled(const SparseVec& v, const Scalar& c) {
  SparseVec out;
  if (c == 0) return out;
  for (const auto& [i, x] : v) out.emplace(i, x * c);
  return out;
}

// ---------------------------------------------------------------------------
// Graded spaces

struct BasisEntry {
  std::string name;
  int degree = 0;  // homological
};

/// Finite Z-graded rational vector space with a named basis.  Degrees are
/// homological; a cohomological degree d is stored as -d.
class GradedSpace {
 public:
  GradedSpace() = default;

  explicit GradedSpace(std::vector<BasisEntry> basis) : basis_(std::move(basis)) {
    for (int i = 0; i < static_cast<int>(basis_.size()); ++i) {
      auto [it, inserted] = index_.emplace(basis_[i].name, i);
      if (!inserted) throw ValidationError("duplicate basis name: " + basis_[i].name);
    }
  }

  int dim() const { return static_cast<int>(basis_.size()); }
  const BasisEntry& entry(int i) const { return basis_.at(static_cast<std::size_t>(i)); }
  const std::string& name(int i) const { return entry(i).name; }
  int degree(int i) const { return entry(i).degree; }
  const std::vector<BasisEntry>& basis() const { return basis_; }

  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index(const std::string& name) const {
    auto i = find(name);
    if (!i) throw ValidationError("unknown basis element: " + name);
    return *i;
  }

  std::vector<int> indices_in_degree(int degree) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i) {
      if (basis_[i].degree == degree) out.push_back(i);
    }
    return out;
  }

  std::vector<int> degrees_present() const {
    std::vector<int> out;
    for (const auto& b : basis_) out.push_back(b.degree);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool operator==(const GradedSpace& other) const {
    if (dim() != other.dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (basis_[i].name != other.basis_[i].name || basis_[i].degree != other.basis_[i].degree) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<BasisEntry> basis_;
  std::unordered_map<std::string, int> index_;
};

using SpaceRef = std::shared_ptr<const GradedSpace>;

inline SpaceRef make_space(std::vector<BasisEntry> basis) {
  return std::make_shared<const GradedSpace>(std::move(basis));
}

inline bool same_space(const SpaceRef& a, const SpaceRef& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------
// Elements

class Element {
 public:
  Element() = default;
  explicit Element(SpaceRef space) : space_(std::move(space)) {}
  Element(SpaceRef space, SparseVec terms) : space_(std::move(space)), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->first < 0 || it->first >= space_->dim()) throw ValidationError("basis index out of range");
      it = (it->second == 0) ? terms_.erase(it) : std::next(it);
    }
  }

  static Element basis(SpaceRef space, int i, Scalar c = 1) {
    SparseVec t;
    if (c != 0) t.emplace(i, std::move(c));
    return Element(std::move(space), std::move(t));
  }

  static Element named(SpaceRef space, const std::string& name, Scalar c = 1) {
    int i = space->index(name);
    return basis(std::move(space), i, std::move(c));
  }

  const SpaceRef& space() const { return space_; }
  const SparseVec& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Scalar coeff(int i) const {
    auto it = terms_.find(i);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  /// Common homological degree of all terms; nullopt when mixed or zero.
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [i, c] : terms_) {
      int di = space_->degree(i);
      if (d && *d != di) return std::nullopt;
      d = di;
    }
    return d;
  }

  Element& operator+=(const Element& o) {
    check_compatible(o);
    axpy(terms_, 1, o.terms_);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_compatible(o);
    axpy(terms_, -1, o.terms_);
    return *this;
  }
  Element& operator*=(const Scalar& c) {
    terms_ = scaled(terms_, c);
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= Scalar(-1); }
  friend Element operator*(const Scalar& c, Element a) { return a *= c; }
  friend Element operator*(Element a, const Scalar& c) { return a *= c; }

  bool operator==(const Element& o) const { return same_space(space_, o.space_) && terms_ == o.terms_; }
  bool operator!=(const Element& o) const { return !(*this == o); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : terms_) {
      Scalar a = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      if (a != 1) os << a.get_str() << "*";
      os << space_->name(i);
      first = false;
    }
    return os.str();
  }

 private:
  void check_compatible(const Element& o) {
    if (!space_) {
      space_ = o.space_;
      return;
    }
    if (o.space_ && !same_space(space_, o.space_)) throw ValidationError("elements of different spaces");
  }

  SpaceRef space_;
  SparseVec terms_;
};

// ---------------------------------------------------------------------------
// Koszul signs

/// Sign of reordering graded-antisymmetric arguments.  `perm[k]` is the
/// original position of the entry placed at position k.  Every inverted pair
/// of entries contributes (-1)^{|a||b|+1}.
inline int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees) {
  const std::size_t n = perm.size();
  if (degrees.size() != n) throw ValidationError("koszul_sign: length mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) {
      throw ValidationError("koszul_sign: not a permutation");
    }
    seen[p] = true;
  }
  long exponent = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (perm[i] > perm[j]) exponent += static_cast<long>(degrees[perm[i]]) * degrees[perm[j]] + 1;
    }
  }
  return parity_sign(exponent);
}

using TupleKey = std::vector<int>;

struct SignedTupleKey {
  TupleKey key;
  int sign = 1;
};

/// Sorts a tuple of basis indices into weakly increasing order, tracking the
/// antisymmetry sign.  Returns nullopt when the tuple repeats an element of
/// even degree, since such a bracket vanishes.
inline std::optional<SignedTupleKey> canonicalize_tuple(const std::vector<int>& indices,
                                                        const GradedSpace& space) {
  const std::size_t n = indices.size();
  for (int i : indices) {
    if (i < 0 || i >= space.dim()) throw ValidationError("canonicalize_tuple: invalid index");
  }
  long exponent = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (indices[a] == indices[b]) {
        if (!is_odd(space.degree(indices[a]))) return std::nullopt;
      } else if (indices[a] > indices[b]) {
        exponent += static_cast<long>(space.degree(indices[a])) * space.degree(indices[b]) + 1;
      }
    }
  }
  SignedTupleKey out{indices, parity_sign(exponent)};
  std::sort(out.key.begin(), out.key.end());
  return out;
}

/// Number of orderings of a sorted multiset divided into k!: returns
/// 1 / prod(m_i!) over the multiplicities m_i of the sorted tuple.
inline Scalar inverse_multiplicity_factorials(const TupleKey& sorted) {
  Scalar out = 1;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out /= factorial(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

/// Calls f(tuple) for every weakly increasing tuple of length `len` over
/// [0, dim).
template <class F>
void for_each_multiset(int dim, int len, F&& f) {
  if (len == 0) {
    TupleKey empty;
    f(empty);
    return;
  }
  if (dim <= 0) return;
  TupleKey t(static_cast<std::size_t>(len), 0);
  while (true) {
    f(static_cast<const TupleKey&>(t));
    int k = len - 1;
    while (k >= 0 && t[k] == dim - 1) --k;
    if (k < 0) return;
    ++t[k];
    for (int j = k + 1; j < len; ++j) t[j] = t[k];
  }
}

}  // namespace linfty
