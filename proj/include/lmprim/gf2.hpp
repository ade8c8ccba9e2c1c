#pragma once

// Linear algebra over F2 on bit-coded vectors.
//
// A vector of F2^m is an unsigned integer whose bit i is coordinate i, so
// vector addition is XOR. Matrices act on row vectors from the right
// (x -> xM): row i of a matrix is the image of the basis vector e_i.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmprim {

using Code = std::uint32_t;

/// Largest ambient dimension representable by a Code. Tables indexed by
/// codes are far smaller than this in practice.
inline constexpr unsigned kMaxAmbientDim = 24;

/// Default upper bound on the ambient dimension for subspace enumeration.
inline constexpr unsigned kDefaultSubspaceCap = 8;

class Gf2Vector {
 public:
  Gf2Vector(unsigned ambient_dim, Code code);

  [[nodiscard]] unsigned ambient_dim() const noexcept { return ambient_dim_; }
  [[nodiscard]] Code code() const noexcept { return code_; }

  friend Gf2Vector operator+(Gf2Vector lhs, Gf2Vector rhs);
  friend bool operator==(const Gf2Vector&, const Gf2Vector&) = default;

 private:
  unsigned ambient_dim_;
  Code code_;
};

class Gf2Matrix {
 public:
  /// Row i is the image of e_i; every row must fit in `dim` bits.
  Gf2Matrix(unsigned dim, std::vector<Code> rows);

  static Gf2Matrix identity(unsigned dim);

  [[nodiscard]] unsigned dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const Code> rows() const noexcept { return rows_; }

  /// x -> xM: XOR of the rows selected by the set bits of x.
  [[nodiscard]] Code apply(Code x) const noexcept {
    Code out = 0;
    for (unsigned i = 0; x != 0; ++i, x >>= 1U) {
      if ((x & 1U) != 0U) out ^= rows_[i];
    }
    return out;
  }
  [[nodiscard]] Gf2Vector apply(Gf2Vector x) const;

  [[nodiscard]] unsigned rank() const;
  [[nodiscard]] bool is_invertible() const { return rank() == dim_; }

  /// Product in application order: x(A*B) = (xA)B.
  friend Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b);
  friend Gf2Matrix operator+(const Gf2Matrix& a, const Gf2Matrix& b);
  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  unsigned dim_;
  std::vector<Code> rows_;
};

/// Throws SingularMatrixError when M is not in GL(V).
Gf2Matrix matrix_inverse(const Gf2Matrix& m);

/// True iff both M and M + I are invertible.
bool is_orthomorphism(const Gf2Matrix& m);

/// Every element of GL(dim, 2), ordered lexicographically by row list.
/// Refuses dim > 4 (|GL(5,2)| is already ~10^7).
std::vector<Gf2Matrix> general_linear_group(unsigned dim);

struct SubspaceEnumeration;

/// F2-subspace held as a reduced row echelon basis. Pivot of a row is its
/// most significant set bit; rows are stored with strictly descending
/// pivots and every pivot column is clear in all other rows, so equal
/// subspaces have identical representations.
class Subspace {
 public:
  /// Zero subspace of F2^m.
  explicit Subspace(unsigned ambient_dim);

  static Subspace full(unsigned ambient_dim);

  [[nodiscard]] unsigned ambient_dim() const noexcept { return ambient_dim_; }
  [[nodiscard]] unsigned dim() const noexcept { return static_cast<unsigned>(basis_.size()); }
  [[nodiscard]] std::span<const Code> basis() const noexcept { return basis_; }
  [[nodiscard]] Code pivot_mask() const noexcept { return pivot_mask_; }
  [[nodiscard]] std::uint64_t size() const noexcept { return std::uint64_t{1} << dim(); }

  /// Reduces x against the basis. Returns the canonical representative of
  /// the coset x + U: the unique element with zero pivot bits.
  [[nodiscard]] Code reduce(Code x) const noexcept {
    for (Code row : basis_) {
      if ((x & leading_bit(row)) != 0U) x ^= row;
    }
    return x;
  }
  [[nodiscard]] bool contains_code(Code x) const noexcept { return reduce(x) == 0; }
  [[nodiscard]] bool contains(Gf2Vector v) const;

  /// All 2^dim elements; element j is the XOR of the basis rows selected by j.
  [[nodiscard]] std::vector<Code> elements() const;

  [[nodiscard]] bool is_subspace_of(const Subspace& other) const;
  [[nodiscard]] bool is_zero() const noexcept { return basis_.empty(); }
  [[nodiscard]] bool is_full() const noexcept { return dim() == ambient_dim_; }

  friend bool operator==(const Subspace&, const Subspace&) = default;
  /// Ascending dimension, then lexicographic on the basis list.
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b);

  static Code leading_bit(Code row) noexcept {
    return row == 0 ? 0U : Code{1} << (31U - static_cast<unsigned>(__builtin_clz(row)));
  }

 private:
  friend Subspace subspace_from_codes(unsigned, std::span<const Code>);
  friend void for_each_subspace(unsigned, const SubspaceEnumeration&,
                                const std::function<bool(const Subspace&)>&);
  Subspace(unsigned ambient_dim, std::vector<Code> rref_basis);

  unsigned ambient_dim_;
  std::vector<Code> basis_;
  Code pivot_mask_ = 0;
};

Subspace subspace_from_codes(unsigned ambient_dim, std::span<const Code> vectors);
Subspace subspace_from_vectors(unsigned ambient_dim, std::span<const Gf2Vector> vectors);

/// Gaussian binomial (m choose k)_2: the number of k-dimensional subspaces of F2^m.
std::uint64_t gaussian_binomial(unsigned m, unsigned k);
/// Total number of subspaces of F2^m.
std::uint64_t galois_number(unsigned m);

struct SubspaceEnumeration {
  bool proper_nontrivial_only = false;
  unsigned cap = kDefaultSubspaceCap;
};

/// Visits every subspace of F2^m exactly once in canonical order
/// (ascending dimension, then lexicographic basis). The visitor returns
/// false to stop early. Throws CapExceededError when m > options.cap.
void for_each_subspace(unsigned m, const SubspaceEnumeration& options,
                       const std::function<bool(const Subspace&)>& visit);

std::vector<Subspace> enumerate_subspaces(unsigned m, const SubspaceEnumeration& options = {});

/// Cached list of the proper nontrivial subspaces of F2^m in canonical order.
/// Built once per m and shared read-only; safe to call from any thread.
const std::vector<Subspace>& proper_subspace_catalog(unsigned m, unsigned cap = kDefaultSubspaceCap);

enum class Linearity { linear, affine_nonlinear, nonaffine };

std::string_view to_string(Linearity l) noexcept;

/// Classifies a map F2^m -> F2^m given as a table of 2^m images.
Linearity classify_map_linearity(std::span<const Code> table);

/// m characters '0'/'1', most significant bit first.
std::string to_bit_string(Code x, unsigned width);
/// Inverse of to_bit_string; throws ParseError on any other character.
Code parse_bit_string(std::string_view bits);

}  // namespace lmprim
