#include "lmprim/gf2.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "lmprim/errors.hpp"

namespace lmprim {

namespace {

void check_ambient_dim(unsigned m) {
  if (m > kMaxAmbientDim) {
    throw DimensionError("ambient dimension " + std::to_string(m) + " exceeds the supported maximum " +
                         std::to_string(kMaxAmbientDim));
  }
}

bool fits(Code x, unsigned m) { return m >= 32 || (x >> m) == 0; }

// Folds v into an RREF row set kept in descending pivot order.
void insert_reduced(std::vector<Code>& rows, Code v) {
  for (Code row : rows) {
    if ((v & Subspace::leading_bit(row)) != 0U) v ^= row;
  }
  if (v == 0) return;
  const Code pivot = Subspace::leading_bit(v);
  for (Code& row : rows) {
    if ((row & pivot) != 0U) row ^= v;
  }
  auto pos = std::find_if(rows.begin(), rows.end(), [&](Code r) { return r < v; });
  rows.insert(pos, v);
}

}  // namespace

// ---------------------------------------------------------------- Gf2Vector

Gf2Vector::Gf2Vector(unsigned ambient_dim, Code code) : ambient_dim_(ambient_dim), code_(code) {
  check_ambient_dim(ambient_dim);
  if (!fits(code, ambient_dim)) {
    throw DimensionError("vector code " + std::to_string(code) + " does not fit in F2^" +
                         std::to_string(ambient_dim));
  }
}

Gf2Vector operator+(Gf2Vector lhs, Gf2Vector rhs) {
  if (lhs.ambient_dim_ != rhs.ambient_dim_) throw DimensionError("vector addition across different dimensions");
  return {lhs.ambient_dim_, lhs.code_ ^ rhs.code_};
}

// ---------------------------------------------------------------- Gf2Matrix

Gf2Matrix::Gf2Matrix(unsigned dim, std::vector<Code> rows) : dim_(dim), rows_(std::move(rows)) {
  check_ambient_dim(dim);
  if (dim == 0) throw DimensionError("matrix dimension must be positive");
  if (rows_.size() != dim) {
    throw DimensionError("matrix of dimension " + std::to_string(dim) + " needs exactly that many rows, got " +
                         std::to_string(rows_.size()));
  }
  for (Code r : rows_) {
    if (!fits(r, dim)) throw DimensionError("matrix row " + std::to_string(r) + " wider than " + std::to_string(dim));
  }
}

Gf2Matrix Gf2Matrix::identity(unsigned dim) {
  std::vector<Code> rows(dim);
  for (unsigned i = 0; i < dim; ++i) rows[i] = Code{1} << i;
  return {dim, std::move(rows)};
}

Gf2Vector Gf2Matrix::apply(Gf2Vector x) const {
  if (x.ambient_dim() != dim_) throw DimensionError("matrix/vector dimension mismatch");
  return {dim_, apply(x.code())};
}

unsigned Gf2Matrix::rank() const {
  std::vector<Code> echelon;
  for (Code r : rows_) insert_reduced(echelon, r);
  return static_cast<unsigned>(echelon.size());
}

Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("matrix product across different dimensions");
  std::vector<Code> rows(a.dim_);
  for (unsigned i = 0; i < a.dim_; ++i) rows[i] = b.apply(a.rows_[i]);
  return {a.dim_, std::move(rows)};
}

Gf2Matrix operator+(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("matrix sum across different dimensions");
  std::vector<Code> rows(a.dim_);
  for (unsigned i = 0; i < a.dim_; ++i) rows[i] = a.rows_[i] ^ b.rows_[i];
  return {a.dim_, std::move(rows)};
}

Gf2Matrix matrix_inverse(const Gf2Matrix& m) {
  // Gauss-Jordan on [M | I]; row operations act on the left, so the right
  // block ends up holding M^-1 in the same row convention.
  const unsigned n = m.dim();
  std::vector<Code> left(m.rows().begin(), m.rows().end());
  const Gf2Matrix id = Gf2Matrix::identity(n);
  std::vector<Code> right(id.rows().begin(), id.rows().end());
  for (unsigned col = 0; col < n; ++col) {
    const Code bit = Code{1} << col;
    unsigned pivot = col;
    while (pivot < n && (left[pivot] & bit) == 0U) ++pivot;
    if (pivot == n) throw SingularMatrixError();
    std::swap(left[pivot], left[col]);
    std::swap(right[pivot], right[col]);
    for (unsigned r = 0; r < n; ++r) {
      if (r != col && (left[r] & bit) != 0U) {
        left[r] ^= left[col];
        right[r] ^= right[col];
      }
    }
  }
  return {n, std::move(right)};
}

bool is_orthomorphism(const Gf2Matrix& m) {
  return m.is_invertible() && (m + Gf2Matrix::identity(m.dim())).is_invertible();
}

std::vector<Gf2Matrix> general_linear_group(unsigned dim) {
  if (dim == 0 || dim > 4) throw CapExceededError("general_linear_group supports 1 <= dim <= 4");
  std::vector<Gf2Matrix> out;
  std::vector<Code> rows(dim);
  const Code limit = Code{1} << dim;
  auto recurse = [&](auto&& self, unsigned i, const std::vector<Code>& echelon) -> void {
    if (i == dim) {
      out.emplace_back(dim, rows);
      return;
    }
    for (Code r = 1; r < limit; ++r) {
      std::vector<Code> next = echelon;
      insert_reduced(next, r);
      if (next.size() != i + 1) continue;
      rows[i] = r;
      self(self, i + 1, next);
    }
  };
  recurse(recurse, 0, {});
  return out;
}

// ----------------------------------------------------------------- Subspace

Subspace::Subspace(unsigned ambient_dim) : ambient_dim_(ambient_dim) { check_ambient_dim(ambient_dim); }

Subspace::Subspace(unsigned ambient_dim, std::vector<Code> rref_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(rref_basis)) {
  for (Code r : basis_) pivot_mask_ |= leading_bit(r);
}

Subspace Subspace::full(unsigned ambient_dim) {
  check_ambient_dim(ambient_dim);
  std::vector<Code> rows;
  for (unsigned i = ambient_dim; i-- > 0;) rows.push_back(Code{1} << i);
  return {ambient_dim, std::move(rows)};
}

bool Subspace::contains(Gf2Vector v) const {
  if (v.ambient_dim() != ambient_dim_) throw DimensionError("subspace membership across different dimensions");
  return contains_code(v.code());
}

std::vector<Code> Subspace::elements() const {
  std::vector<Code> out(size());
  // Gray-code walk: each step flips one basis row.
  Code current = 0;
  out[0] = 0;
  for (std::uint64_t j = 1; j < out.size(); ++j) {
    current ^= basis_[static_cast<unsigned>(std::countr_zero(j))];
    out[j] = current;
  }
  return out;
}

bool Subspace::is_subspace_of(const Subspace& other) const {
  if (ambient_dim_ != other.ambient_dim_) throw DimensionError("subspace inclusion across different dimensions");
  return std::all_of(basis_.begin(), basis_.end(), [&](Code r) { return other.contains_code(r); });
}

std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
  if (auto c = a.ambient_dim_ <=> b.ambient_dim_; c != 0) return c;
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.basis_.begin(), a.basis_.end(), b.basis_.begin(), b.basis_.end());
}

Subspace subspace_from_codes(unsigned ambient_dim, std::span<const Code> vectors) {
  check_ambient_dim(ambient_dim);
  std::vector<Code> rows;
  for (Code v : vectors) {
    if (!fits(v, ambient_dim)) {
      throw DimensionError("vector " + std::to_string(v) + " does not lie in F2^" + std::to_string(ambient_dim));
    }
    insert_reduced(rows, v);
  }
  return {ambient_dim, std::move(rows)};
}

Subspace subspace_from_vectors(unsigned ambient_dim, std::span<const Gf2Vector> vectors) {
  std::vector<Code> codes;
  codes.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.ambient_dim() != ambient_dim) {
      throw DimensionError("vector of dimension " + std::to_string(v.ambient_dim()) + " in a span over F2^" +
                           std::to_string(ambient_dim));
    }
    codes.push_back(v.code());
  }
  return subspace_from_codes(ambient_dim, codes);
}

// -------------------------------------------------------------- Enumeration

std::uint64_t gaussian_binomial(unsigned m, unsigned k) {
  if (k > m) return 0;
  // [m,k] = [m-1,k-1] + 2^k [m-1,k], saturating at uint64 max.
  __extension__ typedef unsigned __int128 Wide;
  constexpr Wide kSat = std::numeric_limits<std::uint64_t>::max();
  std::vector<Wide> row(k + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= m; ++i) {
    for (unsigned j = std::min(i, k); j >= 1; --j) {
      Wide v = row[j - 1] + (j < 64 ? (row[j] << j) : kSat);
      row[j] = std::min(v, kSat);
    }
  }
  return static_cast<std::uint64_t>(row[k]);
}

std::uint64_t galois_number(unsigned m) {
  std::uint64_t total = 0;
  for (unsigned k = 0; k <= m; ++k) {
    const std::uint64_t g = gaussian_binomial(m, k);
    total = (total > std::numeric_limits<std::uint64_t>::max() - g) ? std::numeric_limits<std::uint64_t>::max()
                                                                     : total + g;
  }
  return total;
}

void for_each_subspace(unsigned m, const SubspaceEnumeration& options,
                       const std::function<bool(const Subspace&)>& visit) {
  if (m == 0) throw DimensionError("subspace enumeration needs m >= 1");
  if (m > options.cap) {
    std::ostringstream msg;
    msg << "refusing to enumerate subspaces of F2^" << m << ": " << galois_number(m)
        << " subspaces exceeds the configured cap m <= " << options.cap;
    throw CapExceededError(msg.str());
  }
  const unsigned lo = options.proper_nontrivial_only ? 1 : 0;
  const unsigned hi = options.proper_nontrivial_only ? m - 1 : m;

  // Rows are chosen in ascending integer order, highest pivot first, which
  // yields bases in lexicographic order. A row with pivot p may only be
  // placed if enough positions below p stay free for the remaining pivots,
  // so the search never hits a dead end.
  std::vector<Code> rows;
  bool stop = false;
  auto place = [&](auto&& self, unsigned remaining, unsigned pivot_bound, Code used_bits) -> void {
    if (remaining == 0) {
      if (!visit(Subspace(m, rows))) stop = true;
      return;
    }
    for (unsigned p = remaining - 1; p < pivot_bound && !stop; ++p) {
      const Code pivot = Code{1} << p;
      if ((used_bits & pivot) != 0U) continue;
      // Lower bits of the new row may be set only at non-pivot positions.
      Code pivots_so_far = 0;
      for (Code r : rows) pivots_so_far |= Subspace::leading_bit(r);
      const Code free_mask = (pivot - 1) & ~pivots_so_far;
      // Enumerate submasks of free_mask in ascending numeric order.
      const unsigned free_count = static_cast<unsigned>(std::popcount(free_mask));
      for (std::uint64_t t = 0; t < (std::uint64_t{1} << free_count) && !stop; ++t) {
        Code low = 0;
        {
          Code fm = free_mask;
          std::uint64_t bits = t;
          while (fm != 0U) {
            const Code lowest = fm & (~fm + 1U);
            if ((bits & 1U) != 0U) low |= lowest;
            bits >>= 1U;
            fm ^= lowest;
          }
        }
        const Code row = pivot | low;
        const Code new_used = used_bits | row;
        // Remaining pivots need positions below p that are clear in every row.
        const Code available = (pivot - 1) & ~new_used;
        if (static_cast<unsigned>(std::popcount(available)) < remaining - 1) continue;
        rows.push_back(row);
        self(self, remaining - 1, p, new_used);
        rows.pop_back();
      }
    }
  };
  for (unsigned k = lo; k <= hi && !stop; ++k) place(place, k, m, 0);
}

std::vector<Subspace> enumerate_subspaces(unsigned m, const SubspaceEnumeration& options) {
  std::vector<Subspace> out;
  for_each_subspace(m, options, [&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

const std::vector<Subspace>& proper_subspace_catalog(unsigned m, unsigned cap) {
  static std::mutex mutex;
  static std::map<unsigned, std::unique_ptr<const std::vector<Subspace>>> cache;
  if (m > cap) {
    // Let the enumerator produce the refusal message.
    for_each_subspace(m, {.proper_nontrivial_only = true, .cap = cap}, [](const Subspace&) { return false; });
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) {
    slot = std::make_unique<const std::vector<Subspace>>(
        enumerate_subspaces(m, {.proper_nontrivial_only = true, .cap = std::max(cap, m)}));
  }
  return *slot;
}

// ---------------------------------------------------------------- Linearity

std::string_view to_string(Linearity l) noexcept {
  switch (l) {
    case Linearity::linear: return "linear";
    case Linearity::affine_nonlinear: return "affine_nonlinear";
    case Linearity::nonaffine: return "nonaffine";
  }
  return "unknown";
}

Linearity classify_map_linearity(std::span<const Code> table) {
  const std::size_t size = table.size();
  if (size == 0 || !std::has_single_bit(size)) throw DimensionError("map table length must be a power of two");
  const unsigned m = static_cast<unsigned>(std::countr_zero(size));
  const Code offset = table[0];
  // x -> f(x) + f(0) must agree with the XOR of its basis images everywhere.
  std::vector<Code> basis_images(m);
  for (unsigned i = 0; i < m; ++i) basis_images[i] = table[std::size_t{1} << i] ^ offset;
  for (std::size_t x = 1; x < size; ++x) {
    Code expected = 0;
    for (unsigned i = 0; i < m; ++i) {
      if (((x >> i) & 1U) != 0U) expected ^= basis_images[i];
    }
    if ((table[x] ^ offset) != expected) return Linearity::nonaffine;
  }
  return offset == 0 ? Linearity::linear : Linearity::affine_nonlinear;
}

std::string to_bit_string(Code x, unsigned width) {
  std::string out(width, '0');
  for (unsigned i = 0; i < width; ++i) {
    if (((x >> i) & 1U) != 0U) out[width - 1 - i] = '1';
  }
  return out;
}

Code parse_bit_string(std::string_view bits) {
  if (bits.empty() || bits.size() > kMaxAmbientDim) throw ParseError("bit string has unsupported length");
  Code out = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParseError("bit string may contain only '0' and '1'");
    out = (out << 1U) | static_cast<Code>(c == '1');
  }
  return out;
}

}  // namespace lmprim
