#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecexp/arith.hpp"

namespace ecexp {

/// k -> [L_k : Q] entries, as read from a table file.
using DegreeTable = std::map<u64, u64>;

/// A real value with a certified absolute error. `truncation` records the
/// cutoff (prime bound Q or series bound Y) that produced it.
struct BoundedValue {
  double value = 0;
  double error = 0;
  double truncation = 0;

  double lo() const { return value - error; }
  double hi() const { return value + error; }
};

/// Raised when a degree needs a table entry the user did not supply.
class MissingDegreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OracleKind { generic, cm, table_corrected };

inline constexpr unsigned kCmDiscriminants[] = {1, 2, 3, 7, 11, 19, 43, 67, 163};

/// Model of k -> deg L_k.
///
/// generic: |GL_2(Z/kZ)| (Serre curve normalization).
/// cm: product of local degrees over q^a || k. Split q give (q-1)^2 q^(2a-2),
///   inert q give (q^2-1) q^(2a-2). Primes q | 2D are taken from the
///   exception table; past the largest tabled power q^b the degree grows by
///   q^2 per extra power.
/// table_corrected: for k = h j with h supported on primes of the level m
///   and gcd(j, m) = 1, deg = T[gcd(h, m)] (h / gcd(h, m))^4 |GL_2(Z/jZ)|,
///   where T falls back to |GL_2| for divisors of m not in the table.
class DegreeOracle {
 public:
  static DegreeOracle generic();
  /// Throws std::invalid_argument for D outside the class-number-one list or
  /// a table entry that is not a power of a prime dividing 2D.
  static DegreeOracle cm(unsigned D, DegreeTable exceptions = {});
  /// Throws std::invalid_argument if a key does not divide `level` or an
  /// entry contradicts phi(k) | deg | |GL_2(Z/kZ)|.
  static DegreeOracle table_corrected(u64 level, DegreeTable overrides);

  OracleKind kind() const { return kind_; }
  unsigned cm_D() const { return D_; }
  i64 cm_discriminant() const { return disc_; }
  u64 level() const { return level_; }
  const DegreeTable& table() const { return table_; }
  /// Primes whose local degree comes from the table (q | 2D for cm).
  const std::vector<u64>& special_primes() const { return special_; }
  std::string describe() const;

  /// Exact degree; std::overflow_error if it does not fit in 64 bits,
  /// MissingDegreeError for an untabled special prime.
  u64 degree(u64 k) const;
  /// 1 / deg L_k in extended precision, without the 64-bit limit.
  long double inverse_degree(u64 k) const;
  /// A lower bound valid for every table consistent with phi(k) | deg L_k:
  /// equal to degree(k) when defined, and using phi(q^a) at untabled
  /// special prime powers.
  long double degree_lower_bound(u64 k) const;

 private:
  DegreeOracle() = default;

  long double local_cm(u64 q, unsigned a, bool lower_bound) const;
  long double degree_ld(const Factorization& f, bool lower_bound) const;

  OracleKind kind_ = OracleKind::generic;
  unsigned D_ = 0;
  i64 disc_ = 0;
  u64 level_ = 1;
  DegreeTable table_;
  std::vector<u64> special_;
};

u64 gl2_order(u64 k);

/// Free-function spelling used by the CLI and tests.
inline u64 degree(const DegreeOracle& oracle, u64 k) { return oracle.degree(k); }

/// Certified upper bound on the sum over k > Y of 1 / deg L_k (the lower
/// bound degree for cm oracles with untabled special primes). Uses
/// phi(k) >= k / (e^gamma log log k + 3 / log log k) for k >= 3.
BoundedValue degree_tail_bound(const DegreeOracle& oracle, double Y);

/// Lines of `k degree`; `#` starts a comment. Throws std::invalid_argument
/// with the line number on malformed input, std::runtime_error if the file
/// cannot be opened.
DegreeTable parse_degree_table(std::istream& in);
DegreeTable load_degree_table(const std::string& path);

/// "generic", "cm:<D>", "cm:<D>:<table path>", or "table:<path>".
/// For table:<path> the level is the lcm of the table keys.
DegreeOracle parse_oracle_spec(const std::string& spec);

}  // namespace ecexp
