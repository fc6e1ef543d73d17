#include "ecexp/degrees.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace ecexp {

namespace {

constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kRoundingSlack = 1e-12L;

u128 checked_mul(u128 a, u128 b) {
  if (a != 0 && b > static_cast<u128>(UINT64_MAX) / a) {
    throw std::overflow_error("degree does not fit in 64 bits");
  }
  return a * b;
}

u64 pow_checked(u64 base, unsigned e) {
  u128 r = 1;
  while (e--) r = checked_mul(r, base);
  return static_cast<u64>(r);
}

long double gl2_ld(const Factorization& f) {
  long double r = 1;
  for (const auto& [q, a] : f.factors) {
    const long double Q = static_cast<long double>(q);
    r *= std::pow(Q, 4.0L * a - 3) * (Q - 1) * (Q - 1) * (Q + 1);
  }
  return r;
}

bool is_prime_power_of(u64 k, u64 q, unsigned& exponent) {
  exponent = 0;
  while (k % q == 0) {
    k /= q;
    ++exponent;
  }
  return k == 1 && exponent > 0;
}

// Sum over k >= K of A * F(k)^s / k^t, F(k) = e^gamma loglog k + 3 / loglog K,
// which dominates e^gamma loglog k + 3 / loglog k for k >= K >= 3. The
// integral is bounded through loglog(K e^w) <= loglog K + w / log K.
long double analytic_tail(long double A, unsigned s, unsigned t, u64 K) {
  long double head = 0;
  for (;;) {
    const long double lnK = std::log(static_cast<long double>(K));
    const long double llK = std::log(lnK);
    const long double alpha = std::exp(kEulerGamma);
    const long double FK = alpha * llK + 3 / llK;
    // F^s / x^t must be decreasing from K on.
    if (s * alpha / (lnK * FK) >= t) {
      head += A * std::pow(FK, s) / std::pow(static_cast<long double>(K), t);
      ++K;
      continue;
    }
    const long double a = FK, b = alpha / lnK, c = t - 1.0L;
    const long double integral = s == 1 ? a / c + b / (c * c)
                                        : a * a / c + 2 * a * b / (c * c) + 2 * b * b / (c * c * c);
    const long double Kl = static_cast<long double>(K);
    return head + A * (std::pow(FK, s) / std::pow(Kl, t) + std::pow(Kl, 1.0L - t) * integral);
  }
}

// Sum over u > Z of 1 / phi(u)^2.
class InversePhiSquaredTail {
 public:
  static constexpr u64 kExact = 4096;

  InversePhiSquaredTail() : suffix_(kExact + 2, 0) {
    std::vector<u64> ph(kExact + 1);
    for (u64 i = 0; i <= kExact; ++i) ph[i] = i;
    for (u64 i = 2; i <= kExact; ++i) {
      if (ph[i] != i) continue;
      for (u64 j = i; j <= kExact; j += i) ph[j] -= ph[j] / i;
    }
    const long double beyond = analytic_tail(1, 2, 2, kExact + 1);
    suffix_[kExact + 1] = beyond;
    for (u64 u = kExact; u >= 1; --u) {
      const long double v = static_cast<long double>(ph[u]);
      suffix_[u] = suffix_[u + 1] + 1 / (v * v);
    }
    suffix_[0] = suffix_[1];
  }

  long double operator()(long double Z) const {
    if (Z < 1) return suffix_[1];
    const u64 first = static_cast<u64>(std::floor(Z)) + 1;
    if (first <= kExact + 1) return suffix_[first];
    return analytic_tail(1, 2, 2, first);
  }

 private:
  std::vector<long double> suffix_;
};

const InversePhiSquaredTail& inverse_phi_squared_tail() {
  static const InversePhiSquaredTail tail;
  return tail;
}

}  // namespace

u64 gl2_order(u64 k) {
  if (k == 0) throw std::invalid_argument("gl2_order: k must be positive");
  u128 r = 1;
  for (const auto& [q, a] : factorize(k).factors) {
    r = checked_mul(r, pow_checked(q, 4 * a - 3));
    r = checked_mul(r, (q - 1) * (q - 1));
    r = checked_mul(r, q + 1);
  }
  return static_cast<u64>(r);
}

DegreeOracle DegreeOracle::generic() { return DegreeOracle{}; }

DegreeOracle DegreeOracle::cm(unsigned D, DegreeTable exceptions) {
  if (std::find(std::begin(kCmDiscriminants), std::end(kCmDiscriminants), D) ==
      std::end(kCmDiscriminants)) {
    throw std::invalid_argument("cm oracle: D must be one of 1,2,3,7,11,19,43,67,163");
  }
  DegreeOracle o;
  o.kind_ = OracleKind::cm;
  o.D_ = D;
  o.disc_ = D % 4 == 3 ? -static_cast<i64>(D) : -4 * static_cast<i64>(D);
  for (const auto& pp : factorize(2 * static_cast<u64>(D)).factors) o.special_.push_back(pp.prime);
  for (const auto& [k, deg] : exceptions) {
    unsigned a = 0;
    const bool ok = std::any_of(o.special_.begin(), o.special_.end(),
                                [&](u64 q) { return is_prime_power_of(k, q, a); });
    if (!ok) {
      throw std::invalid_argument("cm oracle: exception key " + std::to_string(k) +
                                  " is not a power of a prime dividing 2D");
    }
    if (deg == 0 || deg % phi(k) != 0 || static_cast<u128>(deg) > static_cast<u128>(k) * k) {
      throw std::invalid_argument("cm oracle: degree " + std::to_string(deg) + " at k = " +
                                  std::to_string(k) + " violates phi(k) | deg <= k^2");
    }
  }
  o.table_ = std::move(exceptions);
  return o;
}

DegreeOracle DegreeOracle::table_corrected(u64 level, DegreeTable overrides) {
  if (level == 0) throw std::invalid_argument("table oracle: level must be positive");
  for (const auto& [k, deg] : overrides) {
    if (k == 0 || level % k != 0) {
      throw std::invalid_argument("table oracle: key " + std::to_string(k) +
                                  " does not divide the level " + std::to_string(level));
    }
    if (deg == 0 || deg % phi(k) != 0 || gl2_order(k) % deg != 0) {
      throw std::invalid_argument("table oracle: degree " + std::to_string(deg) + " at k = " +
                                  std::to_string(k) + " violates phi(k) | deg | |GL2(Z/k)|");
    }
  }
  DegreeOracle o;
  o.kind_ = OracleKind::table_corrected;
  o.level_ = level;
  o.table_ = std::move(overrides);
  for (const auto& pp : factorize(level).factors) o.special_.push_back(pp.prime);
  return o;
}

std::string DegreeOracle::describe() const {
  switch (kind_) {
    case OracleKind::generic: return "generic";
    case OracleKind::cm: return "cm:" + std::to_string(D_);
    case OracleKind::table_corrected: return "table(level=" + std::to_string(level_) + ")";
  }
  return "?";
}

long double DegreeOracle::local_cm(u64 q, unsigned a, bool lower_bound) const {
  const long double Q = static_cast<long double>(q);
  if (std::find(special_.begin(), special_.end(), q) != special_.end()) {
    unsigned best = 0;
    u64 best_deg = 0;
    u64 qb = 1;
    for (unsigned b = 1; b <= a; ++b) {
      qb *= q;
      if (auto it = table_.find(qb); it != table_.end()) {
        best = b;
        best_deg = it->second;
      }
    }
    if (best > 0) return static_cast<long double>(best_deg) * std::pow(Q, 2.0L * (a - best));
    if (lower_bound) return (Q - 1) * std::pow(Q, a - 1.0L);
    throw MissingDegreeError("cm oracle: no exception-table entry for the prime " +
                             std::to_string(q) + " dividing 2D");
  }
  const int chi = kronecker(disc_, q);
  const long double scale = std::pow(Q, 2.0L * (a - 1));
  return (chi == 1 ? (Q - 1) * (Q - 1) : (Q * Q - 1)) * scale;
}

long double DegreeOracle::degree_ld(const Factorization& f, bool lower_bound) const {
  switch (kind_) {
    case OracleKind::generic: return gl2_ld(f);
    case OracleKind::cm: {
      long double r = 1;
      for (const auto& [q, a] : f.factors) r *= local_cm(q, a, lower_bound);
      return r;
    }
    case OracleKind::table_corrected: {
      u64 h = 1;
      Factorization j;
      for (const auto& pp : f.factors) {
        if (level_ % pp.prime == 0) {
          h *= pow_checked(pp.prime, pp.exponent);
        } else {
          j.factors.push_back(pp);
        }
      }
      const u64 g = gcd(h, level_);
      const auto it = table_.find(g);
      const long double tg = it != table_.end() ? static_cast<long double>(it->second)
                                                : static_cast<long double>(gl2_order(g));
      return tg * std::pow(static_cast<long double>(h / g), 4.0L) * gl2_ld(j);
    }
  }
  throw std::logic_error("unreachable");
}

u64 DegreeOracle::degree(u64 k) const {
  if (k == 0) throw std::invalid_argument("degree: k must be positive");
  const Factorization f = factorize(k);
  switch (kind_) {
    case OracleKind::generic: return gl2_order(k);
    case OracleKind::cm: {
      u128 r = 1;
      for (const auto& [q, a] : f.factors) {
        const long double local = local_cm(q, a, false);
        if (local > 1.8e19L) throw std::overflow_error("degree does not fit in 64 bits");
        r = checked_mul(r, static_cast<u64>(std::llround(local)));
      }
      return static_cast<u64>(r);
    }
    case OracleKind::table_corrected: {
      u64 h = 1, j = 1;
      for (const auto& [q, a] : f.factors) {
        (level_ % q == 0 ? h : j) *= pow_checked(q, a);
      }
      const u64 g = gcd(h, level_);
      const auto it = table_.find(g);
      const u64 tg = it != table_.end() ? it->second : gl2_order(g);
      u128 r = checked_mul(tg, pow_checked(h / g, 4));
      return static_cast<u64>(checked_mul(r, gl2_order(j)));
    }
  }
  throw std::logic_error("unreachable");
}

long double DegreeOracle::inverse_degree(u64 k) const {
  if (k == 0) throw std::invalid_argument("inverse_degree: k must be positive");
  return 1 / degree_ld(factorize(k), false);
}

long double DegreeOracle::degree_lower_bound(u64 k) const {
  if (k == 0) throw std::invalid_argument("degree_lower_bound: k must be positive");
  return degree_ld(factorize(k), true);
}

BoundedValue degree_tail_bound(const DegreeOracle& oracle, double Y) {
  if (!(Y >= 2)) throw std::invalid_argument("degree_tail_bound: Y must be >= 2");
  const u64 K = static_cast<u64>(std::floor(Y)) + 1;
  long double bound = 0;
  switch (oracle.kind()) {
    case OracleKind::generic:
    case OracleKind::table_corrected: {
      // |GL2(Z/k)| = k^3 phi(k) prod_{q|k} (1 - q^-2) >= (6/pi^2) k^3 phi(k),
      // and deg L_k >= |GL2(Z/k)| / B with B = max_g |GL2(Z/g)| / T[g].
      long double B = 1;
      for (const auto& [g, deg] : oracle.table()) {
        B = std::max(B, static_cast<long double>(gl2_order(g)) / static_cast<long double>(deg));
      }
      bound = B * (kPi * kPi / 6) * analytic_tail(1, 1, 4, K);
      break;
    }
    case OracleKind::cm: {
      // deg L_k >= w(r)^-1 phi(u)^2 with k = r u, r supported on the special
      // primes. Sum over r of w(r) U(Y / r), U(Z) = sum_{u > Z} phi(u)^-2.
      const auto& U = inverse_phi_squared_tail();
      const auto& S = oracle.special_primes();
      const long double Yl = static_cast<long double>(Y);
      const long double r_cap = std::min(Yl * 1048576.0L, 4.0e18L);
      std::function<void(std::size_t, u64, long double)> walk = [&](std::size_t i, u64 r,
                                                                    long double w) {
        if (i == S.size()) {
          bound += w * U(Yl / static_cast<long double>(r));
          return;
        }
        const u64 q = S[i];
        walk(i + 1, r, w);
        u64 qa = 1;
        for (unsigned a = 1; static_cast<long double>(r) * qa * q <= r_cap; ++a) {
          qa *= q;
          walk(i + 1, r * qa, w / oracle.degree_lower_bound(qa));
        }
      };
      walk(0, 1, 1);
      // Rankin with sigma = 1/2 for the special-prime parts beyond r_cap.
      long double rankin = 1;
      for (u64 q : S) {
        const long double Q = static_cast<long double>(q);
        long double sum = 1, term = 0;
        unsigned max_tabled = 0;
        for (const auto& entry : oracle.table()) {
          unsigned a = 0;
          if (is_prime_power_of(entry.first, q, a)) max_tabled = std::max(max_tabled, a);
        }
        const unsigned last = max_tabled + 60;
        // Local degrees at q^a: lower bound phi(q^a) if untabled, else
        // T[q^b] q^(2(a-b)); both are monotone geometric beyond max_tabled.
        auto local = [&](unsigned a) -> long double {
          if (max_tabled == 0) return (Q - 1) * std::pow(Q, a - 1.0L);
          if (a <= max_tabled) {
            u64 qb = 1;
            for (unsigned b = 0; b < a; ++b) qb *= q;
            return oracle.degree_lower_bound(qb);
          }
          u64 qb = 1;
          for (unsigned b = 0; b < max_tabled; ++b) qb *= q;
          return oracle.degree_lower_bound(qb) * std::pow(Q, 2.0L * (a - max_tabled));
        };
        for (unsigned a = 1; a <= last; ++a) {
          term = std::pow(Q, 0.5L * a) / local(a);
          sum += term;
        }
        const long double ratio = max_tabled == 0 ? std::pow(Q, -0.5L) : std::pow(Q, -1.5L);
        sum += term * ratio / (1 - ratio);
        rankin *= sum;
      }
      bound += U(0) * rankin / std::sqrt(r_cap);
      break;
    }
  }
  bound *= 1 + kRoundingSlack;
  return {static_cast<double>(bound), 0.0, Y};
}

DegreeTable parse_degree_table(std::istream& in) {
  DegreeTable table;
  std::string line;
  for (unsigned lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string ks, ds, extra;
    if (!(fields >> ks)) continue;
    const auto bad = [&](const std::string& why) {
      return std::invalid_argument("degree table line " + std::to_string(lineno) + ": " + why);
    };
    if (!(fields >> ds) || (fields >> extra)) throw bad("expected `k degree`");
    u64 k = 0, d = 0;
    try {
      std::size_t pk = 0, pd = 0;
      if (ks.front() == '-' || ds.front() == '-') throw bad("negative value");
      k = std::stoull(ks, &pk);
      d = std::stoull(ds, &pd);
      if (pk != ks.size() || pd != ds.size()) throw bad("not an integer");
    } catch (const std::logic_error&) {
      throw bad("not an integer");
    }
    if (k == 0 || d == 0) throw bad("k and degree must be positive");
    if (!table.emplace(k, d).second) throw bad("duplicate key " + std::to_string(k));
  }
  return table;
}

DegreeTable load_degree_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open degree table: " + path);
  return parse_degree_table(in);
}

DegreeOracle parse_oracle_spec(const std::string& spec) {
  if (spec == "generic") return DegreeOracle::generic();
  if (spec.rfind("cm:", 0) == 0) {
    const std::string rest = spec.substr(3);
    const auto colon = rest.find(':');
    const std::string dstr = rest.substr(0, colon);
    unsigned D = 0;
    try {
      std::size_t pos = 0;
      D = static_cast<unsigned>(std::stoul(dstr, &pos));
      if (pos != dstr.size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad cm oracle spec: " + spec);
    }
    DegreeTable table;
    if (colon != std::string::npos) table = load_degree_table(rest.substr(colon + 1));
    return DegreeOracle::cm(D, std::move(table));
  }
  if (spec.rfind("table:", 0) == 0) {
    DegreeTable table = load_degree_table(spec.substr(6));
    u64 level = 1;
    for (const auto& entry : table) level = lcm(level, entry.first);
    return DegreeOracle::table_corrected(level, std::move(table));
  }
  throw std::invalid_argument("unknown oracle spec: " + spec + " (generic|cm:<D>|table:<path>)");
}

}  // namespace ecexp
