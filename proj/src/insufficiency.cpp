#include "qap/insufficiency.hpp"

#include <algorithm>
#include <stdexcept>

#include "qap/rng.hpp"

namespace qap {

long long MonomialBasis::deg1_index(int v) const {
  return v;
}

long long MonomialBasis::deg2_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  long long V = var_count;
  long long off = static_cast<long long>(a) * V - static_cast<long long>(a) * (a - 1) / 2;
  return V + off + (b - a);
}

std::string MonomialBasis::monomial_name(long long idx) const {
  auto var_name = [this](int v) {
    if (v == var_count - 1) return std::string("z");
    return "x[" + std::to_string(v / n + 1) + "," + std::to_string(v % n + 1) + "]";
  };
  if (idx < var_count) return var_name(static_cast<int>(idx));
  long long rest = idx - var_count;
  for (int a = 0; a < var_count; ++a) {
    long long row = var_count - a;
    if (rest < row) return var_name(a) + "*" + var_name(a + static_cast<int>(rest));
    rest -= row;
  }
  throw std::out_of_range("monomial_name: index past basis");
}

MonomialBasis make_basis(int n) {
  if (n < 1) throw std::invalid_argument("make_basis: n must be positive");
  MonomialBasis b;
  b.n = n;
  b.var_count = n * n + 1;
  long long V = b.var_count;
  b.size = V + V * (V + 1) / 2;
  return b;
}

namespace {

std::vector<std::pair<long long, Rational>> expand_y(const Permutation& sigma,
                                                     const MonomialBasis& basis,
                                                     bool subtract_linear) {
  int n = sigma.n();
  if (n != basis.n) throw std::invalid_argument("moment_vector: size mismatch");
  int z = basis.var_count - 1;
  std::vector<int> cells(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cells[static_cast<std::size_t>(i)] = cell_index(n, i, sigma(i));

  std::vector<std::pair<long long, Rational>> out;
  out.reserve(static_cast<std::size_t>(n) * (n + 3) / 2 + 3);
  if (subtract_linear) {
    for (int i = 0; i < n; ++i)
      out.emplace_back(basis.deg1_index(cells[static_cast<std::size_t>(i)]), -1);
    out.emplace_back(basis.deg1_index(z), -1);
  }
  for (int i = 0; i < n; ++i) {
    int ci = cells[static_cast<std::size_t>(i)];
    out.emplace_back(basis.deg2_index(ci, ci), 1);
    for (int k = i + 1; k < n; ++k)
      out.emplace_back(basis.deg2_index(ci, cells[static_cast<std::size_t>(k)]), 2);
    out.emplace_back(basis.deg2_index(ci, z), 2);
  }
  out.emplace_back(basis.deg2_index(z, z), 1);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace

std::vector<std::pair<long long, Rational>> moment_vector(const Permutation& sigma,
                                                          const MonomialBasis& basis) {
  return expand_y(sigma, basis, true);
}

std::vector<std::pair<long long, Rational>> square_vector(const Permutation& sigma,
                                                          const MonomialBasis& basis) {
  return expand_y(sigma, basis, false);
}

DenseMatrix moment_matrix(int n, const MonomialBasis& basis) {
  auto perms = enumerate_permutations(n);
  DenseMatrix m(perms.size(), static_cast<std::size_t>(basis.size));
  for (std::size_t r = 0; r < perms.size(); ++r)
    for (const auto& [idx, c] : moment_vector(perms[r], basis))
      m.at(r, static_cast<std::size_t>(idx)) = c;
  return m;
}

long long span_dimension_bound(int n) {
  if (n < 2) throw std::invalid_argument("span_dimension_bound: n must be >= 2");
  long long n2 = static_cast<long long>(n) * n;
  return 1 + (n2 + 1) + (n2 * n2 + n2) / 2;
}

DependenceCertificate dependence_certificate(int n, std::uint64_t seed, int points,
                                             bool allow_large) {
  if (!(n == 6 || (allow_large && n == 7)))
    throw std::invalid_argument("dependence_certificate: guarded to n = 6 (n = 7 behind flag)");

  MonomialBasis basis = make_basis(n);
  auto perms = enumerate_permutations(n);
  DenseMatrix m = moment_matrix(n, basis);
  auto kernel = nullspace_vector(m.transposed());
  if (!kernel) {
    auto r = rank(m, RankMode::modp);
    throw std::runtime_error("dependence_certificate: no kernel found, moment matrix rank " +
                             std::to_string(r) + " over " + std::to_string(perms.size()) +
                             " rows");
  }

  DependenceCertificate cert;
  cert.n = n;
  // prune to the support and rescale to coprime integers
  BigInt den_lcm = 1, num_gcd = 0;
  for (const auto& a : *kernel) {
    if (a == 0) continue;
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), a.get_den().get_mpz_t());
  }
  std::vector<Rational> scaled;
  for (std::size_t i = 0; i < kernel->size(); ++i) {
    if ((*kernel)[i] == 0) continue;
    Rational v = (*kernel)[i] * Rational(den_lcm);
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num().get_mpz_t());
    cert.support.push_back(perms[i]);
    scaled.push_back(v);
  }
  if (num_gcd == 0) num_gcd = 1;
  bool flip = !scaled.empty() && scaled.front() < 0;
  for (auto& v : scaled) {
    v /= Rational(num_gcd);
    if (flip) v = -v;
  }
  cert.alpha = std::move(scaled);

  if (cert.support.size() < 3)
    throw std::runtime_error("dependence_certificate: support smaller than 3");

  bool has_pos = false, has_neg = false;
  for (const auto& v : cert.alpha) {
    if (v > 0) has_pos = true;
    if (v < 0) has_neg = true;
  }
  cert.mixed_signs = has_pos && has_neg;

  // symbolic re-check over the whole basis
  std::vector<Rational> acc(static_cast<std::size_t>(basis.size));
  for (std::size_t s = 0; s < cert.support.size(); ++s)
    for (const auto& [idx, c] : moment_vector(cert.support[s], basis))
      acc[static_cast<std::size_t>(idx)] += cert.alpha[s] * c;
  for (const auto& v : acc)
    if (v != 0) throw std::logic_error("dependence_certificate: symbolic residual nonzero");

  // numeric re-check at random integer points
  Rng rng(seed);
  for (int pt = 0; pt < points; ++pt) {
    std::vector<long long> x(static_cast<std::size_t>(n) * n);
    for (auto& v : x) v = rng.int_in(-10, 10);
    long long z = rng.int_in(-10, 10);
    Rational total = 0;
    for (std::size_t s = 0; s < cert.support.size(); ++s) {
      long long y = z;
      const Permutation& sigma = cert.support[s];
      for (int i = 0; i < n; ++i) y += x[static_cast<std::size_t>(cell_index(n, i, sigma(i)))];
      total += cert.alpha[s] * to_rational(y * y - y);
    }
    if (total != 0) throw std::logic_error("dependence_certificate: point residual nonzero");
  }
  cert.points_checked = points;
  cert.residual_checked = true;
  return cert;
}

namespace {

long long rows_rank(const DenseMatrix& m, bool exact, const ModpOptions& opts) {
  return static_cast<long long>(rank(m, exact ? RankMode::exact : RankMode::modp, opts));
}

bool annihilates(const DenseMatrix& mt, const std::vector<Rational>& v) {
  for (std::size_t r = 0; r < mt.rows; ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < mt.cols; ++c)
      if (v[c] != 0 && mt.at(r, c) != 0) acc += mt.at(r, c) * v[c];
    if (acc != 0) return false;
  }
  return true;
}

}  // namespace

SssReport check_sss_equivalence(int n, const ModpOptions& opts) {
  if (n < 2 || n > 6) throw std::invalid_argument("check_sss_equivalence: guarded to 2 <= n <= 6");
  MonomialBasis basis = make_basis(n);
  auto perms = enumerate_permutations(n);

  DenseMatrix m1(perms.size(), static_cast<std::size_t>(basis.size));
  DenseMatrix m2(perms.size(), static_cast<std::size_t>(basis.size));
  for (std::size_t r = 0; r < perms.size(); ++r) {
    for (const auto& [idx, c] : moment_vector(perms[r], basis))
      m1.at(r, static_cast<std::size_t>(idx)) = c;
    for (const auto& [idx, c] : square_vector(perms[r], basis))
      m2.at(r, static_cast<std::size_t>(idx)) = c;
  }

  // dependence spaces coincide iff the two row families (as column spans of
  // the transposes) have equal span; rank equality of each with the joint
  // block settles it
  DenseMatrix joint(perms.size(), 2 * static_cast<std::size_t>(basis.size));
  for (std::size_t r = 0; r < perms.size(); ++r)
    for (std::size_t c = 0; c < static_cast<std::size_t>(basis.size); ++c) {
      joint.at(r, c) = m1.at(r, c);
      joint.at(r, c + static_cast<std::size_t>(basis.size)) = m2.at(r, c);
    }

  bool exact = n <= 4;
  SssReport rep;
  rep.rank_moment = rows_rank(m1, exact, opts);
  rep.rank_square = rows_rank(m2, exact, opts);
  rep.rank_joint = rows_rank(joint, exact, opts);
  rep.equal = rep.rank_moment == rep.rank_square && rep.rank_square == rep.rank_joint;

  // exact spot check: a kernel vector of either side annihilates the other
  DenseMatrix m1t = m1.transposed();
  DenseMatrix m2t = m2.transposed();
  auto k1 = nullspace_vector(m1t);
  auto k2 = nullspace_vector(m2t);
  if (!k1 && !k2) {
    rep.spot_checked = true;  // both trivial, nothing to cross-check
  } else if (k1 && k2) {
    rep.spot_checked = annihilates(m2t, *k1) && annihilates(m1t, *k2);
  } else {
    rep.spot_checked = false;  // one side trivial, the other not: spaces differ
    rep.equal = false;
  }
  return rep;
}

}  // namespace qap
