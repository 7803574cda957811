#pragma once

// Rank backends. The exact backend eliminates over F_p; because the matrix
// entries are integer polynomials in the sample coordinates, a mod-p rank is
// a certified lower bound on the generic rank. The float backend counts
// singular values, mirroring the numeric approach the exact path replaces,
// and is kept as an independent cross-check.

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "terracini/field.hpp"
#include "terracini/matrix.hpp"
#include "terracini/tangent.hpp"

namespace terracini {

inline constexpr std::size_t kNoRankCap = std::numeric_limits<std::size_t>::max();

inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Row echelon rank over F_p. Consumes the matrix. `rank_cap` is an upper
// bound known in advance (for Terracini matrices, the expected cone rank
// bounds the true rank); elimination stops as soon as the cap is reached,
// which is exact, not an approximation, because no further pivot can exist.
inline std::size_t rank_exact(DenseMatrix<std::uint32_t> m, const PrimeField& f,
                              std::size_t rank_cap = kNoRankCap, int jobs = 1) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t cap = std::min({rank_cap, rows, cols});
  const std::uint32_t p = f.modulus();
  const int nt = resolve_jobs(jobs);
  std::vector<std::uint32_t> negpiv(cols);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < cap; ++col) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (m(r, col) != 0) { piv = r; break; }
    if (piv == rows) continue;
    m.swap_rows(piv, rank);
    const std::uint32_t* prow = m.row(rank);
    const std::uint32_t pinv = f.inv(prow[col]);
    for (std::size_t j = col; j < cols; ++j)
      negpiv[j] = prow[j] ? p - prow[j] : 0;
    const long long lo = static_cast<long long>(rank) + 1;
    const long long hi = static_cast<long long>(rows);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && hi - lo > 64)
    for (long long r = lo; r < hi; ++r) {
      std::uint32_t* row = m.row(static_cast<std::size_t>(r));
      const std::uint32_t lead = row[col];
      if (lead == 0) continue;
      const std::uint32_t factor = f.mul(lead, pinv);
      row[col] = 0;
      for (std::size_t j = col + 1; j < cols; ++j) {
        // row[j] += factor * (p - prow[j]); one Barrett reduction per entry
        const std::uint64_t t =
            row[j] + static_cast<std::uint64_t>(factor) * negpiv[j];
        row[j] = f.reduce_wide(t);
      }
    }
    ++rank;
  }
  return rank;
}

// Numerical rank: number of singular values above rel_tol * sigma_max.
inline std::size_t rank_float(const DenseMatrix<double>& m, double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rank_float: tolerance must be positive");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> view(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                  static_cast<Eigen::Index>(m.cols()));
  if (!view.allFinite())
    throw std::domain_error("rank_float: matrix has non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(view);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = rel_tol * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

enum class RankMode { exact_prime, float_svd };

inline std::string to_string(RankMode m) {
  return m == RankMode::exact_prime ? "exact" : "float";
}

struct RankBackendConfig {
  RankMode mode = RankMode::exact_prime;
  std::uint32_t prime = kDefaultPrime;
  double tolerance = 1e-8;      // relative SVD cutoff, float mode
  double float_bound = 100.0;   // sampling interval half-width, float mode
  int trials = 0;               // 0 = per-mode default (2 exact, 3 float)
  std::uint64_t seed = 0;
  bool vary_prime = false;      // fresh prime per extra trial
  int jobs = 1;                 // 0 = hardware concurrency

  int effective_trials() const {
    if (trials > 0) return trials;
    return mode == RankMode::exact_prime ? 2 : 3;
  }

  void validate() const {
    if (mode == RankMode::exact_prime) {
      if (prime < kMinScanPrime || (prime >> 31) != 0)
        throw std::invalid_argument("backend: prime must lie in [2^30, 2^31)");
      if (!is_prime_u64(prime))
        throw std::invalid_argument("backend: modulus " + std::to_string(prime) +
                                    " is not prime");
    }
    if (!(tolerance > 0.0)) throw std::invalid_argument("backend: tolerance must be positive");
    if (!(float_bound > 0.0)) throw std::invalid_argument("backend: float bound must be positive");
    if (trials < 0) throw std::invalid_argument("backend: trials must be >= 0");
    if (jobs < 0) throw std::invalid_argument("backend: jobs must be >= 0");
  }

  std::string id() const {
    if (mode == RankMode::exact_prime)
      return "exact(p=" + std::to_string(prime) + ")";
    return "float(tol=" + std::to_string(tolerance) + ")";
  }
};

struct RankResult {
  std::size_t rank = 0;                      // max over trials
  std::vector<std::size_t> per_trial_ranks;  // evidence, one entry per trial run
  RankBackendConfig backend;
  bool certified_lower_bound = false;        // true iff exact mode
};

// Run up to cfg.effective_trials() independent builds and keep the best
// rank. `build(seed, field)` must return the matrix for one trial. Stops
// early once a trial reaches `rank_cap` (the theoretical maximum): later
// trials cannot improve on it.
template <class BuildFn>
RankResult certified_rank(BuildFn&& build, const RankBackendConfig& cfg,
                          std::size_t rank_cap = kNoRankCap) {
  cfg.validate();
  RankResult out;
  out.backend = cfg;
  out.certified_lower_bound = (cfg.mode == RankMode::exact_prime);
  const int trials = cfg.effective_trials();
  std::uint32_t prime = cfg.prime;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, 0x72616e6bull + t);
    std::size_t r;
    if (cfg.mode == RankMode::exact_prime) {
      if (t > 0 && cfg.vary_prime) {
        prime = prev_prime_u32(prime - 1);
        if (prime < kMinScanPrime)
          throw std::invalid_argument("backend: ran out of primes in [2^30, 2^31)");
      }
      PrimeField f(prime);
      r = rank_exact(build(trial_seed, f), f, rank_cap, cfg.jobs);
    } else {
      RealField f;
      r = rank_float(build(trial_seed, f), cfg.tolerance);
    }
    out.per_trial_ranks.push_back(r);
    if (r >= rank_cap) break;
  }
  out.rank = *std::max_element(out.per_trial_ranks.begin(), out.per_trial_ranks.end());
  return out;
}

}  // namespace terracini
