#pragma once

// Cell classification: for a cell (k, n, s), compare the computed dimension
// of the s-th secant of G(k, n) against the expected dimension, and scan
// whole (k, n) ranges the way the survey tables are laid out. A registry of
// provable dimensions (small-s general position, the line case, the four
// sporadic defective cells) cross-checks every exact-mode result.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "terracini/combinatorics.hpp"
#include "terracini/rank.hpp"
#include "terracini/tangent.hpp"

namespace terracini {

struct RegistryContradiction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dim G(k, n) = (k+1)(n-k); ambient Plucker space has dimension N.
inline std::int64_t grassmannian_dim(int k, int n) {
  return static_cast<std::int64_t>(k + 1) * (n - k);
}

inline std::int64_t plucker_ambient_dim(int k, int n) {
  return static_cast<std::int64_t>(
             binomial(static_cast<unsigned>(n + 1), static_cast<unsigned>(k + 1))) -
         1;
}

// min(N, s dim + s - 1): the count-of-parameters upper bound, attained
// exactly when the cell is not defective.
inline std::int64_t expected_dim(int k, int n, int s) {
  if (n < 1 || k < 0 || k >= n) throw std::invalid_argument("expected_dim: need 0 <= k < n");
  if (s < 1) throw std::invalid_argument("expected_dim: need s >= 1");
  const std::int64_t N = plucker_ambient_dim(k, n);
  const std::int64_t param = s * (grassmannian_dim(k, n) + 1) - 1;
  return std::min(N, param);
}

// Smallest s whose expected dimension reaches the ambient space.
inline int saturation_s(int k, int n) {
  const std::int64_t N = plucker_ambient_dim(k, n);
  const std::int64_t per = grassmannian_dim(k, n) + 1;
  return static_cast<int>((N + per) / per);  // ceil((N + 1) / per)
}

// Closed form for k = 1: secants of the Grassmannian of lines, as cones of
// bounded-rank skew-symmetric matrices. C(m, 2) vanishes for m < 2.
inline std::int64_t lines_secant_dim(int n, int s) {
  if (n < 2) throw std::invalid_argument("lines_secant_dim: need n >= 2");
  if (s < 1) throw std::invalid_argument("lines_secant_dim: need s >= 1");
  const std::int64_t N = plucker_ambient_dim(1, n);
  const int m = n + 1 - 2 * s;
  const std::int64_t drop =
      m >= 2 ? static_cast<std::int64_t>(binomial(static_cast<unsigned>(m), 2u)) : 0;
  return std::min(N, N - drop);
}

struct SporadicDefect {
  int k, n, s, defect;
};

// The only defective cells with k >= 2 in the surveyed range n <= 14.
inline constexpr SporadicDefect kSporadicDefects[] = {
    {2, 6, 3, 1},
    {3, 7, 3, 1},
    {3, 7, 4, 4},
    {2, 8, 4, 2},
};

// Provable dimensions. Lookups reduce k through the duality
// G(k, n) = G(n-1-k, n), under which expected_dim is invariant.
class DefectRegistry {
 public:
  static int dual_k(int k, int n) { return std::min(k, n - 1 - k); }

  static std::optional<int> sporadic_defect(int k, int n, int s) {
    const int kk = dual_k(k, n);
    for (const auto& d : kSporadicDefects)
      if (d.k == kk && d.n == n && d.s == s) return d.defect;
    return std::nullopt;
  }

  // s(k+1) <= n+1 guarantees the expected dimension for k >= 2.
  static bool small_s_guaranteed(int k, int n, int s) {
    const int kk = dual_k(k, n);
    return kk >= 2 && static_cast<std::int64_t>(s) * (kk + 1) <= n + 1;
  }

  // Dimension pinned by a theorem, when one applies.
  static std::optional<std::int64_t> known_dim(int k, int n, int s) {
    const int kk = dual_k(k, n);
    if (kk <= 0) return expected_dim(k, n, s);  // projective space: always fills
    if (kk == 1) return lines_secant_dim(n, s);
    if (auto d = sporadic_defect(k, n, s)) return expected_dim(k, n, s) - *d;
    if (small_s_guaranteed(k, n, s)) return expected_dim(k, n, s);
    return std::nullopt;
  }
};

enum class CellStatus {
  certified_nondefective,   // defect 0 established by the exact backend
  presumed_nondefective,    // defect 0 seen by the float backend only
  candidate_defective,      // defect > 0, no theorem confirms it
  oracle_confirmed_defective  // defect > 0 matching a known dimension
};

inline std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::certified_nondefective: return "certified_nondefective";
    case CellStatus::presumed_nondefective: return "presumed_nondefective";
    case CellStatus::candidate_defective: return "candidate_defective";
    case CellStatus::oracle_confirmed_defective: return "oracle_confirmed_defective";
  }
  return "unknown";
}

inline CellStatus cell_status_from_string(const std::string& s) {
  if (s == "certified_nondefective") return CellStatus::certified_nondefective;
  if (s == "presumed_nondefective") return CellStatus::presumed_nondefective;
  if (s == "candidate_defective") return CellStatus::candidate_defective;
  if (s == "oracle_confirmed_defective") return CellStatus::oracle_confirmed_defective;
  throw std::invalid_argument("unknown cell status: " + s);
}

struct ScanRecord {
  int k = 0, n = 0, s = 0;
  std::int64_t N = 0;          // ambient dimension
  int S = 0;                   // saturation value for (k, n)
  std::int64_t expected = 0;
  std::int64_t computed = 0;
  int defect = 0;
  CellStatus status = CellStatus::certified_nondefective;
  RankMode mode = RankMode::exact_prime;
  std::uint32_t prime = 0;     // 0 in float mode
  std::uint64_t seed = 0;      // base seed the cell seed was derived from
  int trials = 0;              // trials actually run
  std::vector<std::size_t> per_trial_ranks;  // evidence; not part of the CSV schema
};

// Per-(k, n) reusable state: the subset tables are the expensive part of
// small cells.
struct CellContext {
  MinorIndex index;
  explicit CellContext(int n, int k) : index(n, k) {}
};

namespace detail {

inline std::uint64_t cell_seed(std::uint64_t base, int k, int n, int s) {
  return mix_seed(mix_seed(mix_seed(base, static_cast<std::uint64_t>(k)),
                           static_cast<std::uint64_t>(n) + 0x100),
                  static_cast<std::uint64_t>(s) + 0x10000);
}

}  // namespace detail

// Classify one cell. Exact-mode results that contradict a registry theorem
// abort loudly: that means a bug, not a discovery.
inline ScanRecord classify_cell(const CellContext& ctx, int k, int n, int s,
                                const RankBackendConfig& cfg) {
  ScanRecord rec;
  rec.k = k;
  rec.n = n;
  rec.s = s;
  rec.N = plucker_ambient_dim(k, n);
  rec.S = saturation_s(k, n);
  rec.expected = expected_dim(k, n, s);
  rec.mode = cfg.mode;
  rec.prime = cfg.mode == RankMode::exact_prime ? cfg.prime : 0;
  rec.seed = cfg.seed;

  RankBackendConfig cell_cfg = cfg;
  cell_cfg.seed = detail::cell_seed(cfg.seed, k, n, s);
  const std::size_t cap = static_cast<std::size_t>(rec.expected) + 1;
  auto build = [&](std::uint64_t seed, const auto& f) {
    return build_terracini(f, ctx.index, s, seed, cfg.float_bound).data;
  };
  RankResult rr = certified_rank(build, cell_cfg, cap);

  rec.computed = static_cast<std::int64_t>(rr.rank) - 1;
  rec.trials = static_cast<int>(rr.per_trial_ranks.size());
  rec.per_trial_ranks = std::move(rr.per_trial_ranks);

  if (rec.computed > rec.expected) {
    if (cfg.mode == RankMode::exact_prime)
      throw std::logic_error("classify_cell: exact rank above the parameter-count bound");
    throw std::runtime_error(
        "classify_cell: float rank exceeds the parameter-count bound; tolerance too tight");
  }
  rec.defect = static_cast<int>(rec.expected - rec.computed);

  const auto known = DefectRegistry::known_dim(k, n, s);
  if (cfg.mode == RankMode::exact_prime && known && rec.computed != *known) {
    std::ostringstream msg;
    msg << "registry contradiction at (k=" << k << ", n=" << n << ", s=" << s
        << "): computed " << rec.computed << ", theorem gives " << *known;
    throw RegistryContradiction(msg.str());
  }

  if (rec.defect == 0) {
    rec.status = cfg.mode == RankMode::exact_prime ? CellStatus::certified_nondefective
                                                   : CellStatus::presumed_nondefective;
  } else {
    rec.status = (known && *known == rec.computed)
                     ? CellStatus::oracle_confirmed_defective
                     : CellStatus::candidate_defective;
  }
  return rec;
}

inline ScanRecord classify_cell(int k, int n, int s, const RankBackendConfig& cfg) {
  if (n < 1 || k < 0 || k >= n) throw std::invalid_argument("classify_cell: need 0 <= k < n");
  if (s < 1) throw std::invalid_argument("classify_cell: need s >= 1");
  CellContext ctx(n, k);
  return classify_cell(ctx, k, n, s, cfg);
}

// Append-only cache of finished cells, keyed by everything that affects the
// result. Records are flushed as they are written, so an interrupted scan
// keeps its partial work.
class ScanCache {
 public:
  explicit ScanCache(std::string path) : path_(std::move(path)) { load(); }

  const std::string& path() const { return path_; }

  static std::string key(int k, int n, int s, RankMode mode, std::uint32_t prime,
                         std::uint64_t seed, int trials) {
    std::ostringstream os;
    os << "k=" << k << " n=" << n << " s=" << s << " mode=" << to_string(mode)
       << " prime=" << prime << " seed=" << seed << " trials=" << trials;
    return os.str();
  }

  std::optional<ScanRecord> lookup(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::string& key, const ScanRecord& rec) {
    entries_[key] = rec;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("ScanCache: cannot open " + path_ + " for append");
    out << key << " | N=" << rec.N << " S=" << rec.S << " expected=" << rec.expected
        << " computed=" << rec.computed << " defect=" << rec.defect
        << " status=" << to_string(rec.status) << " trials_run=" << rec.trials << '\n';
    out.flush();
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;  // fresh cache
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto bar = line.find(" | ");
      if (bar == std::string::npos)
        throw std::runtime_error("ScanCache: malformed line in " + path_ + ": " + line);
      std::map<std::string, std::string> kv;
      std::istringstream fields(line.substr(0, bar) + " " + line.substr(bar + 3));
      std::string tok;
      while (fields >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("ScanCache: malformed field in " + path_ + ": " + tok);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      ScanRecord rec;
      rec.k = std::stoi(kv.at("k"));
      rec.n = std::stoi(kv.at("n"));
      rec.s = std::stoi(kv.at("s"));
      rec.mode = kv.at("mode") == "exact" ? RankMode::exact_prime : RankMode::float_svd;
      rec.prime = static_cast<std::uint32_t>(std::stoul(kv.at("prime")));
      rec.seed = std::stoull(kv.at("seed"));
      rec.N = std::stoll(kv.at("N"));
      rec.S = std::stoi(kv.at("S"));
      rec.expected = std::stoll(kv.at("expected"));
      rec.computed = std::stoll(kv.at("computed"));
      rec.defect = std::stoi(kv.at("defect"));
      rec.status = cell_status_from_string(kv.at("status"));
      rec.trials = std::stoi(kv.at("trials_run"));
      entries_[key(rec.k, rec.n, rec.s, rec.mode, rec.prime, rec.seed,
                   std::stoi(kv.at("trials")))] = rec;
    }
  }

  std::string path_;
  std::map<std::string, ScanRecord> entries_;
};

struct ScanOptions {
  int n_min = 3;
  int n_max = 14;
  int k_max = 0;    // 0 = floor((n-1)/2), additionally capped at 5 for n = 14
  int k_only = 0;   // 0 = all k in range
  int s_max = 0;    // 0 = saturation value
  bool continue_past_saturation = true;
  std::string cache_path;  // empty = no cache
  bool force = false;      // recompute even on cache hit
};

inline int default_k_cap(int n) {
  int cap = (n - 1) / 2;
  if (n >= 14) cap = std::min(cap, 5);
  return cap;
}

// Scan a rectangle of shapes the way the survey tables are organized:
// s = 2..S for each (k, n), continuing past S while the chain is defective
// and has not filled the ambient space.
inline std::vector<ScanRecord> scan_range(const ScanOptions& opts,
                                          const RankBackendConfig& cfg) {
  if (opts.n_min < 3) throw std::invalid_argument("scan_range: need n_min >= 3");
  if (opts.n_max < opts.n_min) throw std::invalid_argument("scan_range: need n_max >= n_min");
  std::optional<ScanCache> cache;
  if (!opts.cache_path.empty()) cache.emplace(opts.cache_path);

  std::vector<ScanRecord> out;
  for (int n = opts.n_min; n <= opts.n_max; ++n) {
    const int k_hi = opts.k_max > 0 ? std::min(opts.k_max, n - 1) : default_k_cap(n);
    for (int k = 1; k <= k_hi; ++k) {
      if (opts.k_only > 0 && k != opts.k_only) continue;
      CellContext ctx(n, k);
      const int S = saturation_s(k, n);
      const std::int64_t N = plucker_ambient_dim(k, n);
      const int s_hi = opts.s_max > 0 ? std::min(opts.s_max, S) : S;
      const int hard_cap = 3 * S;

      auto run_cell = [&](int s) {
        const std::string key = ScanCache::key(k, n, s, cfg.mode, cfg.prime, cfg.seed,
                                               cfg.effective_trials());
        if (cache && !opts.force) {
          if (auto hit = cache->lookup(key)) {
            out.push_back(*hit);
            return;
          }
        }
        ScanRecord rec = classify_cell(ctx, k, n, s, cfg);
        if (cache) cache->store(key, rec);
        out.push_back(rec);
      };

      for (int s = 2; s <= s_hi; ++s) run_cell(s);
      if (opts.continue_past_saturation && s_hi == S && !out.empty()) {
        int s = S;
        while (s < hard_cap) {
          const ScanRecord& last = out.back();
          if (!(last.k == k && last.n == n && last.s == s)) break;
          if (last.defect == 0 || last.computed >= N) break;
          ++s;
          run_cell(s);
        }
      }
    }
  }
  return out;
}

}  // namespace terracini
