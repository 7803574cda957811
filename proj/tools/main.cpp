// Command line driver: scan shape ranges, query single cells, verify the
// bundled reference table, and run the Veronese cross-check family.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 backend
// or data failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "terracini/table_io.hpp"
#include "terracini/veronese.hpp"

using namespace terracini;

namespace {

struct BackendFlags {
  std::string backend = "exact";
  std::uint32_t prime = kDefaultPrime;
  double tol = 1e-8;
  double bound = 100.0;
  std::uint64_t seed = 0;
  int trials = 0;
  bool vary_prime = false;
  int jobs = 1;

  RankBackendConfig to_config() const {
    RankBackendConfig cfg;
    if (backend == "exact")
      cfg.mode = RankMode::exact_prime;
    else if (backend == "float")
      cfg.mode = RankMode::float_svd;
    else
      throw CLI::ValidationError("--backend", "must be 'exact' or 'float'");
    cfg.prime = prime;
    cfg.tolerance = tol;
    cfg.float_bound = bound;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.vary_prime = vary_prime;
    cfg.jobs = jobs;
    cfg.validate();
    return cfg;
  }
};

void add_backend_flags(CLI::App* cmd, BackendFlags& b) {
  cmd->add_option("--backend", b.backend, "rank backend: exact | float")
      ->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--prime", b.prime, "modulus for the exact backend (prime in [2^30, 2^31))");
  cmd->add_option("--tol", b.tol, "relative singular value cutoff for the float backend");
  cmd->add_option("--L", b.bound, "sampling interval half-width for the float backend");
  cmd->add_option("--seed", b.seed, "base seed; all per-cell randomness derives from it");
  cmd->add_option("--trials", b.trials, "independent samples per cell (0 = backend default)");
  cmd->add_flag("--vary-prime", b.vary_prime, "use a fresh prime for each extra trial");
  cmd->add_option("--jobs", b.jobs, "worker threads for elimination (0 = hardware)");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

std::string default_golden_path() {
  if (const char* env = std::getenv("TERRACINI_GOLDEN")) return env;
  return std::string(TERRACINI_DATA_DIR) + "/golden_tables.txt";
}

std::string default_cache_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("TERRACINI_CACHE_DIR"))
    return std::string(env) + "/scan_cache.txt";
  return {};
}

void print_record(const ScanRecord& rec, bool veronese) {
  std::cout << (veronese ? "veronese cell" : "cell") << " (k=" << rec.k
            << ", n=" << rec.n << ", s=" << rec.s << ")\n"
            << "  ambient N      " << rec.N << "\n"
            << "  saturation S   " << rec.S << "\n"
            << "  expected dim   " << rec.expected << "\n"
            << "  computed dim   " << rec.computed << "\n"
            << "  defect         " << rec.defect << "\n"
            << "  status         " << to_string(rec.status) << "\n"
            << "  backend        " << to_string(rec.mode);
  if (rec.mode == RankMode::exact_prime) std::cout << " p=" << rec.prime;
  std::cout << "\n  seed           " << rec.seed << "\n"
            << "  trials         " << rec.trials << "\n"
            << "  trial ranks    ";
  for (std::size_t i = 0; i < rec.per_trial_ranks.size(); ++i)
    std::cout << (i ? " " : "") << rec.per_trial_ranks[i];
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secant variety dimensions of Grassmannians via tangent-space rank"};
  app.require_subcommand(1);

  // scan
  auto* scan = app.add_subcommand("scan", "classify all cells in a shape range");
  ScanOptions scan_opts;
  BackendFlags scan_backend;
  std::string scan_format = "markdown", scan_out, scan_cache, continue_mode = "auto";
  bool star_defective = false;
  scan->add_option("--n-min", scan_opts.n_min, "smallest ambient dimension (>= 3)");
  scan->add_option("--n-max", scan_opts.n_max, "largest ambient dimension");
  scan->add_option("--k-max", scan_opts.k_max,
                   "largest k (0 = floor((n-1)/2), capped at 5 for n = 14; "
                   "set explicitly to reach dual shapes)");
  scan->add_option("--k-only", scan_opts.k_only, "restrict to a single k");
  scan->add_option("--s-max", scan_opts.s_max, "largest s (0 = saturation)");
  scan->add_option("--continue-past-S", continue_mode,
                   "keep increasing s while defective and unfilled: auto | off")
      ->check(CLI::IsMember({"auto", "off"}));
  scan->add_option("--format", scan_format, "output format: csv | json | markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));
  scan->add_flag("--star-defective", star_defective, "markdown: star defective entries");
  scan->add_option("--out", scan_out, "write the table here instead of stdout");
  scan->add_option("--cache", scan_cache,
                   "cell cache file (default: $TERRACINI_CACHE_DIR/scan_cache.txt)");
  scan->add_flag("--force", scan_opts.force, "recompute cells even on cache hits");
  add_backend_flags(scan, scan_backend);

  // cell
  auto* cell = app.add_subcommand("cell", "classify a single cell (k, n, s)");
  int cell_k = 0, cell_n = 0, cell_s = 0;
  BackendFlags cell_backend;
  std::string cell_dump;
  cell->add_option("-k,--k", cell_k, "subspace dimension k")->required();
  cell->add_option("-n,--n", cell_n, "ambient projective dimension n")->required();
  cell->add_option("-s,--s", cell_s, "number of secant points")->required();
  cell->add_option("--dump-matrix", cell_dump,
                   "write the first-trial tangent matrix to this file as text");
  add_backend_flags(cell, cell_backend);

  // verify
  auto* verify = app.add_subcommand("verify", "recompute the bundled reference table");
  VerifyBudget budget;
  BackendFlags verify_backend;
  std::string golden_flag;
  bool verify_quiet = false;
  verify->add_option("--n-min", budget.n_min, "smallest n to verify");
  verify->add_option("--n-max", budget.n_max, "largest n to verify");
  verify->add_option("--k-max", budget.k_max, "largest k to verify (0 = all)");
  verify->add_option("--k-only", budget.k_only, "restrict verification to one k");
  verify->add_option("--golden", golden_flag,
                     "reference table path (default: bundled asset, or $TERRACINI_GOLDEN)");
  verify->add_flag("--quiet", verify_quiet, "suppress per-cell progress lines");
  add_backend_flags(verify, verify_backend);

  // veronese
  auto* ver = app.add_subcommand("veronese", "classify veronese (symmetric power) cells");
  int ver_kmin = 1, ver_kmax = 5, ver_nmin = 1, ver_nmax = 4, ver_smax = 0;
  BackendFlags ver_backend;
  std::string ver_format = "markdown", ver_out;
  ver->add_option("--k-min", ver_kmin, "smallest degree");
  ver->add_option("--k-max", ver_kmax, "largest degree");
  ver->add_option("--n-min", ver_nmin, "smallest projective dimension");
  ver->add_option("--n-max", ver_nmax, "largest projective dimension");
  ver->add_option("--s-max", ver_smax, "largest s (0 = saturation)");
  ver->add_option("--format", ver_format, "output format: csv | json | markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));
  ver->add_option("--out", ver_out, "write the table here instead of stdout");
  add_backend_flags(ver, ver_backend);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*scan) {
      scan_opts.continue_past_saturation = continue_mode == "auto";
      scan_opts.cache_path = default_cache_path(scan_cache);
      auto records = scan_range(scan_opts, scan_backend.to_config());
      write_output(emit_table(records, table_format_from_string(scan_format), star_defective),
                   scan_out);
    } else if (*cell) {
      const RankBackendConfig cfg = cell_backend.to_config();
      ScanRecord rec = classify_cell(cell_k, cell_n, cell_s, cfg);
      print_record(rec, false);
      if (!cell_dump.empty()) {
        std::ofstream out(cell_dump);
        if (!out) throw std::runtime_error("cannot open dump file: " + cell_dump);
        MinorIndex idx(cell_n, cell_k);
        const std::uint64_t trial0 =
            mix_seed(detail::cell_seed(cfg.seed, cell_k, cell_n, cell_s), 0x72616e6bull);
        if (cfg.mode == RankMode::exact_prime) {
          PrimeField f(cfg.prime);
          dump_matrix(out, build_terracini(f, idx, cell_s, trial0, cfg.float_bound).data);
        } else {
          RealField f;
          dump_matrix(out, build_terracini(f, idx, cell_s, trial0, cfg.float_bound).data);
        }
      }
    } else if (*verify) {
      GoldenTable golden =
          load_golden(golden_flag.empty() ? default_golden_path() : golden_flag);
      const RankBackendConfig cfg = verify_backend.to_config();
      VerifyReport report = verify_against_golden(
          golden, budget, cfg, [&](const ScanRecord& r) {
            if (!verify_quiet)
              std::cout << "checked (k=" << r.k << ", n=" << r.n << ", s=" << r.s
                        << "): dim " << r.computed << "\n";
          });
      if (!report.ok()) {
        for (const auto& m : report.mismatches)
          std::cout << "MISMATCH at (k=" << m.k << ", n=" << m.n << ", s=" << m.s
                    << "): reference " << m.reference << ", computed " << m.computed
                    << "\n";
        std::cout << report.mismatches.size() << " mismatches in "
                  << report.cells_checked << " cells\n";
        return 1;
      }
      std::cout << "verified " << report.cells_checked << " cells, all matching\n";
    } else if (*ver) {
      const RankBackendConfig cfg = ver_backend.to_config();
      std::vector<ScanRecord> records;
      for (int n = ver_nmin; n <= ver_nmax; ++n)
        for (int k = ver_kmin; k <= ver_kmax; ++k) {
          const int S = veronese_saturation_s(k, n);
          const int s_hi = ver_smax > 0 ? std::min(ver_smax, S) : S;
          for (int s = 2; s <= s_hi; ++s)
            records.push_back(veronese_classify(k, n, s, cfg));
        }
      write_output(emit_table(records, table_format_from_string(ver_format)), ver_out);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
