#pragma once

// Table emission (CSV, JSON, markdown), the frozen reference table asset,
// and verification of computed dimensions against it.
//
// The reference asset is a checksummed text file listing, for each (k, n),
// the published secant dimensions from s = 2 upward with defective entries
// starred. Its checksum guards against silent edits: verification against a
// corrupted asset must fail loudly, not report false mismatches.

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "terracini/scan.hpp"

namespace terracini {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline const char* kCsvHeader =
    "n,k,s,N,S,expected_dim,computed_dim,defect,status,backend,prime,seed,trials";

inline std::string emit_csv(const std::vector<ScanRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.n << ',' << r.k << ',' << r.s << ',' << r.N << ',' << r.S << ','
       << r.expected << ',' << r.computed << ',' << r.defect << ','
       << to_string(r.status) << ',' << to_string(r.mode) << ',' << r.prime << ','
       << r.seed << ',' << r.trials << '\n';
  }
  return os.str();
}

inline std::vector<ScanRecord> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  std::vector<ScanRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13)
      throw std::invalid_argument("parse_csv: wrong field count in: " + line);
    ScanRecord r;
    r.n = std::stoi(cells[0]);
    r.k = std::stoi(cells[1]);
    r.s = std::stoi(cells[2]);
    r.N = std::stoll(cells[3]);
    r.S = std::stoi(cells[4]);
    r.expected = std::stoll(cells[5]);
    r.computed = std::stoll(cells[6]);
    r.defect = std::stoi(cells[7]);
    r.status = cell_status_from_string(cells[8]);
    if (cells[9] == "exact")
      r.mode = RankMode::exact_prime;
    else if (cells[9] == "float")
      r.mode = RankMode::float_svd;
    else
      throw std::invalid_argument("parse_csv: unknown backend: " + cells[9]);
    r.prime = static_cast<std::uint32_t>(std::stoul(cells[10]));
    r.seed = std::stoull(cells[11]);
    r.trials = std::stoi(cells[12]);
    out.push_back(std::move(r));
  }
  return out;
}

// Fields CSV carries, for round-trip comparisons (per-trial evidence is CLI
// output only, not part of the table schema).
inline bool csv_equal(const ScanRecord& a, const ScanRecord& b) {
  return a.n == b.n && a.k == b.k && a.s == b.s && a.N == b.N && a.S == b.S &&
         a.expected == b.expected && a.computed == b.computed && a.defect == b.defect &&
         a.status == b.status && a.mode == b.mode && a.prime == b.prime &&
         a.seed == b.seed && a.trials == b.trials;
}

inline std::string emit_json(const std::vector<ScanRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["n"] = r.n;
    o["k"] = r.k;
    o["s"] = r.s;
    o["N"] = r.N;
    o["S"] = r.S;
    o["expected_dim"] = r.expected;
    o["computed_dim"] = r.computed;
    o["defect"] = r.defect;
    o["status"] = to_string(r.status);
    o["backend"] = to_string(r.mode);
    o["prime"] = r.prime;
    o["seed"] = r.seed;
    o["trials"] = r.trials;
    o["per_trial_ranks"] = r.per_trial_ranks;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

// One table row per (k, n) in survey layout: dimensions across s = 2..,
// defect shown inline, or starred in the publication's style.
inline std::string emit_markdown(const std::vector<ScanRecord>& records,
                                 bool star_defective = false) {
  // group by (n, k) preserving record order within a group
  std::vector<std::pair<std::pair<int, int>, std::vector<const ScanRecord*>>> groups;
  for (const auto& r : records) {
    const std::pair<int, int> key{r.n, r.k};
    if (groups.empty() || groups.back().first != key) groups.push_back({key, {}});
    groups.back().second.push_back(&r);
  }
  int max_s = 2;
  for (const auto& r : records) max_s = std::max(max_s, r.s);

  std::ostringstream os;
  os << "| N | S | k | n |";
  for (int s = 2; s <= max_s; ++s) os << " s=" << s << " |";
  os << '\n';
  os << "|---|---|---|---|";
  for (int s = 2; s <= max_s; ++s) os << "---|";
  os << '\n';
  for (const auto& [key, rows] : groups) {
    const ScanRecord* first = rows.front();
    os << "| " << first->N << " | " << first->S << " | " << key.second << " | "
       << key.first << " |";
    int next_s = 2;
    for (const ScanRecord* r : rows) {
      for (; next_s < r->s; ++next_s) os << " |";  // gap (non-contiguous s range)
      os << ' ' << r->computed;
      if (r->defect > 0) {
        if (star_defective)
          os << "*";
        else
          os << " (defect " << r->defect << ")";
      }
      os << " |";
      ++next_s;
    }
    for (; next_s <= max_s; ++next_s) os << " |";
    os << '\n';
  }
  return os.str();
}

enum class TableFormat { csv, json, markdown };

inline TableFormat table_format_from_string(const std::string& s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  if (s == "markdown") return TableFormat::markdown;
  throw std::invalid_argument("unknown table format: " + s);
}

inline std::string emit_table(const std::vector<ScanRecord>& records, TableFormat fmt,
                              bool star_defective = false) {
  switch (fmt) {
    case TableFormat::csv: return emit_csv(records);
    case TableFormat::json: return emit_json(records);
    case TableFormat::markdown: return emit_markdown(records, star_defective);
  }
  throw std::logic_error("emit_table: bad format");
}

struct GoldenDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GoldenRow {
  int n = 0, k = 0;
  std::int64_t N = 0;
  int S = 0;  // as published; one row prints a value differing from the formula
  std::vector<std::int64_t> dims;   // s = 2 .. 1 + dims.size()
  std::vector<bool> starred;        // defective marks, aligned with dims
};

struct GoldenTable {
  std::vector<GoldenRow> rows;

  const GoldenRow* find(int k, int n) const {
    for (const auto& r : rows)
      if (r.k == k && r.n == n) return &r;
    return nullptr;
  }
};

// Serialize rows to the asset body (no checksum line). Kept next to the
// loader so tooling and tests can restamp a modified asset.
inline std::string golden_body(const GoldenTable& t) {
  std::ostringstream os;
  for (const auto& r : t.rows) {
    os << "row n=" << r.n << " k=" << r.k << " N=" << r.N << " S=" << r.S << " dims=";
    for (std::size_t i = 0; i < r.dims.size(); ++i) {
      if (i) os << ',';
      os << r.dims[i];
      if (r.starred[i]) os << '*';
    }
    os << '\n';
  }
  return os.str();
}

inline std::string golden_serialize(const GoldenTable& t) {
  const std::string body = golden_body(t);
  std::ostringstream os;
  os << "# reference secant dimension table\n";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(body)));
  os << "# checksum fnv1a64 " << hex << '\n';
  os << body;
  return os.str();
}

inline GoldenTable parse_golden(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::uint64_t> declared;
  std::string body;
  bool in_body = false;
  while (std::getline(in, line)) {
    if (!in_body && line.rfind("# checksum fnv1a64 ", 0) == 0) {
      declared = std::stoull(line.substr(19), nullptr, 16);
      in_body = true;
      continue;
    }
    if (in_body) body += line + "\n";
  }
  if (!declared) throw GoldenDataError(origin + ": missing checksum line");
  if (fnv1a64(body) != *declared)
    throw GoldenDataError(origin + ": checksum mismatch; asset was modified");

  GoldenTable table;
  std::istringstream rows(body);
  while (std::getline(rows, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tok;
    fields >> tok;
    if (tok != "row") throw GoldenDataError(origin + ": expected row line, got: " + line);
    GoldenRow row;
    std::string dims_text;
    while (fields >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw GoldenDataError(origin + ": malformed field: " + tok);
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "n") row.n = std::stoi(val);
      else if (key == "k") row.k = std::stoi(val);
      else if (key == "N") row.N = std::stoll(val);
      else if (key == "S") row.S = std::stoi(val);
      else if (key == "dims") dims_text = val;
      else throw GoldenDataError(origin + ": unknown field: " + key);
    }
    std::istringstream ds(dims_text);
    std::string d;
    while (std::getline(ds, d, ',')) {
      bool star = !d.empty() && d.back() == '*';
      if (star) d.pop_back();
      row.dims.push_back(std::stoll(d));
      row.starred.push_back(star);
    }
    if (row.dims.empty()) throw GoldenDataError(origin + ": row without dims: " + line);

    // internal consistency: starred exactly when below the expected dimension
    for (std::size_t i = 0; i < row.dims.size(); ++i) {
      const int s = static_cast<int>(i) + 2;
      const std::int64_t exp = expected_dim(row.k, row.n, s);
      if (row.starred[i] != (row.dims[i] < exp) || row.dims[i] > exp) {
        std::ostringstream msg;
        msg << origin << ": inconsistent entry at (k=" << row.k << ", n=" << row.n
            << ", s=" << s << "): dim " << row.dims[i] << (row.starred[i] ? "*" : "")
            << " vs expected " << exp;
        throw GoldenDataError(msg.str());
      }
    }
    if (row.N != plucker_ambient_dim(row.k, row.n))
      throw GoldenDataError(origin + ": ambient dimension mismatch in row");
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw GoldenDataError(origin + ": no rows");
  return table;
}

inline GoldenTable load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GoldenDataError("cannot open reference table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_golden(buf.str(), path);
}

struct VerifyMismatch {
  int k = 0, n = 0, s = 0;
  std::int64_t reference = 0;
  std::int64_t computed = 0;
};

struct VerifyReport {
  std::size_t cells_checked = 0;
  std::vector<VerifyMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

struct VerifyBudget {
  int n_min = 3;
  int n_max = 9;
  int k_max = 0;   // 0 = everything the table has
  int k_only = 0;  // 0 = all k
};

// Recompute every in-budget cell of the reference table and compare
// dimensions. `on_cell` (optional) observes progress.
inline VerifyReport verify_against_golden(
    const GoldenTable& golden, const VerifyBudget& budget, const RankBackendConfig& cfg,
    const std::function<void(const ScanRecord&)>& on_cell = {}) {
  VerifyReport report;
  for (const auto& row : golden.rows) {
    if (row.n < budget.n_min || row.n > budget.n_max) continue;
    if (budget.k_max > 0 && row.k > budget.k_max) continue;
    if (budget.k_only > 0 && row.k != budget.k_only) continue;
    CellContext ctx(row.n, row.k);
    for (std::size_t i = 0; i < row.dims.size(); ++i) {
      const int s = static_cast<int>(i) + 2;
      ScanRecord rec = classify_cell(ctx, row.k, row.n, s, cfg);
      ++report.cells_checked;
      if (on_cell) on_cell(rec);
      if (rec.computed != row.dims[i])
        report.mismatches.push_back({row.k, row.n, s, row.dims[i], rec.computed});
    }
  }
  return report;
}

}  // namespace terracini
