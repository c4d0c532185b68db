#pragma once

// CSV persistence for weight arrays, fields, paths, interfaces and TASEP
// records. Numbers are written in shortest round-trip form so files read back
// bit-identically.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lpp/interface.hpp"

namespace lpp {

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  if (r.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, r.ptr);
}

/// Fixed-point with the given number of decimals, for human-readable reports.
inline std::string format_fixed(double v, int decimals) {
  char buf[128];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (r.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view s) {
  Int v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

/// Splits one CSV line. Fields may be quoted, with "" for a literal quote.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV line");
  return out;
}

namespace detail {
inline std::vector<std::string> read_row(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(std::string("unexpected end of file reading ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return split_csv_line(line);
}

inline void expect_header(std::istream& in, const std::vector<std::string>& header) {
  if (read_row(in, "header") != header) throw std::invalid_argument("unexpected CSV header");
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Weight arrays.
//
//   m,n,kind,rho,seed
//   <m>,<n>,<kind>,<rho or empty>,<seed or empty>
//   i,j,omega
//   0,0,0
//   ...

inline void write_weights_csv(std::ostream& out, const WeightArray& w) {
  out << "m,n,kind,rho,seed\n";
  out << w.m() << ',' << w.n() << ',' << kind_name(w.boundary()) << ',';
  if (auto rho = kind_density(w.boundary())) out << format_double(*rho);
  out << ',';
  if (w.provenance()) out << w.provenance()->seed;
  out << "\ni,j,omega\n";
  for (int j = 0; j <= w.n(); ++j) {
    for (int i = 0; i <= w.m(); ++i) out << i << ',' << j << ',' << format_double(w(i, j)) << '\n';
  }
}

/// Reads the format above. Equilibrium arrays whose values regenerate exactly
/// from the recorded seed get their provenance back. Rarefaction arrays come
/// back as Custom, since the multipliers are not stored.
inline WeightArray read_weights_csv(std::istream& in) {
  detail::expect_header(in, {"m", "n", "kind", "rho", "seed"});
  const auto meta = detail::read_row(in, "metadata");
  if (meta.size() != 5) throw std::invalid_argument("metadata row needs 5 fields");
  const int m = parse_integer<int>(meta[0]);
  const int n = parse_integer<int>(meta[1]);
  if (m < 0 || n < 0) throw std::invalid_argument("negative dimensions");
  const std::string& kind = meta[2];
  detail::expect_header(in, {"i", "j", "omega"});
  const std::size_t cells = static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1);
  std::vector<double> omega(cells, 0.0);
  std::vector<bool> seen(cells, false);
  for (std::size_t k = 0; k < cells; ++k) {
    const auto row = detail::read_row(in, "weights");
    if (row.size() != 3) throw std::invalid_argument("weight row needs 3 fields");
    const int i = parse_integer<int>(row[0]);
    const int j = parse_integer<int>(row[1]);
    if (i < 0 || j < 0 || i > m || j > n) throw std::invalid_argument("site outside declared dimensions");
    const std::size_t idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(i);
    if (seen[idx]) throw std::invalid_argument("duplicate site in weight file");
    seen[idx] = true;
    omega[idx] = parse_double(row[2]);
  }
  auto axes = [&] {
    Custom c;
    for (int i = 1; i <= m; ++i) c.south.push_back(omega[static_cast<std::size_t>(i)]);
    for (int j = 1; j <= n; ++j) c.west.push_back(omega[static_cast<std::size_t>(j) * static_cast<std::size_t>(m + 1)]);
    return c;
  };
  if (kind == "equilibrium") {
    const double rho = parse_double(meta[3]);
    std::optional<Provenance> prov;
    if (!meta[4].empty() && m >= 1 && n >= 1) {
      const auto seed = parse_integer<std::uint64_t>(meta[4]);
      for (bool transposed : {false, true}) {
        if (detail::equilibrium_values(rho, m, n, {seed, transposed}) == omega) {
          prov = Provenance{seed, transposed};
          break;
        }
      }
    }
    return WeightArray(m, n, std::move(omega), Equilibrium{rho}, prov);
  }
  if (kind == "zero-west") return WeightArray(m, n, std::move(omega), ZeroWest{});
  if (kind == "zero-south") return WeightArray(m, n, std::move(omega), ZeroSouth{});
  if (kind == "zero-both") return WeightArray(m, n, std::move(omega), ZeroBoth{});
  if (kind == "rarefaction" || kind == "custom") {
    Custom c = axes();
    return WeightArray(m, n, std::move(omega), std::move(c));
  }
  throw std::invalid_argument("unknown boundary kind: " + kind);
}

inline void save_weights(const std::filesystem::path& path, const WeightArray& w) {
  auto out = detail::open_output(path);
  write_weights_csv(out, w);
}

inline WeightArray load_weights(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_weights_csv(in);
}

// ---------------------------------------------------------------------------
// Fields, paths, interfaces. Undefined entries (I on i = 0, J on j = 0, X on
// the last row and column) are left empty.

inline void write_field_csv(std::ostream& out, const LppField& f) {
  out << "i,j,G,I,J,X\n";
  for (int j = 0; j <= f.n(); ++j) {
    for (int i = 0; i <= f.m(); ++i) {
      out << i << ',' << j << ',' << format_double(f.G(i, j)) << ',';
      if (i >= 1) out << format_double(f.I(i, j));
      out << ',';
      if (j >= 1) out << format_double(f.J(i, j));
      out << ',';
      if (i < f.m() && j < f.n()) out << format_double(f.X(i, j));
      out << '\n';
    }
  }
}

inline void write_sites_csv(std::ostream& out, const std::vector<Site>& sites) {
  out << "k,i,j\n";
  for (std::size_t k = 0; k < sites.size(); ++k) out << k << ',' << sites[k].i << ',' << sites[k].j << '\n';
}

inline std::vector<Site> read_sites_csv(std::istream& in) {
  detail::expect_header(in, {"k", "i", "j"});
  std::vector<Site> sites;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = split_csv_line(line);
    if (row.size() != 3) throw std::invalid_argument("site row needs 3 fields");
    if (parse_integer<std::size_t>(row[0]) != sites.size()) throw std::invalid_argument("site rows out of order");
    sites.push_back({parse_integer<int>(row[1]), parse_integer<int>(row[2])});
  }
  return sites;
}

}  // namespace lpp
