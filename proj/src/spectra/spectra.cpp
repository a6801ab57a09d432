#include "mrmt/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "mrmt/errors.hpp"

namespace mrmt::spectra {

namespace {

bool in_window(double x, Window w) { return x >= w.lo && x < w.hi; }

void check_window(Window w) {
  if (!(w.hi > w.lo) || std::isnan(w.lo) || std::isnan(w.hi)) throw DomainError("window needs lo < hi");
}

std::size_t count_in_window(const std::vector<double>& ev, Window w) {
  const auto lo = std::lower_bound(ev.begin(), ev.end(), w.lo);
  const auto hi = std::lower_bound(ev.begin(), ev.end(), w.hi);
  return static_cast<std::size_t>(hi - lo);
}

void normalize(SpacingSample& s) {
  s.count = s.spacings.size();
  if (s.count == 0) throw EmptySampleError("no spacings in window [" + std::to_string(s.window.lo) + ", " + std::to_string(s.window.hi) + ")");
  double sum = 0.0;
  for (double x : s.spacings) sum += x;
  s.raw_mean = sum / double(s.count);
  if (!(s.raw_mean > 0.0)) throw EmptySampleError("all spacings in the window vanish");
  for (double& x : s.spacings) x /= s.raw_mean;
}

std::string_view trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r");
  return v.substr(b, e - b + 1);
}

}  // namespace

std::string family_name(SpacingFamily f) {
  switch (f) {
    case SpacingFamily::All: return "all";
    case SpacingFamily::S1: return "s1";
    case SpacingFamily::S2: return "s2";
  }
  return "";
}

SpacingFamily parse_family(const std::string& name) {
  if (name == "all") return SpacingFamily::All;
  if (name == "s1" || name == "even") return SpacingFamily::S1;
  if (name == "s2" || name == "odd") return SpacingFamily::S2;
  throw DomainError("unknown spacing family '" + name + "'");
}

Histogram Histogram::uniform(std::size_t bins, double s_max) {
  if (bins < 10) throw DomainError("histograms need at least 10 bins");
  if (!(s_max > 0.0) || !std::isfinite(s_max)) throw DomainError("histogram range must be positive");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = s_max * double(i) / double(bins);
  h.densities.assign(bins, 0.0);
  return h;
}

std::vector<double> raw_spacings(const std::vector<double>& ev, Window w, SpacingFamily family) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    if (family == SpacingFamily::S1 && i % 2 != 0) continue;
    if (family == SpacingFamily::S2 && i % 2 == 0) continue;
    if (in_window(ev[i], w)) out.push_back(ev[i + 1] - ev[i]);
  }
  return out;
}

SpacingSample extract_spacings(const Spectrum& spectrum, Window window, SpacingFamily family) {
  check_window(window);
  if (count_in_window(spectrum.eigenvalues, window) < 2) throw EmptySampleError("fewer than two eigenvalues in the window");
  SpacingSample s;
  s.window = window;
  s.family = family;
  s.spacings = raw_spacings(spectrum.eigenvalues, window, family);
  s.spectra_used = 1;
  normalize(s);
  return s;
}

SpacingSample extract_spacings(const std::vector<Spectrum>& batch, Window window, SpacingFamily family) {
  check_window(window);
  SpacingSample s;
  s.window = window;
  s.family = family;
  for (const auto& sp : batch) {
    const auto part = raw_spacings(sp.eigenvalues, window, family);
    if (!part.empty()) ++s.spectra_used;
    s.spacings.insert(s.spacings.end(), part.begin(), part.end());
  }
  normalize(s);
  return s;
}

Histogram histogram(const std::vector<double>& values, std::size_t bins, double s_max) {
  Histogram h = Histogram::uniform(bins, s_max);
  if (values.empty()) throw EmptySampleError("cannot histogram an empty sample");
  std::vector<std::size_t> counts(bins, 0);
  for (double x : values) {
    if (!(x >= 0.0)) throw DomainError("spacings must be non-negative");
    if (x >= s_max) {
      ++h.overflow_count;
      continue;
    }
    counts[std::min(bins - 1, static_cast<std::size_t>(x / s_max * double(bins)))]++;
  }
  h.total_count = values.size();
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = double(counts[i]) / (double(h.total_count) * h.width(i));
  return h;
}

Histogram histogram(const SpacingSample& sample, std::size_t bins, double s_max) {
  return histogram(sample.spacings, bins, s_max);
}

DensityScan local_density(const std::vector<Spectrum>& batch, std::size_t windows, double lo, double hi) {
  if (windows < 1) throw DomainError("local_density needs at least one window");
  check_window({lo, hi});
  if (batch.empty()) throw EmptySampleError("local_density needs at least one spectrum");
  DensityScan scan;
  const double w = (hi - lo) / double(windows);
  for (std::size_t i = 0; i < windows; ++i) {
    const double a = lo + w * double(i);
    const double b = i + 1 == windows ? hi : lo + w * double(i + 1);
    scan.windows.push_back({a, b});
  }
  std::vector<std::size_t> counts(windows, 0);
  for (const auto& sp : batch)
    for (std::size_t i = 0; i < windows; ++i) counts[i] += count_in_window(sp.eigenvalues, scan.windows[i]);
  for (std::size_t i = 0; i < windows; ++i) {
    scan.rho.push_back(double(counts[i]) / (double(batch.size()) * scan.windows[i].width()));
    scan.empty.push_back(counts[i] == 0);
  }
  scan.lambda_fit.assign(windows, std::nan(""));
  return scan;
}

IngestResult parse_spectra(std::istream& in) {
  IngestResult r;
  std::vector<double> group;
  auto flush = [&] {
    if (group.empty()) return;
    if (!std::is_sorted(group.begin(), group.end())) {
      std::sort(group.begin(), group.end());
      ++r.resorted_groups;
    }
    Spectrum s;
    s.eigenvalues = std::move(group);
    r.spectra.push_back(std::move(s));
    group.clear();
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) {
      // Comment-only lines do not end a group.
      if (trim(v.substr(0, hash)).empty()) continue;
      v = v.substr(0, hash);
    }
    v = trim(v);
    if (v.empty()) {
      flush();
      continue;
    }
    while (!v.empty()) {
      const auto end = v.find_first_of(" \t,;");
      std::string_view tok = v.substr(0, end);
      if (tok.size() > 1 && tok.front() == '+') tok.remove_prefix(1);
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(x))
        throw ParseError("line " + std::to_string(lineno) + ": cannot read '" + std::string(tok) + "' as an eigenvalue", lineno);
      group.push_back(x);
      v = end == std::string_view::npos ? std::string_view{} : trim(v.substr(end + 1));
    }
  }
  flush();
  return r;
}

IngestResult ingest_spectrum_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open spectrum file " + path.string());
  return parse_spectra(in);
}

void write_spectra(std::ostream& out, const std::vector<Spectrum>& batch) {
  char buf[32];
  for (std::size_t k = 0; k < batch.size(); ++k) {
    if (k) out << '\n';
    for (double x : batch[k].eigenvalues) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out.write(buf, ptr - buf);
      out << '\n';
    }
  }
}

void write_spectrum_file(const std::filesystem::path& path, const std::vector<Spectrum>& batch) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << "# one eigenvalue per line, spectra separated by blank lines\n";
  write_spectra(out, batch);
}

}  // namespace mrmt::spectra
