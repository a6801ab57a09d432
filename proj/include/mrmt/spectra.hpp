#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mrmt/ensembles.hpp"

namespace mrmt::spectra {

using ensembles::Spectrum;

// S1 keeps the 1st, 3rd, ... spacing of each spectrum, S2 the 2nd, 4th, ...
enum class SpacingFamily { All, S1, S2 };

std::string family_name(SpacingFamily f);
SpacingFamily parse_family(const std::string& name);

// Half-open [lo, hi); a spacing belongs to the window holding its left eigenvalue.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct SpacingSample {
  std::vector<double> spacings;  // divided by raw_mean
  Window window;
  SpacingFamily family = SpacingFamily::All;
  std::size_t count = 0;
  double raw_mean = 0.0;
  std::size_t spectra_used = 0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<double> densities;
  std::size_t total_count = 0;
  std::size_t overflow_count = 0;

  std::size_t bins() const { return densities.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double overflow_fraction() const { return total_count ? double(overflow_count) / double(total_count) : 0.0; }
  // Empty histogram with uniform bins on [0, s_max].
  static Histogram uniform(std::size_t bins, double s_max);
};

inline constexpr std::size_t kDefaultBins = 60;
inline constexpr double kDefaultSMax = 3.5;

struct DensityScan {
  std::vector<Window> windows;
  std::vector<double> rho;
  std::vector<bool> empty;
  std::vector<double> lambda_fit;
};

// Unnormalized spacings of one spectrum.
std::vector<double> raw_spacings(const std::vector<double>& eigenvalues, Window window, SpacingFamily family);

SpacingSample extract_spacings(const Spectrum& spectrum, Window window, SpacingFamily family);
// Pools all spectra and normalizes once with the batch mean.
SpacingSample extract_spacings(const std::vector<Spectrum>& batch, Window window, SpacingFamily family);

Histogram histogram(const SpacingSample& sample, std::size_t bins = kDefaultBins, double s_max = kDefaultSMax);
Histogram histogram(const std::vector<double>& values, std::size_t bins = kDefaultBins, double s_max = kDefaultSMax);

// M equal windows over [lo, hi); rho is the mean eigenvalue count per unit length and matrix.
DensityScan local_density(const std::vector<Spectrum>& batch, std::size_t windows, double lo, double hi);

struct IngestResult {
  std::vector<Spectrum> spectra;
  std::size_t resorted_groups = 0;
};

IngestResult parse_spectra(std::istream& in);
IngestResult ingest_spectrum_file(const std::filesystem::path& path);
void write_spectra(std::ostream& out, const std::vector<Spectrum>& batch);
void write_spectrum_file(const std::filesystem::path& path, const std::vector<Spectrum>& batch);

}  // namespace mrmt::spectra
