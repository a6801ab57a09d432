#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "mrmt/ensembles.hpp"
#include "mrmt/errors.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::ensembles {

namespace {

using cd = std::complex<double>;
const double kHalfSd = std::sqrt(0.5);

template <class M>
double max_abs(const M& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& m, const char* who) {
  const auto d = dimension(m);
  if (d == 0) throw DomainError(std::string(who) + ": empty matrix");
  const double scale = std::visit([](const auto& a) { return max_abs(a); }, m);
  if (hermiticity_defect(m) > 1e-12 * (1.0 + scale)) throw DomainError(std::string(who) + ": input is not Hermitian");
}

RealMatrix tensor_identity(const RealMatrix& a) {
  const auto n = a.rows();
  RealMatrix out = RealMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(2 * i, 2 * j) = out(2 * i + 1, 2 * j + 1) = a(i, j);
  return out;
}

// Block (i, j) becomes diag(h_ij, conj h_ij). For even N this is the matrix obtained from
// diag(H, H*) by swapping rows/columns 2n <-> N + 2n - 1, up to a fixed relabeling of H's basis.
ComplexMatrix interleave_conjugate(const ComplexMatrix& h) {
  const auto n = h.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      out(2 * i, 2 * j) = h(i, j);
      out(2 * i + 1, 2 * j + 1) = std::conj(h(i, j));
    }
  return out;
}

RealMatrix sample_goe(int n, Rng& rng) {
  RealMatrix h(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = rng.normal();
    for (int i = j + 1; i < n; ++i) h(i, j) = h(j, i) = kHalfSd * rng.normal();
  }
  return h;
}

ComplexMatrix sample_gue(int n, Rng& rng) {
  ComplexMatrix h(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = rng.normal();
    for (int i = j + 1; i < n; ++i) {
      const double re = kHalfSd * rng.normal();
      const double im = kHalfSd * rng.normal();
      h(i, j) = cd(re, im);
      h(j, i) = cd(re, -im);
    }
  }
  return h;
}

// Quaternion blocks [[q0 + i q3, q1 + i q2], [-q1 + i q2, q0 - i q3]].
ComplexMatrix sample_gse(int n, Rng& rng) {
  ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double d = rng.normal();
    h(2 * j, 2 * j) = h(2 * j + 1, 2 * j + 1) = d;
    for (int i = j + 1; i < n; ++i) {
      double q[4];
      for (double& c : q) c = kHalfSd * rng.normal();
      const cd a(q[0], q[3]), b(q[1], q[2]);
      h(2 * j, 2 * i) = a;
      h(2 * j, 2 * i + 1) = b;
      h(2 * j + 1, 2 * i) = -std::conj(b);
      h(2 * j + 1, 2 * i + 1) = std::conj(a);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) h(2 * i + c, 2 * j + r) = std::conj(h(2 * j + r, 2 * i + c));
    }
  }
  return h;
}

}  // namespace

Eigen::Index dimension(const Matrix& m) {
  return std::visit([](const auto& a) { return a.rows(); }, m);
}

bool is_real(const Matrix& m) { return std::holds_alternative<RealMatrix>(m); }

ComplexMatrix to_complex(const Matrix& m) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) return r->cast<cd>();
  return std::get<ComplexMatrix>(m);
}

void EnsembleSpec::validate() const {
  if (beta != 0 && beta != 1 && beta != 2 && beta != 4) throw DomainError("beta must be one of 0, 1, 2, 4");
  if (n < 1) throw DomainError("N must be positive");
  if (beta != 0 && n < 2) throw DomainError("Gaussian ensembles need N >= 2");
}

double central_density(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.beta == 0) return spec.n * spec.poisson_density.pdf(0.0);
  return std::sqrt(2.0 * spec.n) / (std::sqrt(double(spec.beta)) * std::numbers::pi);
}

double semicircle_radius(const EnsembleSpec& spec) {
  if (spec.beta == 0) throw DomainError("the semicircle needs a Gaussian ensemble");
  return std::sqrt(2.0 * spec.beta * spec.n);
}

double coupling_alpha(const MixedSpec& spec) {
  if (const auto* raw = std::get_if<Raw>(&spec.scaling)) {
    if (!(raw->alpha >= 0.0) || !std::isfinite(raw->alpha)) throw DomainError("alpha must be finite and non-negative");
    return raw->alpha;
  }
  if (!(spec.capital_lambda >= 0.0) || !std::isfinite(spec.capital_lambda))
    throw DomainError("Lambda must be finite and non-negative");
  const double rho = central_density(spec.base);
  if (!(rho > 0.0)) throw DomainError("the base density vanishes at the center; use a raw coupling");
  return spec.capital_lambda / (rho * surmise::unnormalized_mean_spacing(spec.base.beta));
}

Matrix sample_gaussian(const EnsembleSpec& spec, Rng& rng) {
  if (spec.n < 2) throw DomainError("Gaussian ensembles need N >= 2");
  spec.validate();
  switch (spec.beta) {
    case 1: return sample_goe(spec.n, rng);
    case 2: return sample_gue(spec.n, rng);
    case 4: return sample_gse(spec.n, rng);
    default: throw DomainError("sample_gaussian needs beta in {1, 2, 4}");
  }
}

Matrix sample_poisson_diag(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.beta != 0) throw DomainError("sample_poisson_diag needs beta = 0");
  RealMatrix h = RealMatrix::Zero(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i) h(i, i) = spec.poisson_density.sample(rng);
  return h;
}

Matrix sample(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  Matrix m = spec.beta == 0 ? sample_poisson_diag(spec, rng) : sample_gaussian(spec, rng);
  if (spec.self_dual && spec.beta != 4)
    m = make_self_dual(m, spec.beta == 2 ? SelfDualMode::GUEPermutation : SelfDualMode::TensorIdentity);
  return m;
}

Matrix make_self_dual(const Matrix& m, SelfDualMode mode) {
  require_hermitian(m, "make_self_dual");
  if (mode == SelfDualMode::TensorIdentity) {
    if (const auto* r = std::get_if<RealMatrix>(&m)) return tensor_identity(*r);
    const auto& c = std::get<ComplexMatrix>(m);
    if (max_abs(c.imag()) != 0.0) throw DomainError("TensorIdentity needs a real symmetric input");
    return tensor_identity(c.real());
  }
  return interleave_conjugate(to_complex(m));
}

Matrix build_mixed(const MixedSpec& spec, Rng& rng) {
  spec.base.validate();
  spec.perturbation.validate();
  const auto d0 = spec.base.matrix_dimension(), d1 = spec.perturbation.matrix_dimension();
  if (d0 != d1) {
    std::ostringstream os;
    os << "base (dimension " << d0 << ") and perturbation (dimension " << d1 << ") do not combine";
    throw DomainError(os.str());
  }
  const double alpha = coupling_alpha(spec);
  Matrix h = sample(spec.base, rng);
  Matrix v = sample(spec.perturbation, rng);
  if (is_real(h) && is_real(v)) return RealMatrix(std::get<RealMatrix>(h) + alpha * std::get<RealMatrix>(v));
  return ComplexMatrix(to_complex(h) + alpha * to_complex(v));
}

double self_duality_defect(const Matrix& m) {
  const auto d = dimension(m);
  if (d % 2 != 0) return std::numeric_limits<double>::infinity();
  const ComplexMatrix a = to_complex(m);
  double worst = 0.0;
  // (J A^T J^T)_{2i+r, 2j+c} = eps A_{ji}^T eps^T, with eps M eps^T = [[m22, -m21], [-m12, m11]].
  for (Eigen::Index j = 0; j < d / 2; ++j)
    for (Eigen::Index i = 0; i < d / 2; ++i) {
      const cd m11 = a(2 * j, 2 * i), m12 = a(2 * j + 1, 2 * i);
      const cd m21 = a(2 * j, 2 * i + 1), m22 = a(2 * j + 1, 2 * i + 1);
      worst = std::max({worst, std::abs(m22 - a(2 * i, 2 * j)), std::abs(-m21 - a(2 * i, 2 * j + 1)),
                        std::abs(-m12 - a(2 * i + 1, 2 * j)), std::abs(m11 - a(2 * i + 1, 2 * j + 1))});
    }
  return worst;
}

double hermiticity_defect(const Matrix& m) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) return max_abs(RealMatrix(*r - r->transpose()));
  const auto& c = std::get<ComplexMatrix>(m);
  return max_abs(ComplexMatrix(c - c.adjoint()));
}

Spectrum eigenvalues(const Matrix& m, bool collapse_degeneracy) {
  require_hermitian(m, "eigenvalues");
  Spectrum out;
  auto fail = [&](const char* what) {
    std::ostringstream os;
    const double norm = std::visit([](const auto& a) { return a.norm(); }, m);
    os << what << " (dimension " << dimension(m) << ", Frobenius norm " << norm << ", hermiticity defect "
       << hermiticity_defect(m) << ")";
    throw NumericalError(os.str());
  };
  auto finish = [&](const Eigen::VectorXd& w) {
    if (!w.allFinite()) fail("eigensolver returned non-finite eigenvalues");
    out.eigenvalues.assign(w.data(), w.data() + w.size());
  };
  if (const auto* r = std::get_if<RealMatrix>(&m); r && r->isDiagonal(0.0)) {
    finish(r->diagonal());
  } else if (r) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(*r, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail("eigensolver did not converge");
    finish(es.eigenvalues());
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(std::get<ComplexMatrix>(m), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail("eigensolver did not converge");
    finish(es.eigenvalues());
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  if (!collapse_degeneracy) return out;

  const auto& ev = out.eigenvalues;
  if (ev.size() % 2 != 0) throw DomainError("degeneracy collapse needs an even-dimensional spectrum");
  const std::size_t m2 = ev.size() / 2;
  std::vector<double> mid(m2), gap(m2);
  for (std::size_t k = 0; k < m2; ++k) {
    mid[k] = 0.5 * (ev[2 * k] + ev[2 * k + 1]);
    gap[k] = ev[2 * k + 1] - ev[2 * k];
  }
  constexpr std::size_t w = 4;
  for (std::size_t k = 0; k < m2 && m2 > 1; ++k) {
    const std::size_t lo = k > w ? k - w : 0, hi = std::min(m2 - 1, k + w);
    const double local = (mid[hi] - mid[lo]) / double(hi - lo);
    if (gap[k] > 1e-6 * local) {
      std::ostringstream os;
      os << "pair " << k << " splits by " << gap[k] << " against a local spacing " << local
         << "; the spectrum is not Kramers degenerate";
      throw NumericalError(os.str());
    }
    out.max_pair_gap = std::max(out.max_pair_gap, gap[k]);
  }
  if (m2 == 1) out.max_pair_gap = gap[0];
  out.eigenvalues = std::move(mid);
  out.degeneracy_collapsed = true;
  return out;
}

std::pair<std::vector<double>, ComplexMatrix> eigensystem(const ComplexMatrix& m) {
  require_hermitian(Matrix(m), "eigensystem");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const auto& w = es.eigenvalues();
  return {std::vector<double>(w.data(), w.data() + w.size()), es.eigenvectors()};
}

std::vector<Spectrum> sample_spectra(const MixedSpec& spec, std::size_t count, std::uint64_t seed, bool collapse) {
  coupling_alpha(spec);
  return parallel_batch(count, seed, [&](std::size_t, Rng& rng) { return eigenvalues(build_mixed(spec, rng), collapse); });
}

std::vector<Spectrum> sample_spectra(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed, bool collapse) {
  spec.validate();
  return parallel_batch(count, seed, [&](std::size_t, Rng& rng) { return eigenvalues(sample(spec, rng), collapse); });
}

}  // namespace mrmt::ensembles
