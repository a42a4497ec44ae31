#include "qsr/decoupling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "qsr/metrics.hpp"
#include "qsr/parallel.hpp"

namespace qsr {
namespace {

constexpr const char* kPurifierLabel = "#purifier";

SystemLayout internal_layout(const DecouplingSource& s, const CutPartition& p) {
  return SystemLayout{{"c1", p.d1}, {"c2", p.d2}, {"c3", p.d3},
                      {"s", s.side_dim()}, {"t", s.traced_dim()}};
}

}  // namespace

void CutPartition::validate(Index d_c) const {
  if (d1 < 1 || d2 < 1 || d3 < 1) {
    throw DimensionError("partition factors must be >= 1");
  }
  if (total() != d_c) {
    std::ostringstream msg;
    msg << "partition (" << d1 << ',' << d2 << ',' << d3 << ") has product " << total()
        << " but d_C = " << d_c;
    throw DimensionError(msg.str());
  }
}

CutPartition CutPartition::parse(std::string_view text) {
  Index v[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    auto end = text.find(',', start);
    if ((i < 2) != (end != std::string_view::npos)) {
      throw DimensionError("partition must be three comma-separated integers, got '" +
                           std::string(text) + "'");
    }
    if (end == std::string_view::npos) end = text.size();
    auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + end, v[i]);
    if (ec != std::errc() || ptr != text.data() + end || v[i] < 1) {
      throw DimensionError("bad partition factor in '" + std::string(text) + "'");
    }
    start = end + 1;
  }
  return {v[0], v[1], v[2]};
}

std::vector<CutPartition> all_partitions(Index d) {
  std::vector<CutPartition> out;
  for (Index a = 1; a <= d; ++a) {
    if (d % a) continue;
    for (Index b = 1; b <= d / a; ++b) {
      if ((d / a) % b) continue;
      out.push_back({a, b, d / a / b});
    }
  }
  return out;
}

// ------------------------------------------------------- DecouplingSource

DecouplingSource::DecouplingSource(Vector amplitudes, Index c_dim, Index side_dim,
                                   Index traced_dim)
    : amplitudes_(std::move(amplitudes)),
      c_dim_(c_dim),
      side_dim_(side_dim),
      traced_dim_(traced_dim) {
  const Index cs = c_dim_ * side_dim_;
  Eigen::Map<const Matrix> r(amplitudes_.data(), traced_dim_, cs);
  // Tr(rho_{CS}^2) = Tr(rho_T^2); use whichever side is smaller
  purity_ = traced_dim_ <= cs ? qsr::purity(Matrix(r * r.adjoint()))
                              : qsr::purity(Matrix(r.transpose() * r.conjugate()));
  const RawState raw{SystemLayout{{"c", c_dim_}, {"s", side_dim_}, {"t", traced_dim_}},
                     amplitudes_};
  const Labels side{"s"};
  side_marginal_ = partial_trace_matrix(raw, side);
  side_marginal_ = (0.5 * (side_marginal_ + side_marginal_.adjoint())).eval();
}

DecouplingSource DecouplingSource::from_pure(const PureState& psi,
                                             std::string_view c_label,
                                             std::span<const std::string> side) {
  const auto& layout = psi.layout();
  Labels c{std::string(c_label)};
  if (std::find(side.begin(), side.end(), c_label) != side.end()) {
    throw LayoutError("side system must not contain the C label");
  }
  Labels cs = c;
  cs.insert(cs.end(), side.begin(), side.end());
  const auto kept = layout.select(cs);
  const auto traced = layout.complement(cs);
  Labels order = cs;
  for (const auto& l : traced.labels()) order.push_back(l);
  auto permuted = permute(psi, order);
  return DecouplingSource(permuted.amplitudes(), layout.dim(c_label), layout.dim_of(side),
                          traced.total_dim());
}

DecouplingSource DecouplingSource::from_density(const DensityOperator& rho,
                                                std::string_view c_label) {
  const auto side = rho.layout().complement(Labels{std::string(c_label)}).labels();
  return from_pure(purify(rho, kPurifierLabel), c_label, side);
}

// ----------------------------------------------------------------- bounds

double decoupling_bound(const DecouplingSource& source, const CutPartition& p,
                        KeptFactor keep) {
  p.validate(source.c_dim());
  const double traced = keep == KeptFactor::kC1 ? static_cast<double>(p.d2 * p.d3)
                                                : static_cast<double>(p.d1 * p.d3);
  return static_cast<double>(source.c_dim()) * static_cast<double>(source.side_dim()) *
         source.purity() / (traced * traced);
}

DecouplingBounds bounds(const DecouplingSource& omega, const DecouplingSource& psi,
                        const CutPartition& p) {
  if (omega.c_dim() != psi.c_dim()) {
    throw DimensionError("omega and psi must share the C dimension");
  }
  return {decoupling_bound(omega, p, KeptFactor::kC1),
          decoupling_bound(psi, p, KeptFactor::kC2)};
}

DecouplingBounds bounds(const DensityOperator& omega, std::string_view omega_c,
                        const DensityOperator& psi, std::string_view psi_c,
                        const CutPartition& p) {
  return bounds(DecouplingSource::from_density(omega, omega_c),
                DecouplingSource::from_density(psi, psi_c), p);
}

// -------------------------------------------------------------- residuals

Matrix decoupled_marginal(const DecouplingSource& source, const Matrix& u,
                          const CutPartition& p, KeptFactor keep) {
  p.validate(source.c_dim());
  if (u.rows() != source.c_dim() || u.cols() != source.c_dim()) {
    throw DimensionError("unitary does not match d_C");
  }
  const Index rest = source.side_dim() * source.traced_dim();
  Eigen::Map<const Matrix> r(source.amplitudes().data(), rest, source.c_dim());
  Matrix rotated = r * u.transpose();
  const RawState raw{internal_layout(source, p),
                     Eigen::Map<Vector>(rotated.data(), rotated.size())};
  const Labels kept = keep == KeptFactor::kC1 ? Labels{"c1", "s"} : Labels{"c2", "s"};
  return partial_trace_matrix(raw, kept);
}

double residual(const DecouplingSource& source, const Matrix& u, const CutPartition& p,
                KeptFactor keep) {
  const Matrix reduced = decoupled_marginal(source, u, p, keep);
  const Index dk = keep == KeptFactor::kC1 ? p.d1 : p.d2;
  const Matrix target = Eigen::kroneckerProduct(
      Matrix(Matrix::Identity(dk, dk) / static_cast<double>(dk)), source.side_marginal());
  Matrix diff = reduced - target;
  diff = (0.5 * (diff + diff.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return std::min(2.0, es.eigenvalues().cwiseAbs().sum());
}

double residual(const DensityOperator& rho, std::string_view c_label, const LinearMap& u,
                const CutPartition& p, KeptFactor keep) {
  if (u.kind() != MapKind::kUnitary) throw InvariantError("residual needs a unitary on C");
  return residual(DecouplingSource::from_density(rho, c_label), u.matrix(), p, keep);
}

bool residual_accepted(double eps, double threshold) {
  return threshold >= 4.0 || eps * eps <= threshold;
}

// ------------------------------------------------------------- Monte Carlo

HaarAverageReport haar_average_check(const DecouplingSource& source, const CutPartition& p,
                                     KeptFactor keep, std::size_t samples,
                                     const SeededStream& stream) {
  if (samples < 2) throw DimensionError("Haar average needs at least 2 samples");
  HaarAverageReport report;
  report.samples = samples;
  report.bound = decoupling_bound(source, p, keep);

  std::vector<double> eps(samples);
  parallel_for(samples, [&](std::size_t i) {
    auto s = stream.substream(i);
    eps[i] = residual(source, haar_unitary_matrix(source.c_dim(), s), p, keep);
  });

  double sum = 0.0;
  std::size_t accepted = 0;
  for (double e : eps) {
    sum += e * e;
    if (residual_accepted(e, 2.0 * report.bound)) ++accepted;
  }
  const double n = static_cast<double>(samples);
  report.mean_squared_residual = sum / n;
  double var = 0.0;
  for (double e : eps) {
    const double d = e * e - report.mean_squared_residual;
    var += d * d;
  }
  var /= (n - 1.0);
  report.standard_error = std::sqrt(var / n);
  report.pass = report.mean_squared_residual <= report.bound + 3.0 * report.standard_error;
  report.acceptance_frequency = static_cast<double>(accepted) / n;
  return report;
}

SimultaneousUnitary find_simultaneous_unitary(const DecouplingSource& omega,
                                              const DecouplingSource& psi,
                                              const CutPartition& p, int max_iters,
                                              const SeededStream& stream) {
  if (max_iters < 1) throw DimensionError("unitary search needs max_iters >= 1");
  const auto b = bounds(omega, psi, p);
  SimultaneousUnitary best;
  best.bounds = b;
  best.objective = std::numeric_limits<double>::infinity();
  for (int i = 0; i < max_iters; ++i) {
    auto s = stream.substream(static_cast<std::uint64_t>(i));
    Matrix u = haar_unitary_matrix(omega.c_dim(), s);
    DecouplingResiduals r;
    r.eps1 = residual(omega, u, p, KeptFactor::kC1);
    r.eps2 = residual(psi, u, p, KeptFactor::kC2);
    r.accepted1 = residual_accepted(r.eps1, 2.0 * b.alpha);
    r.accepted2 = residual_accepted(r.eps2, 2.0 * b.beta);
    r.accepted = r.accepted1 && r.accepted2;
    const double objective =
        std::max(r.eps1 * r.eps1 / (2.0 * b.alpha), r.eps2 * r.eps2 / (2.0 * b.beta));
    if (r.accepted || objective < best.objective) {
      best.unitary = std::move(u);
      best.residuals = r;
      best.objective = objective;
      best.chosen_draw = i;
    }
    if (r.accepted) {
      best.iterations_used = i + 1;
      return best;
    }
  }
  best.iterations_used = max_iters;
  return best;
}

}  // namespace qsr
