#include "musepref/dsp/ica.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "musepref/common/error.hpp"
#include "musepref/common/rng.hpp"

namespace musepref::dsp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

Mat to_mat(const MatrixXd& m) {
  Mat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
  return out;
}

MatrixXd from_mat(const Mat& m) {
  return RowMajorMap(m.v.data(), static_cast<Eigen::Index>(m.rows),
                     static_cast<Eigen::Index>(m.cols));
}

// W <- (W W^T)^{-1/2} W
MatrixXd symmetric_decorrelate(const MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(w * w.transpose());
  const VectorXd d = eig.eigenvalues();
  VectorXd inv_sqrt(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] <= 0.0)
      throw RankDeficient("degenerate unmixing iterate in symmetric decorrelation");
    inv_sqrt[i] = 1.0 / std::sqrt(d[i]);
  }
  return eig.eigenvectors() * inv_sqrt.asDiagonal() *
         eig.eigenvectors().transpose() * w;
}

}  // namespace

IcaDecomposition fastica(const Mat& data, std::size_t n_components,
                         std::uint64_t seed, const FastIcaOptions& options) {
  if (data.empty()) throw std::invalid_argument("fastica: empty data");
  if (n_components == 0 || n_components > data.rows)
    throw std::invalid_argument("fastica: n_components must be in [1, channels]");

  const auto n_channels = static_cast<Eigen::Index>(data.rows);
  const auto n_samples = static_cast<Eigen::Index>(data.cols);
  if (n_samples < 2 * n_channels)
    throw SignalTooShort("fastica needs at least 2x channels samples");

  MatrixXd x = from_mat(data);
  VectorXd means = x.rowwise().mean();
  x.colwise() -= means;

  const double denom = static_cast<double>(n_samples - 1);
  MatrixXd cov = (x * x.transpose()) / denom;

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw RankDeficient("covariance eigendecomposition failed");
  const VectorXd evals = eig.eigenvalues();  // ascending
  const double max_ev = evals[n_channels - 1];
  if (!(max_ev > 0.0)) throw RankDeficient("covariance has no positive eigenvalues");

  const auto nc = static_cast<Eigen::Index>(n_components);
  MatrixXd whitening(nc, n_channels);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const Eigen::Index src = n_channels - 1 - i;  // descending eigenvalues
    const double ev = evals[src];
    if (ev <= 1e-10 * max_ev)
      throw RankDeficient("covariance rank < requested components (eigenvalue " +
                          std::to_string(ev) + ")");
    whitening.row(i) = eig.eigenvectors().col(src).transpose() / std::sqrt(ev);
  }
  MatrixXd z = whitening * x;  // nc x N, unit covariance

  Rng rng(seed);
  MatrixXd w(nc, nc);
  for (Eigen::Index r = 0; r < nc; ++r)
    for (Eigen::Index c = 0; c < nc; ++c) w(r, c) = rng.normal();
  w = symmetric_decorrelate(w);

  const double inv_n = 1.0 / static_cast<double>(n_samples);
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    MatrixXd y = w * z;                       // nc x N
    MatrixXd g = y.array().tanh().matrix();   // contrast derivative
    VectorXd g_prime_mean =
        (1.0 - g.array().square()).rowwise().mean().matrix();
    MatrixXd w_new =
        (g * z.transpose()) * inv_n - g_prime_mean.asDiagonal() * w;
    w_new = symmetric_decorrelate(w_new);

    const VectorXd alignment = (w_new * w.transpose()).diagonal();
    double delta = 0.0;
    for (Eigen::Index i = 0; i < nc; ++i)
      delta = std::max(delta, std::abs(1.0 - std::abs(alignment[i])));
    w = std::move(w_new);
    if (delta < options.tolerance) {
      converged = true;
      ++iter;
      break;
    }
  }
  if (!converged && options.require_convergence)
    throw NotConverged("fastica did not converge in " +
                       std::to_string(options.max_iterations) + " iterations");

  MatrixXd unmixing = w * whitening;  // nc x channels
  // pseudo-inverse through the whitening structure: channels x nc
  MatrixXd dewhitening(n_channels, nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const Eigen::Index src = n_channels - 1 - i;
    dewhitening.col(i) = eig.eigenvectors().col(src) * std::sqrt(evals[src]);
  }
  MatrixXd mixing = dewhitening * w.transpose();
  MatrixXd sources = unmixing * x;

  IcaDecomposition out;
  out.unmixing = to_mat(unmixing);
  out.mixing = to_mat(mixing);
  out.sources = to_mat(sources);
  out.whitening = to_mat(whitening);
  out.channel_means.assign(means.data(), means.data() + means.size());
  out.converged = converged;
  out.iterations = iter;
  return out;
}

IcaDecomposition fastica(const corpus::EegEpoch& epoch, std::size_t n_components,
                         std::uint64_t seed, const FastIcaOptions& options) {
  const auto eeg = epoch.eeg_channel_indices();
  Mat data(eeg.size(), epoch.n_samples);
  for (std::size_t r = 0; r < eeg.size(); ++r) {
    auto ch = epoch.channel(eeg[r]);
    std::copy(ch.begin(), ch.end(), data.row_ptr(r));
  }
  return fastica(data, n_components, seed, options);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("pearson: size mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

OcularRemovalResult remove_ocular_components(const corpus::EegEpoch& epoch,
                                             const IcaDecomposition& ica,
                                             double threshold) {
  const auto eeg = epoch.eeg_channel_indices();
  if (ica.unmixing.cols != eeg.size())
    throw std::invalid_argument(
        "remove_ocular_components: decomposition does not match the epoch's "
        "EEG channel count");
  if (epoch.eog_indices.empty())
    throw std::invalid_argument("remove_ocular_components: epoch has no EOG channels");

  const auto n_samples = static_cast<Eigen::Index>(epoch.n_samples);
  MatrixXd x(static_cast<Eigen::Index>(eeg.size()), n_samples);
  for (std::size_t r = 0; r < eeg.size(); ++r) {
    auto ch = epoch.channel(eeg[r]);
    for (std::size_t i = 0; i < epoch.n_samples; ++i)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = ch[i];
  }
  VectorXd means = x.rowwise().mean();
  x.colwise() -= means;

  MatrixXd unmixing = from_mat(ica.unmixing);
  MatrixXd sources = unmixing * x;  // nc x N

  OcularRemovalResult result;
  const auto nc = static_cast<std::size_t>(sources.rows());
  std::vector<double> comp_data(epoch.n_samples);
  for (std::size_t comp = 0; comp < nc; ++comp) {
    for (std::size_t i = 0; i < epoch.n_samples; ++i)
      comp_data[i] = sources(static_cast<Eigen::Index>(comp),
                             static_cast<Eigen::Index>(i));
    double max_r = 0.0;
    for (auto eog_idx : epoch.eog_indices) {
      auto eog = epoch.channel(eog_idx);
      max_r = std::max(max_r, std::abs(pearson(comp_data, eog)));
    }
    if (max_r > threshold)
      result.removed_components.push_back(comp);
  }

  for (auto comp : result.removed_components)
    sources.row(static_cast<Eigen::Index>(comp)).setZero();

  MatrixXd mixing = from_mat(ica.mixing);
  MatrixXd recon = mixing * sources;

  result.epoch = epoch;
  for (std::size_t r = 0; r < eeg.size(); ++r) {
    auto ch = result.epoch.channel(eeg[r]);
    for (std::size_t i = 0; i < epoch.n_samples; ++i)
      ch[i] = recon(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
  }
  return result;
}

}  // namespace musepref::dsp
