#include "opnorm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opnorm/errors.hpp"
#include "opnorm/kernels.hpp"

namespace opnorm {

PowerIterationReport power_iteration(const AdjointPair& pair, const PowerIterationOptions& opts, RngStream& rng) {
  const LinearOperator& fwd = *pair.forward;
  const LinearOperator& bwd = *pair.backward;
  if (bwd.input_dim() != fwd.output_dim() || bwd.output_dim() != fwd.input_dim()) {
    throw InvalidInput("power_iteration: inconsistent pair dimensions");
  }
  PowerIterationReport rep;
  std::vector<double> v = uniform_unit_vector(rng, fwd.input_dim());
  std::vector<double> av(fwd.output_dim());
  std::vector<double> w(fwd.input_dim());
  constexpr int kMaxRestarts = 10;
  int restarts = 0;
  double prev_av = -1.0;
  double prev_gram = -1.0;

  while (rep.iterations < opts.max_iters) {
    fwd.apply(v, av);
    bwd.apply(av, w);
    const double est_av = std::sqrt(kernels::squared_norm(av));
    const double w_norm = std::sqrt(kernels::squared_norm(w));
    if (!(w_norm > 0.0) || !std::isfinite(w_norm)) {
      if (++restarts > kMaxRestarts) throw InternalError("power_iteration: iterate vanished repeatedly");
      uniform_unit_vector(rng, v);
      continue;
    }
    const double est_gram = std::sqrt(w_norm);
    rep.trace_via_av.push_back(est_av);
    rep.trace_via_gram.push_back(est_gram);
    rep.estimate_via_av = est_av;
    rep.estimate_via_gram = est_gram;
    if (opts.target && std::abs(est_av - *opts.target) <= opts.target_rel_tol * *opts.target) {
      rep.converged = true;
      break;
    }
    if (prev_av >= 0.0 && std::abs(est_av - prev_av) <= opts.tol * est_av &&
        std::abs(est_gram - prev_gram) <= opts.tol * est_gram) {
      rep.converged = true;
      break;
    }
    prev_av = est_av;
    prev_gram = est_gram;
    kernels::scale(1.0 / w_norm, w);
    std::swap(v, w);
    ++rep.iterations;
  }
  const double scale = std::max(rep.estimate_via_av, rep.estimate_via_gram);
  rep.estimators_disagree = std::abs(rep.estimate_via_av - rep.estimate_via_gram) > opts.disagreement_tol * scale;
  rep.vector = std::move(v);
  return rep;
}

DenseMatrix materialize(const LinearOperator& op, std::size_t cap) {
  const std::size_t d = op.input_dim();
  const std::size_t m = op.output_dim();
  if (d > cap) {
    throw InvalidInput("materialize: input dimension " + std::to_string(d) + " exceeds cap " + std::to_string(cap));
  }
  DenseMatrix out(m, d);
  std::vector<double> e(d, 0.0);
  std::vector<double> col(m);
  for (std::size_t j = 0; j < d; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) out(i, j) = col[i];
  }
  return out;
}

namespace {

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t d = a.cols();
  DenseMatrix g(d, d);
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    nz.clear();
    for (std::size_t j = 0; j < d; ++j)
      if (row[j] != 0.0) nz.push_back(j);
    if (nz.size() * 4 < d) {
      for (std::size_t j : nz)
        for (std::size_t k : nz) g(j, k) += row[j] * row[k];
    } else {
      for (std::size_t j : nz) kernels::axpy(row[j], row, g.row(j));
    }
  }
  return g;
}

double off_diagonal_norm(const DenseMatrix& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = i + 1; j < g.cols(); ++j) s += 2.0 * g(i, j) * g(i, j);
  return std::sqrt(s);
}

}  // namespace

DenseSpectrum dense_spectrum(const DenseMatrix& a, double off_tol, int max_sweeps) {
  const std::size_t d = a.cols();
  if (d == 0 || a.rows() == 0) throw InvalidInput("dense_spectrum: empty matrix");
  DenseMatrix g = gram(a);
  DenseMatrix vt = DenseMatrix::identity(d);  // rows are eigenvectors
  const double fro = std::sqrt(kernels::squared_norm(g.data()));

  DenseSpectrum out;
  const double target = off_tol * fro;
  while (off_diagonal_norm(g) > target) {
    if (out.sweeps >= max_sweeps) throw InternalError("dense_spectrum: Jacobi did not converge");
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double gpq = g(p, q);
        if (std::abs(gpq) <= 1e-300 || std::abs(gpq) <= 1e-20 * fro) continue;
        const double gpp = g(p, p);
        const double gqq = g(q, q);
        const double theta = (gqq - gpp) / (2.0 * gpq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        kernels::rotate(g.row(p), g.row(q), c, s);
        g(p, p) = gpp - t * gpq;
        g(q, q) = gqq + t * gpq;
        g(p, q) = 0.0;
        g(q, p) = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
          if (r == p || r == q) continue;
          g(r, p) = g(p, r);
          g(r, q) = g(q, r);
        }
        kernels::rotate(vt.row(p), vt.row(q), c, s);
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return g(l, l) > g(r, r); });
  out.singular_values.resize(d);
  out.right_vectors = DenseMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    out.singular_values[i] = std::sqrt(std::max(g(order[i], order[i]), 0.0));
    const auto src = vt.row(order[i]);
    std::copy(src.begin(), src.end(), out.right_vectors.row(i).begin());
  }
  return out;
}

double oracle_sigma_max(const LinearOperator& op) {
  return dense_spectrum(materialize(op)).singular_values.front();
}

DenseMatrix random_orthogonal(RngStream& rng, std::size_t d) {
  if (d == 0) throw InvalidInput("random_orthogonal needs d >= 1");
  // rows of q are built orthonormal; q is then returned as is (Q Q^T = I
  // implies Q^T Q = I for square Q)
  DenseMatrix q(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    auto row = q.row(i);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kDefaultRetries) throw InternalError("random_orthogonal: retry budget exhausted");
      rng.fill_normal(row);
      const double raw = std::sqrt(kernels::squared_norm(row));
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < i; ++j) kernels::axpy(-kernels::dot(q.row(j), row), q.row(j), row);
      const double nrm = std::sqrt(kernels::squared_norm(row));
      if (nrm > 1e-8 * raw) {
        kernels::scale(1.0 / nrm, row);
        break;
      }
    }
  }
  return q;
}

double adjointness_gap(const AdjointPair& pair, int probes, RngStream& rng) {
  if (probes < 1) throw InvalidInput("adjointness_gap needs probes >= 1");
  const LinearOperator& fwd = *pair.forward;
  const LinearOperator& bwd = *pair.backward;
  std::vector<double> v(fwd.input_dim());
  std::vector<double> w(fwd.output_dim());
  std::vector<double> av(fwd.output_dim());
  std::vector<double> bw(fwd.input_dim());
  double gap = 0.0;
  for (int i = 0; i < probes; ++i) {
    rng.fill_normal(v);
    rng.fill_normal(w);
    fwd.apply(v, av);
    bwd.apply(w, bw);
    const double lhs = kernels::dot(av, w);
    const double rhs = kernels::dot(v, bw);
    const double denom = std::sqrt(kernels::squared_norm(av) * kernels::squared_norm(w)) +
                         std::sqrt(kernels::squared_norm(v) * kernels::squared_norm(bw));
    if (denom > 0.0) gap = std::max(gap, std::abs(lhs - rhs) / denom);
  }
  return gap;
}

double eigen_residual(const DenseMatrix& a, std::span<const double> v) {
  std::vector<double> av(a.rows());
  std::vector<double> g(a.cols());
  kernels::gemv(a.data(), a.rows(), a.cols(), v, av);
  kernels::gemv_t(a.data(), a.rows(), a.cols(), av, g);
  kernels::axpy(-kernels::squared_norm(av), v, g);
  return std::sqrt(kernels::squared_norm(g));
}

}  // namespace opnorm
