#include "qgem/basis.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qgem {

std::vector<BasisElement> gell_mann_basis(int dimension) {
  if (dimension < 2)
    throw std::invalid_argument("gell_mann_basis: dimension must be >= 2");
  const int d = dimension;
  std::vector<BasisElement> basis;
  basis.reserve(d * d);

  const auto push = [&](BasisFamily family, Eigen::MatrixXcd m,
                        double norm_sq) {
    BasisElement e;
    e.index = static_cast<int>(basis.size());
    e.family = family;
    e.matrix = std::move(m);
    e.hs_norm_sq = norm_sq;
    basis.push_back(std::move(e));
  };

  push(BasisFamily::identity, Eigen::MatrixXcd::Identity(d, d), double(d));

  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      push(BasisFamily::symmetric, std::move(m), 2.0);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      m(j, k) = Cx(0.0, -1.0);
      m(k, j) = Cx(0.0, 1.0);
      push(BasisFamily::antisymmetric, std::move(m), 2.0);
    }
  for (int l = 1; l < d; ++l) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    const double scale = std::sqrt(2.0 / (double(l) * (l + 1)));
    for (int j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -scale * l;
    push(BasisFamily::diagonal, std::move(m), 2.0);
  }
  return basis;
}

Eigen::MatrixXcd term_operator(const WitnessTerm& term,
                               const std::vector<BasisElement>& basis) {
  return Eigen::kroneckerProduct(basis[term.i].matrix, basis[term.j].matrix);
}

WitnessDecomposition decompose_witness(const Witness& witness,
                                       double epsilon_rel) {
  if (epsilon_rel < 0.0)
    throw std::invalid_argument("decompose_witness: epsilon must be >= 0");
  const int d = witness.dimension;
  const auto basis = gell_mann_basis(d);
  const int n_basis = d * d;

  // c_ij = Tr(W (b_i x b_j)) / (Tr(b_i^2) Tr(b_j^2)); coefficients of a
  // Hermitian operator in a Hermitian basis are real
  Eigen::MatrixXd coeff(n_basis, n_basis);
  const Eigen::MatrixXcd w_t = witness.matrix.transpose();
  for (int i = 0; i < n_basis; ++i) {
    for (int j = 0; j < n_basis; ++j) {
      const Eigen::MatrixXcd op =
          Eigen::kroneckerProduct(basis[i].matrix, basis[j].matrix);
      const Cx raw = w_t.cwiseProduct(op).sum();
      if (std::abs(raw.imag()) > 1e-10)
        throw std::runtime_error(
            "decompose_witness: complex coefficient, witness not Hermitian");
      coeff(i, j) = raw.real() / (basis[i].hs_norm_sq * basis[j].hs_norm_sq);
    }
  }

  const double peak = coeff.cwiseAbs().maxCoeff();
  WitnessDecomposition decomp;
  decomp.dimension = d;
  decomp.epsilon_abs = epsilon_rel * peak;
  for (int i = 0; i < n_basis; ++i)
    for (int j = 0; j < n_basis; ++j)
      if (std::abs(coeff(i, j)) > decomp.epsilon_abs)
        decomp.terms.push_back({i, j, coeff(i, j)});
  decomp.total_weight = std::accumulate(
      decomp.terms.begin(), decomp.terms.end(), 0.0,
      [](double acc, const WitnessTerm& t) { return acc + std::abs(t.coefficient); });
  return decomp;
}

Eigen::MatrixXcd reconstruct_witness(const WitnessDecomposition& decomp,
                                     const std::vector<BasisElement>& basis) {
  const int n = decomp.dimension * decomp.dimension;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const WitnessTerm& term : decomp.terms)
    out += term.coefficient * term_operator(term, basis);
  return out;
}

int CommutationGraph::degree(int v) const {
  const auto& row = adjacency[v];
  return static_cast<int>(std::count(row.begin(), row.end(), char(1)));
}

CommutationGraph commutation_graph(const WitnessDecomposition& decomp,
                                   const std::vector<BasisElement>& basis) {
  CommutationGraph graph;
  for (int t = 0; t < static_cast<int>(decomp.terms.size()); ++t) {
    const WitnessTerm& term = decomp.terms[t];
    if (term.i == 0 && term.j == 0) continue;  // identity, nothing to measure
    graph.term_of_vertex.push_back(t);
  }
  const int n = graph.vertex_count();
  graph.adjacency.assign(n, std::vector<char>(n, 0));

  // cache single-qudit products; [b_i x b_j, b_k x b_l] = 0 iff
  // (b_i b_k) x (b_j b_l) == (b_k b_i) x (b_l b_j)
  const int n_basis = static_cast<int>(basis.size());
  std::vector<Eigen::MatrixXcd> products(n_basis * n_basis);
  for (int a = 0; a < n_basis; ++a)
    for (int b = 0; b < n_basis; ++b)
      products[a * n_basis + b] = basis[a].matrix * basis[b].matrix;

  const int d = decomp.dimension;
  const auto commutes = [&](const WitnessTerm& s, const WitnessTerm& t) {
    const Eigen::MatrixXcd& p1 = products[s.i * n_basis + t.i];
    const Eigen::MatrixXcd& p2 = products[t.i * n_basis + s.i];
    const Eigen::MatrixXcd& q1 = products[s.j * n_basis + t.j];
    const Eigen::MatrixXcd& q2 = products[t.j * n_basis + s.j];
    // tolerance stated for unit Hilbert-Schmidt normalization
    const double tol = 1e-10 * std::sqrt(basis[s.i].hs_norm_sq *
                                         basis[s.j].hs_norm_sq *
                                         basis[t.i].hs_norm_sq *
                                         basis[t.j].hs_norm_sq);
    for (int r1 = 0; r1 < d; ++r1)
      for (int c1 = 0; c1 < d; ++c1)
        for (int r2 = 0; r2 < d; ++r2)
          for (int c2 = 0; c2 < d; ++c2)
            if (std::abs(p1(r1, c1) * q1(r2, c2) - p2(r1, c1) * q2(r2, c2)) >
                tol)
              return false;
    return true;
  };

  for (int u = 0; u < n; ++u) {
    const WitnessTerm& su = decomp.terms[graph.term_of_vertex[u]];
    for (int v = u + 1; v < n; ++v) {
      const WitnessTerm& sv = decomp.terms[graph.term_of_vertex[v]];
      if (commutes(su, sv)) {
        graph.adjacency[u][v] = 1;
        graph.adjacency[v][u] = 1;
      }
    }
  }
  return graph;
}

namespace {

// Split `blocks` of columns of `basis` into finer blocks that are
// eigenspaces of `op`; returns per-column eigenvalues of op.
void refine_blocks(const Eigen::MatrixXcd& op, Eigen::MatrixXcd& basis,
                   std::vector<std::pair<int, int>>& blocks) {
  constexpr double kGap = 1e-7;
  std::vector<std::pair<int, int>> refined;
  for (const auto& [start, len] : blocks) {
    if (len == 1) {
      refined.emplace_back(start, len);
      continue;
    }
    const Eigen::MatrixXcd sub = basis.middleCols(start, len);
    Eigen::MatrixXcd h = sub.adjoint() * op * sub;
    h = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("joint_eigenbasis: eigensolver failed");
    basis.middleCols(start, len) = sub * solver.eigenvectors();
    int block_start = 0;
    for (int k = 1; k <= len; ++k) {
      if (k == len ||
          solver.eigenvalues()(k) - solver.eigenvalues()(k - 1) > kGap) {
        refined.emplace_back(start + block_start, k - block_start);
        block_start = k;
      }
    }
  }
  blocks = std::move(refined);
}

}  // namespace

JointEigenbasis joint_eigenbasis(const std::vector<Eigen::MatrixXcd>& members) {
  if (members.empty())
    throw std::invalid_argument("joint_eigenbasis: no members");
  const int n = static_cast<int>(members.front().rows());

  JointEigenbasis joint;
  joint.basis = Eigen::MatrixXcd::Identity(n, n);
  std::vector<std::pair<int, int>> blocks{{0, n}};

  if (members.size() > 1) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // fixed: results reproducible
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& m : members) sum += weight(rng) * m;
    refine_blocks(sum, joint.basis, blocks);
  }
  for (const auto& m : members) refine_blocks(m, joint.basis, blocks);

  joint.member_values.reserve(members.size());
  for (const auto& m : members) {
    const Eigen::MatrixXcd conj = joint.basis.adjoint() * m * joint.basis;
    double off_diag = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (r != c) off_diag = std::max(off_diag, std::abs(conj(r, c)));
    if (off_diag > 1e-8)
      throw std::runtime_error(
          "joint_eigenbasis: members do not share an eigenbasis (residual " +
          std::to_string(off_diag) + ")");
    joint.member_values.push_back(conj.diagonal().real());
  }
  return joint;
}

std::vector<MeasurementGroup> group_terms_ldfc(
    const CommutationGraph& graph, const WitnessDecomposition& decomp,
    const std::vector<BasisElement>& basis) {
  const int n = graph.vertex_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> degree(n);
  for (int v = 0; v < n; ++v) degree[v] = graph.degree(v);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    const double ca = std::abs(decomp.terms[graph.term_of_vertex[a]].coefficient);
    const double cb = std::abs(decomp.terms[graph.term_of_vertex[b]].coefficient);
    if (ca != cb) return ca > cb;
    return graph.term_of_vertex[a] < graph.term_of_vertex[b];
  });

  std::vector<char> assigned(n, 0);
  std::vector<MeasurementGroup> groups;
  for (int seed : order) {
    if (assigned[seed]) continue;
    assigned[seed] = 1;
    std::vector<int> vertices{seed};
    std::vector<char> compatible = graph.adjacency[seed];
    for (int v : order) {
      if (assigned[v] || !compatible[v]) continue;
      assigned[v] = 1;
      vertices.push_back(v);
      const auto& row = graph.adjacency[v];
      for (int k = 0; k < n; ++k) compatible[k] = compatible[k] && row[k];
    }

    MeasurementGroup group;
    for (int v : vertices) group.members.push_back(graph.term_of_vertex[v]);
    std::sort(group.members.begin(), group.members.end());
    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(group.members.size());
    for (int t : group.members) {
      group.weight += std::abs(decomp.terms[t].coefficient);
      ops.push_back(term_operator(decomp.terms[t], basis));
    }
    JointEigenbasis joint = joint_eigenbasis(ops);
    group.eigenbasis = std::move(joint.basis);
    group.member_values = std::move(joint.member_values);
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace qgem
