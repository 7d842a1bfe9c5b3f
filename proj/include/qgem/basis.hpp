#pragma once

// Hermitian operator basis (generalized Gell-Mann matrices), witness
// decomposition into tensor-product terms, the pairwise-commutation graph of
// those terms, and a greedy clique cover that turns the graph into jointly
// measurable groups sharing one eigenbasis.

#include <Eigen/Dense>

#include <vector>

#include "qgem/witness.hpp"

namespace qgem {

enum class BasisFamily { identity, symmetric, antisymmetric, diagonal };

struct BasisElement {
  int index = 0;
  BasisFamily family = BasisFamily::identity;
  Eigen::MatrixXcd matrix;
  double hs_norm_sq = 0.0;  // Tr(m^2): D for identity, 2 otherwise
};

// Ordering: identity, then off-diagonal symmetric pairs (j,k) in
// lexicographic order, then the matching antisymmetric pairs, then the D-1
// diagonal elements.  D^2 elements in total, pairwise orthogonal under the
// Hilbert-Schmidt inner product.
std::vector<BasisElement> gell_mann_basis(int dimension);

struct WitnessTerm {
  int i = 0;  // basis index on qudit 1
  int j = 0;  // basis index on qudit 2
  double coefficient = 0.0;
};

struct WitnessDecomposition {
  int dimension = 0;
  std::vector<WitnessTerm> terms;  // |c| above threshold, (i,j) row-major
  double total_weight = 0.0;       // sum of |c| over retained terms
  double epsilon_abs = 0.0;        // absolute drop threshold actually used
};

// W = sum c_ij (b_i x b_j) by Hilbert-Schmidt projection.  Terms with
// |c| <= epsilon_rel * max|c| are dropped; epsilon_rel = 0 keeps everything.
WitnessDecomposition decompose_witness(const Witness& witness,
                                       double epsilon_rel = 1e-8);

// Reassembled operator from the retained terms (exact when epsilon_rel = 0).
Eigen::MatrixXcd reconstruct_witness(const WitnessDecomposition& decomp,
                                     const std::vector<BasisElement>& basis);

// Vertices are the retained non-identity terms (identity never needs a
// measurement); an edge joins two terms whose tensor operators commute.
struct CommutationGraph {
  std::vector<int> term_of_vertex;        // vertex -> index into decomp.terms
  std::vector<std::vector<char>> adjacency;

  int vertex_count() const { return static_cast<int>(term_of_vertex.size()); }
  int degree(int v) const;
};

CommutationGraph commutation_graph(const WitnessDecomposition& decomp,
                                   const std::vector<BasisElement>& basis);

struct MeasurementGroup {
  std::vector<int> members;  // indices into decomp.terms, ascending
  double weight = 0.0;       // sum of |c| over members
  Eigen::MatrixXcd eigenbasis;                  // shared eigenvectors, columns
  std::vector<Eigen::VectorXd> member_values;   // eigenvalue of each member
                                                // per eigenbasis column
};

// Largest-degree-first clique cover: seed each group with the unassigned
// vertex of highest degree (ties: larger |c|, then lower term index), then
// greedily absorb, in the same order, every unassigned vertex commuting with
// all current members.  D = 2 collapses to a single group when the graph is
// complete.
std::vector<MeasurementGroup> group_terms_ldfc(
    const CommutationGraph& graph, const WitnessDecomposition& decomp,
    const std::vector<BasisElement>& basis);

// Common eigenbasis of pairwise commuting Hermitian matrices: diagonalize a
// deterministic random-weighted sum, then split any degenerate subspace with
// each member in turn.  Throws if any conjugated member keeps off-diagonal
// mass above 1e-8 (members did not actually commute).
struct JointEigenbasis {
  Eigen::MatrixXcd basis;
  std::vector<Eigen::VectorXd> member_values;
};

JointEigenbasis joint_eigenbasis(const std::vector<Eigen::MatrixXcd>& members);

// Tensor operator b_i x b_j of a term.
Eigen::MatrixXcd term_operator(const WitnessTerm& term,
                               const std::vector<BasisElement>& basis);

}  // namespace qgem
