#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "sphform/dynamics.hpp"
#include "sphform/graph.hpp"
#include "sphform/polyhedra.hpp"

namespace sphform {

/// Pairwise inner products in lexicographic pair order plus the absolute
/// attitude triple (elevation and azimuth of agent 0, then the heading of
/// agent 1 about agent 0).
struct XiState {
    Eigen::VectorXd xi_s;
    Vec3 xi_c = Vec3::Zero();
    /// Set when agents 0 and 1 are parallel or antiparallel; the heading is then 0.
    bool heading_degenerate = false;
};

/// Position of pair (i, j), i != j, in the lexicographic list of n agents.
int pair_index(int i, int j, int n);
int pair_count(int n);
/// Inverse of pair_count. Throws std::invalid_argument if len is not n(n-1)/2.
int agents_from_pairs(Eigen::Index len);

/// Four distinct agents, stored sorted.
class ConstraintSubset {
public:
    /// Throws std::invalid_argument on repeated or negative indices.
    explicit ConstraintSubset(std::array<int, 4> indices);
    const std::array<int, 4>& indices() const { return idx_; }
    int operator[](std::size_t k) const { return idx_[k]; }
    friend bool operator==(const ConstraintSubset&, const ConstraintSubset&) = default;

private:
    std::array<int, 4> idx_;
};

/// Throws std::invalid_argument for fewer than two agents.
XiState xi_transform(const FormationState& state);

/// Rates of the pairwise inner products; depends on xi_s alone.
Eigen::VectorXd xi_s_rhs(const Eigen::VectorXd& xi_s, const InterAgentGraph& g, const GainFunction& h);

/// Closed-form derivative of xi_s_rhs.
Eigen::MatrixXd xi_s_jacobian(const Eigen::VectorXd& xi_s, const InterAgentGraph& g, const GainFunction& h);

/// 4x4 Gram matrix of the subset read from xi_s.
Eigen::Matrix4d gram_matrix(const Eigen::VectorXd& xi_s, const ConstraintSubset& c);

/// Determinant of the Gram matrix; zero for any four vectors in R^3.
double gram_constraint(const Eigen::VectorXd& xi_s, const ConstraintSubset& c);

/// Gradient of gram_constraint with respect to xi_s (twice the cofactors).
Eigen::VectorXd gram_gradient(const Eigen::VectorXd& xi_s, const ConstraintSubset& c);

/// Inner products of the solid's vertices.
Eigen::VectorXd equilibrium_xi(const SchlafliSolid& s);

struct DimensionCounts {
    int agents = 0;
    /// (n-2)(n-3)/2 constraints needed to cut the inner products down to 2n - 3.
    int redundancy = 0;
    /// Inner products plus the absolute attitude triple.
    int xi_dimension = 0;
    int degrees_of_freedom = 0;
};

/// Throws std::invalid_argument for fewer than four agents.
DimensionCounts redundancy_count(int n);

struct Relabeling {
    /// relabeling[i] is the solid vertex assigned to agent i.
    std::vector<int> relabeling;
    double xi_error = 0.0;
};

/// Greedy search over rotation anchors for the vertex assignment that brings
/// the state's inner products closest to the solid's in sup norm.
Relabeling best_relabeling(const FormationState& state, const FormationState& vertices);

}  // namespace sphform
