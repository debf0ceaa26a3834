#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphform/dynamics.hpp"
#include "sphform/graph.hpp"
#include "sphform/polyhedra.hpp"
#include "sphform/xi.hpp"

namespace sphform {

/// Thresholds shared by the rank, kernel and Hurwitz decisions.
struct Tolerances {
    /// Singular values below rank_rel * sigma_max count as zero.
    double rank_rel = 1e-8;
    /// Eigenvalues with real part below -hurwitz are stable.
    double hurwitz = 1e-7;
    /// Eigenvalues closer than cluster_rel * max(|A|, 1) are grouped.
    double cluster_rel = 1e-6;
};

/// x' = A x observed on the subspace F x = 0.
struct RestrictedLinearProblem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd F;
};

/// Orthonormal rows: T1 spans the largest A-invariant subspace inside ker F,
/// T3 spans the row space of F, T2 completes the basis.
struct InvariantSubspaceBasis {
    Eigen::MatrixXd T1;
    Eigen::MatrixXd T2;
    Eigen::MatrixXd T3;
    /// |(I - T1^T T1) A T1^T|, zero for an exactly invariant span.
    double invariance_residual = 0.0;

    Eigen::Index dimension() const { return T1.rows(); }
};

/// Orthonormal basis (columns) of the null space of m.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

/// Throws std::invalid_argument naming the first dependent row when F does
/// not have full row rank.
void require_full_row_rank(const Eigen::MatrixXd& F, double rel_tol = 1e-8);

/// Precomputes the spectral data of A so that the largest invariant subspace
/// inside ker F can be found cheaply for many F. The subspace splits into its
/// parts in the generalized eigenspaces of A; each part is found by the
/// kernel-intersection fixed point on that (small) eigenspace.
class InvariantSubspaceSolver {
public:
    explicit InvariantSubspaceSolver(Eigen::MatrixXd A, Tolerances tol = {});

    /// Empty F (zero rows) means the whole space.
    InvariantSubspaceBasis solve(const Eigen::MatrixXd& F) const;

    const Eigen::MatrixXd& matrix() const { return A_; }

private:
    struct Block {
        std::complex<double> eigenvalue;
        bool real = true;
        Eigen::MatrixXcd basis;    // orthonormal generalized eigenspace
        Eigen::MatrixXcd restricted;   // A on that basis
    };

    Eigen::MatrixXd A_;
    Tolerances tol_;
    std::vector<Block> blocks_;
};

InvariantSubspaceBasis max_invariant_subspace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& F,
                                              Tolerances tol = {});

struct RestrictedStability {
    bool stable = false;
    /// Eigenvalues of T1 A T1^T sorted by real part.
    std::vector<std::complex<double>> spectrum;
    Eigen::Index invariant_dimension = 0;
};

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m);

RestrictedStability restricted_stability_linear(const RestrictedLinearProblem& prob, Tolerances tol = {});

/// Rank test on the observability matrix of the pair (T3 A T2^T, T2 A T2^T).
bool observability_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& F, Tolerances tol = {});

struct Certificate {
    Eigen::MatrixXd P;
    /// Column order that makes the trailing block of F invertible.
    std::vector<int> column_order;
    /// Matrix whose stability is the certificate's second condition.
    Eigen::MatrixXd reduced;
    std::vector<std::complex<double>> placed_poles;
};

/// Builds P = [T1; T2 + K T3] with K placing the poles of T2 A T2^T + K T3 A T2^T
/// at -1, -2, ... even when the restriction is unstable.
Certificate certificate_candidate(const RestrictedLinearProblem& prob, Tolerances tol = {});

struct CertificateCheck {
    bool invertible = false;
    bool hurwitz = false;
    Eigen::MatrixXd reduced;
};

/// Evaluates both conditions for an arbitrary P: [P; F] invertible and
/// P A [I; -F2^-1 F1] (P [I; -F2^-1 F1])^-1 Hurwitz, after the column
/// reordering that makes F2 invertible.
CertificateCheck verify_certificate(const RestrictedLinearProblem& prob, const Eigen::MatrixXd& P,
                                    Tolerances tol = {});

/// The candidate when the restriction is stable and it verifies, otherwise nothing.
std::optional<Certificate> theorem2_certificate(const RestrictedLinearProblem& prob, Tolerances tol = {});

/// Column order (pivoted QR on F) whose last F.rows() columns form an invertible block.
/// Throws std::invalid_argument when no such order exists.
std::vector<int> invertible_trailing_columns(const Eigen::MatrixXd& F, double rel_tol = 1e-8);

/// Gain K with eig(a + K c) == poles for an observable pair (c, a).
Eigen::MatrixXd place_observer_poles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                                     const std::vector<double>& poles, unsigned seed = 7);

enum class Verdict { exponentially_stable, not_stable, inconclusive };
std::string to_string(Verdict v);

struct StabilityStep {
    int constraints = 0;
    Eigen::Index block_dimension = 0;
    int negative_count = 0;
};

struct StabilityReport {
    int p = 0;
    int q = 0;
    int m_max = 0;
    std::vector<ConstraintSubset> constraint_sets;
    std::vector<std::complex<double>> restricted_spectrum;
    Verdict verdict = Verdict::inconclusive;
    std::vector<StabilityStep> history;
    /// 2n - 3, the cardinality threshold of the stepwise test.
    int required_negative = 0;
    /// Rank of the stacked constraint gradients at the equilibrium.
    Eigen::Index gradient_rank = 0;
    /// True when candidates outside the {0,1,2,i} family were needed.
    bool used_extended_candidates = false;
    double jacobian_seconds = 0.0;
    double total_seconds = 0.0;
};

struct Algorithm1Options {
    Tolerances tol;
    /// After the {0,1,2,i} family, continue with all other quadruples in lexicographic order.
    bool extended_candidates = true;
};

/// Stepwise test: adjoin nonsingular Gram constraints at the equilibrium until
/// the restricted block is Hurwitz (stable) or has fewer than 2n - 3 stable
/// eigenvalues (not stable).
StabilityReport algorithm1(const SchlafliSolid& s, const InterAgentGraph& g, const GainFunction& h,
                           const Algorithm1Options& opt = {});

/// Nonlinear conclusion from a report: full-row-rank constraints and a Hurwitz
/// restricted block.
bool theorem3_exponential_lift(const StabilityReport& report, Tolerances tol = {});

}  // namespace sphform
