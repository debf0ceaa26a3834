#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sphform/graph.hpp"
#include "sphform/polyhedra.hpp"

namespace sphform {

/// Positive coupling gain expressed through the cosine of the pair angle,
/// h(theta) = value(cos theta). `slope` is d value / d cos.
struct GainFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> slope;
    /// Bound on |slope| over [-1, 1].
    double lipschitz = 0.0;

    double operator()(double angle) const;
    double of_cosine(double c) const { return value(c); }
};

/// exp(2 cos theta).
GainFunction exponential_gain();
/// h == 1.
GainFunction unit_gain();

/// -sum_j h(theta_ij) Gamma_i x Gamma_j over the neighbours of agent i.
Vec3 control_omega(int i, const FormationState& state, const InterAgentGraph& g, const GainFunction& h);

/// Gamma_i' = Gamma_i x (sum_j h Gamma_i x Gamma_j) for every agent. Tangent to
/// the sphere by construction.
FormationState closed_loop_rhs(const FormationState& state, const InterAgentGraph& g, const GainFunction& h);

/// Control expressed in body frame i, where Gamma_k == R_k b_k:
/// -sum_j h(theta_ij) b_i x (R_i^T Gamma_j).
Vec3 body_frame_control(int i, const FormationState& state, const InterAgentGraph& g, const GainFunction& h,
                        const Mat3& rotation, const Vec3& body_axis);

/// Rate of Gamma_i = R_i b_i produced by a body-frame angular velocity.
Vec3 body_frame_rate(const Mat3& rotation, const Vec3& body_axis, const Vec3& omega_body);

enum class Integrator { rk4, euler };

struct SimulationConfig {
    double step_size = 1e-3;
    double t_final = 50.0;
    Integrator integrator = Integrator::rk4;
    int renormalize_every = 1;
    /// Samples kept in the trajectory: one every `record_every` steps, plus the last.
    int record_every = 100;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on nonpositive step, horizon or intervals.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<FormationState> states;
    /// Largest | |Gamma_i| - 1 | seen just before any renormalization.
    double max_norm_drift = 0.0;
    long steps = 0;
};

Trajectory integrate(const FormationState& start, const InterAgentGraph& g, const GainFunction& h,
                     const SimulationConfig& cfg);

/// Independent uniform points on the sphere from normalized Gaussian triples.
FormationState random_state(int n, std::uint64_t seed);

/// Each attitude of `centre` displaced along a random tangent direction by a
/// uniform angle in [0, radius].
FormationState perturbed_state(const FormationState& centre, double radius, std::uint64_t seed);

/// Uniformly distributed rotation drawn from the given seed.
Mat3 random_rotation(std::uint64_t seed);

FormationState rotate(const Mat3& r, const FormationState& s);
FormationState permute(const Permutation& sigma, const FormationState& s);

enum class Outcome { converged_to_target, other_equilibrium, timeout, stayed_on_manifold };
std::string to_string(Outcome o);

struct OutcomeReport {
    Outcome outcome = Outcome::timeout;
    /// Best sup-norm distance of the pairwise inner products to the target.
    double xi_error = 0.0;
    /// Sup-norm of the inner-product rates at the final state.
    double xi_rate = 0.0;
    std::vector<int> relabeling;
};

/// Classifies the final state against the solid's formation with thresholds
/// 1e-4 on the relabeled inner-product error and 1e-8 on stationarity.
OutcomeReport classify_outcome(const FormationState& final_state, const SchlafliSolid& s,
                               const InterAgentGraph& g, const GainFunction& h);

}  // namespace sphform
