#include "sphform/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sphform/xi.hpp"

namespace sphform {

double GainFunction::operator()(double angle) const
{
    return value(std::cos(angle));
}

GainFunction exponential_gain()
{
    return {"exp(2cos)",
            [](double c) { return std::exp(2.0 * c); },
            [](double c) { return 2.0 * std::exp(2.0 * c); },
            2.0 * std::exp(2.0)};
}

GainFunction unit_gain()
{
    return {"unit", [](double) { return 1.0; }, [](double) { return 0.0; }, 0.0};
}

Vec3 control_omega(int i, const FormationState& state, const InterAgentGraph& g, const GainFunction& h)
{
    const Vec3& gi = state[static_cast<std::size_t>(i)];
    Vec3 w = Vec3::Zero();
    for (int j : g.neighbors(i)) {
        const Vec3& gj = state[static_cast<std::size_t>(j)];
        w -= h.value(std::clamp(gi.dot(gj), -1.0, 1.0)) * gi.cross(gj);
    }
    return w;
}

FormationState closed_loop_rhs(const FormationState& state, const InterAgentGraph& g, const GainFunction& h)
{
    // accumulate -omega_i, visiting each edge once
    FormationState acc(state.size(), Vec3::Zero());
    for (int i = 0; i < g.size(); ++i) {
        const Vec3& gi = state[static_cast<std::size_t>(i)];
        for (int j : g.neighbors(i)) {
            if (j < i)
                continue;
            const Vec3& gj = state[static_cast<std::size_t>(j)];
            const Vec3 c = h.value(std::clamp(gi.dot(gj), -1.0, 1.0)) * gi.cross(gj);
            acc[static_cast<std::size_t>(i)] += c;
            acc[static_cast<std::size_t>(j)] -= c;
        }
    }
    for (std::size_t i = 0; i < state.size(); ++i)
        acc[i] = state[i].cross(acc[i]);
    return acc;
}

Vec3 body_frame_control(int i, const FormationState& state, const InterAgentGraph& g, const GainFunction& h,
                        const Mat3& rotation, const Vec3& body_axis)
{
    Vec3 w = Vec3::Zero();
    for (int j : g.neighbors(i)) {
        const Vec3 rel = rotation.transpose() * state[static_cast<std::size_t>(j)];
        w -= h.value(std::clamp(body_axis.dot(rel), -1.0, 1.0)) * body_axis.cross(rel);
    }
    return w;
}

Vec3 body_frame_rate(const Mat3& rotation, const Vec3& body_axis, const Vec3& omega_body)
{
    return rotation * omega_body.cross(body_axis);
}

void SimulationConfig::validate() const
{
    if (!(step_size > 0.0) || !std::isfinite(step_size))
        throw std::invalid_argument("step size must be positive");
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw std::invalid_argument("final time must be positive");
    if (renormalize_every < 1)
        throw std::invalid_argument("renormalization interval must be at least 1");
    if (record_every < 1)
        throw std::invalid_argument("record interval must be at least 1");
}

namespace {

void axpy(FormationState& y, double a, const FormationState& x)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += a * x[i];
}

FormationState add(const FormationState& y, double a, const FormationState& x)
{
    FormationState out = y;
    axpy(out, a, x);
    return out;
}

}  // namespace

Trajectory integrate(const FormationState& start, const InterAgentGraph& g, const GainFunction& h,
                     const SimulationConfig& cfg)
{
    cfg.validate();
    if (static_cast<int>(start.size()) != g.size())
        throw std::invalid_argument("state and graph sizes differ");

    Trajectory tr;
    const double dt = cfg.step_size;
    const long steps = std::max(1L, std::lround(cfg.t_final / dt));
    FormationState x = start;
    tr.times.push_back(0.0);
    tr.states.push_back(x);

    for (long k = 1; k <= steps; ++k) {
        if (cfg.integrator == Integrator::rk4) {
            const auto k1 = closed_loop_rhs(x, g, h);
            const auto k2 = closed_loop_rhs(add(x, dt / 2, k1), g, h);
            const auto k3 = closed_loop_rhs(add(x, dt / 2, k2), g, h);
            const auto k4 = closed_loop_rhs(add(x, dt, k3), g, h);
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        } else {
            axpy(x, dt, closed_loop_rhs(x, g, h));
        }
        if (k % cfg.renormalize_every == 0) {
            for (auto& v : x) {
                tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(v.norm() - 1.0));
                v.normalize();
            }
        }
        if (k % cfg.record_every == 0 || k == steps) {
            tr.times.push_back(static_cast<double>(k) * dt);
            tr.states.push_back(x);
        }
    }
    for (const auto& v : x)
        tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(v.norm() - 1.0));
    tr.steps = steps;
    return tr;
}

namespace {

Vec3 gaussian_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> n01;
    for (;;) {
        Vec3 v(n01(rng), n01(rng), n01(rng));
        if (v.norm() > 1e-12)
            return v.normalized();
    }
}

}  // namespace

FormationState random_state(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    FormationState s;
    for (int i = 0; i < n; ++i)
        s.push_back(gaussian_unit(rng));
    return s;
}

FormationState perturbed_state(const FormationState& centre, double radius, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, radius);
    FormationState s;
    for (const Vec3& c : centre) {
        Vec3 t;
        do {
            const Vec3 u = gaussian_unit(rng);
            t = u - c * c.dot(u);
        } while (t.norm() < 1e-9);
        const double a = angle(rng);
        s.push_back(std::cos(a) * c + std::sin(a) * t.normalized());
    }
    return s;
}

Mat3 random_rotation(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
    q.normalize();
    return q.toRotationMatrix();
}

FormationState rotate(const Mat3& r, const FormationState& s)
{
    FormationState out;
    out.reserve(s.size());
    for (const auto& v : s)
        out.push_back(r * v);
    return out;
}

FormationState permute(const Permutation& sigma, const FormationState& s)
{
    FormationState out(s.size());
    for (int i = 0; i < sigma.size(); ++i)
        out[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(sigma(i))];
    return out;
}

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::converged_to_target:
        return "converged-to-target";
    case Outcome::other_equilibrium:
        return "other-equilibrium";
    case Outcome::timeout:
        return "timeout";
    case Outcome::stayed_on_manifold:
        return "stayed-on-manifold";
    }
    return "unknown";
}

OutcomeReport classify_outcome(const FormationState& final_state, const SchlafliSolid& s,
                               const InterAgentGraph& g, const GainFunction& h)
{
    OutcomeReport rep;
    const auto match = best_relabeling(final_state, s.vertices);
    rep.xi_error = match.xi_error;
    rep.relabeling = match.relabeling;
    const auto xi = xi_transform(final_state).xi_s;
    rep.xi_rate = xi_s_rhs(xi, g, h).cwiseAbs().maxCoeff();
    if (rep.xi_error < 1e-4)
        rep.outcome = Outcome::converged_to_target;
    else if (rep.xi_rate < 1e-8)
        rep.outcome = Outcome::other_equilibrium;
    else
        rep.outcome = Outcome::timeout;
    return rep;
}

}  // namespace sphform
