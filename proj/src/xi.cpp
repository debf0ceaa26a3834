#include "sphform/xi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sphform {

int pair_index(int i, int j, int n)
{
    if (i > j)
        std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

int pair_count(int n)
{
    return n * (n - 1) / 2;
}

int agents_from_pairs(Eigen::Index len)
{
    const int n = static_cast<int>(std::lround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(len))) / 2.0));
    if (pair_count(n) != len || n < 2)
        throw std::invalid_argument("length " + std::to_string(len) + " is not a pair count");
    return n;
}

ConstraintSubset::ConstraintSubset(std::array<int, 4> indices)
    : idx_(indices)
{
    std::sort(idx_.begin(), idx_.end());
    if (idx_[0] < 0 || std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end())
        throw std::invalid_argument("constraint subset needs four distinct nonnegative indices");
}

XiState xi_transform(const FormationState& state)
{
    const int n = static_cast<int>(state.size());
    if (n < 2)
        throw std::invalid_argument("need at least two agents");
    XiState out;
    out.xi_s.resize(pair_count(n));
    for (int i = 0, k = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.xi_s[k++] = state[static_cast<std::size_t>(i)].dot(state[static_cast<std::size_t>(j)]);

    const RpyAngles a = to_rpy(state[0]);
    const RpyAngles b = to_rpy(state[1]);
    out.xi_c.x() = a.phi;
    out.xi_c.y() = a.psi;
    out.heading_degenerate = state[0].cross(state[1]).norm() < 1e-12;
    if (!out.heading_degenerate)
        out.xi_c.z() = std::atan2(std::cos(b.phi) * std::sin(b.psi - a.psi),
                                  std::sin(a.phi) * std::cos(b.phi) * std::cos(b.psi - a.psi) -
                                      std::cos(a.phi) * std::sin(b.phi));
    return out;
}

namespace {

// Inner product of agents a and b, with the unit diagonal.
struct PairReader {
    const Eigen::VectorXd& xi;
    int n;
    double operator()(int a, int b) const { return a == b ? 1.0 : xi[pair_index(a, b, n)]; }
};

}  // namespace

Eigen::VectorXd xi_s_rhs(const Eigen::VectorXd& xi_s, const InterAgentGraph& g, const GainFunction& h)
{
    const int n = agents_from_pairs(xi_s.size());
    if (n != g.size())
        throw std::invalid_argument("inner-product vector and graph sizes differ");
    const PairReader x{xi_s, n};
    Eigen::VectorXd out(xi_s.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double xij = x(i, j);
            double r = 0.0;
            for (int k : g.neighbors(j))
                r += h.value(x(j, k)) * (xij * x(j, k) - x(i, k));
            for (int k : g.neighbors(i))
                r += h.value(x(i, k)) * (xij * x(i, k) - x(j, k));
            out[pair_index(i, j, n)] = r;
        }
    return out;
}

Eigen::MatrixXd xi_s_jacobian(const Eigen::VectorXd& xi_s, const InterAgentGraph& g, const GainFunction& h)
{
    const int n = agents_from_pairs(xi_s.size());
    if (n != g.size())
        throw std::invalid_argument("inner-product vector and graph sizes differ");
    const PairReader x{xi_s, n};
    const Eigen::Index d = xi_s.size();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d, d);
    auto add = [&](Eigen::Index row, int a, int b, double v) {
        if (a != b)
            jac(row, pair_index(a, b, n)) += v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Index row = pair_index(i, j, n);
            const double xij = x(i, j);
            // term h(x_pk) (x_ij x_pk - x_ok) with (p, o) = (j, i) and (i, j)
            for (auto [p, o] : {std::pair{j, i}, std::pair{i, j}})
                for (int k : g.neighbors(p)) {
                    const double xpk = x(p, k);
                    const double hv = h.value(xpk);
                    add(row, p, k, h.slope(xpk) * (xij * xpk - x(o, k)) + hv * xij);
                    jac(row, row) += hv * xpk;
                    add(row, o, k, -hv);
                }
        }
    return jac;
}

Eigen::Matrix4d gram_matrix(const Eigen::VectorXd& xi_s, const ConstraintSubset& c)
{
    const int n = agents_from_pairs(xi_s.size());
    if (c[3] >= n)
        throw std::invalid_argument("constraint index out of range");
    const PairReader x{xi_s, n};
    Eigen::Matrix4d m;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            m(a, b) = x(c[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(b)]);
    return m;
}

double gram_constraint(const Eigen::VectorXd& xi_s, const ConstraintSubset& c)
{
    return gram_matrix(xi_s, c).determinant();
}

Eigen::VectorXd gram_gradient(const Eigen::VectorXd& xi_s, const ConstraintSubset& c)
{
    const int n = agents_from_pairs(xi_s.size());
    const Eigen::Matrix4d m = gram_matrix(xi_s, c);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(xi_s.size());
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            Eigen::Matrix3d minor;
            for (int r = 0, rr = 0; r < 4; ++r) {
                if (r == a)
                    continue;
                for (int s = 0, ss = 0; s < 4; ++s) {
                    if (s == b)
                        continue;
                    minor(rr, ss++) = m(r, s);
                }
                ++rr;
            }
            // the entry appears twice in the symmetric matrix
            const double cofactor = ((a + b) % 2 ? -1.0 : 1.0) * minor.determinant();
            grad[pair_index(c[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(b)], n)] = 2.0 * cofactor;
        }
    return grad;
}

Eigen::VectorXd equilibrium_xi(const SchlafliSolid& s)
{
    return xi_transform(s.vertices).xi_s;
}

DimensionCounts redundancy_count(int n)
{
    if (n < 4)
        throw std::invalid_argument("redundancy count needs at least four agents");
    return {n, (n - 2) * (n - 3) / 2, pair_count(n) + 3, 2 * n};
}

Relabeling best_relabeling(const FormationState& state, const FormationState& vertices)
{
    const int n = static_cast<int>(state.size());
    if (static_cast<int>(vertices.size()) != n)
        throw std::invalid_argument("state and vertex counts differ");
    Relabeling best;
    best.xi_error = std::numeric_limits<double>::infinity();

    // anchor: agent 0 and the agent least parallel to it
    int partner = 1;
    for (int k = 2; k < n; ++k)
        if (std::abs(state[0].dot(state[static_cast<std::size_t>(k)])) <
            std::abs(state[0].dot(state[static_cast<std::size_t>(partner)])))
            partner = k;
    auto frame = [](const Vec3& a, const Vec3& b) {
        const Vec3 u = a.normalized();
        Vec3 w = u.cross(b);
        w = w.norm() > 1e-12 ? w.normalized() : rotation_axis(u, u);
        Mat3 f;
        f.col(0) = u;
        f.col(1) = w;
        f.col(2) = u.cross(w);
        return f;
    };
    const Mat3 fs = frame(state[0], state[static_cast<std::size_t>(partner)]);

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b)
                continue;
            const Mat3 r = frame(vertices[static_cast<std::size_t>(a)], vertices[static_cast<std::size_t>(b)]) *
                           fs.transpose();
            const auto img = greedy_match(rotate(r, state), vertices);
            double err = 0.0;
            for (int i = 0; i < n && err < best.xi_error; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double target = vertices[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])].dot(
                        vertices[static_cast<std::size_t>(img[static_cast<std::size_t>(j)])]);
                    err = std::max(err, std::abs(state[static_cast<std::size_t>(i)].dot(
                                                     state[static_cast<std::size_t>(j)]) - target));
                }
            if (err < best.xi_error) {
                best.xi_error = err;
                best.relabeling = img;
            }
        }
    return best;
}

}  // namespace sphform
